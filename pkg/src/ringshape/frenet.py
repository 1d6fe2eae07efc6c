"""Torsion and curvature of one-particle Hamiltonian trajectories.

Two routes are provided: the generic parametrized-curve formulas, and a
closed form for conservative systems that needs only the instantaneous
position, velocity, and the first two derivatives of the potential.

Sign convention: torsion carries a leading minus relative to the most
common textbook definition, so the right-handed helix (cos t, sin t, t)
has tau = -1/2 here. Both routes share the convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import DomainError, PhaseState

Vector = np.ndarray


@dataclass(frozen=True)
class FrenetData:
    """Torsion and curvature with the raw numerator/denominator split.

    ``torsion = -num / den`` whenever ``den > 0``; ``curvature =
    sqrt(den) / den_k`` whenever ``den_k > 0``. Undefined values are NaN.
    """

    torsion: float
    curvature: float
    num: float
    den: float
    den_k: float

    @property
    def torsion_defined(self) -> bool:
        return math.isfinite(self.torsion)


@dataclass(frozen=True)
class PotentialModel:
    """A potential with its first two derivatives.

    Callbacks take a length-3 position array and must be stateless; they
    may raise DomainError at singular points.
    """

    value: Callable[[Vector], float]
    gradient: Callable[[Vector], Vector]
    hessian: Callable[[Vector], Vector]


def _assemble(num: float, den: float, speed: float) -> FrenetData:
    den_k = speed ** 3
    torsion = -num / den if den > 0.0 else math.nan
    curvature = math.sqrt(den) / den_k if den_k > 0.0 else math.nan
    return FrenetData(torsion=torsion, curvature=curvature, num=num, den=den, den_k=den_k)


def frenet_parametric(rdot, rddot, rdddot) -> FrenetData:
    """Torsion and curvature of a curve from its first three time derivatives."""
    rdot = np.asarray(rdot, dtype=float)
    rddot = np.asarray(rddot, dtype=float)
    rdddot = np.asarray(rdddot, dtype=float)
    w = np.cross(rdot, rddot)
    num = float(w @ rdddot)
    den = float(w @ w)
    return _assemble(num, den, float(np.linalg.norm(rdot)))


def torsion_terms_expanded(gradient: Vector, hessian: Vector, velocity: Vector,
                           mass: float = 1.0) -> tuple[float, float]:
    """(num, den) for a conservative system, written out component by component."""
    gx, gy, gz = gradient
    vx, vy, vz = velocity
    h = hessian
    num = ((vy * gz - vz * gy) * (h[0, 0] * vx + h[1, 0] * vy + h[2, 0] * vz)
           + (vz * gx - vx * gz) * (h[0, 1] * vx + h[1, 1] * vy + h[2, 1] * vz)
           + (vx * gy - vy * gx) * (h[0, 2] * vx + h[1, 2] * vy + h[2, 2] * vz))
    den = ((vy * gz - vz * gy) ** 2
           + (vz * gx - vx * gz) ** 2
           + (vx * gy - vy * gx) ** 2)
    mu2 = mass * mass
    return num / mu2, den / mu2


def torsion_terms_compact(gradient: Vector, hessian: Vector, velocity: Vector,
                          mass: float = 1.0) -> tuple[float, float]:
    """(num, den) for a conservative system in cross-product form."""
    w = np.cross(velocity, gradient)
    mu2 = mass * mass
    return float(w @ (hessian @ velocity)) / mu2, float(w @ w) / mu2


def frenet_conservative(potential: PotentialModel, state: PhaseState,
                        mass: float = 1.0) -> FrenetData:
    """Torsion and curvature at a phase point of a conservative system.

    Equivalent to :func:`frenet_parametric` with the accelerations supplied
    by the equations of motion, but expressed in positions and velocities
    only. ``den = 0`` (velocity parallel to the force) leaves the torsion
    undefined.
    """
    if mass <= 0.0:
        raise DomainError("mass must be positive")
    pos = np.array(state.position, dtype=float)
    vel = np.array(state.velocity, dtype=float)
    grad = np.asarray(potential.gradient(pos), dtype=float)
    hess = np.asarray(potential.hessian(pos), dtype=float)
    num, den = torsion_terms_expanded(grad, hess, vel, mass)
    return _assemble(num, den, float(np.linalg.norm(vel)))


def frenet_general(potential: PotentialModel, state: PhaseState, mass: float = 1.0,
                   time_gradient: Optional[Callable[[Vector], Vector]] = None) -> FrenetData:
    """Torsion and curvature allowing an explicitly time-dependent potential.

    ``time_gradient`` supplies the mixed derivative d/dt grad V at the
    state's position; it defaults to zero, which reduces to the
    conservative case.
    """
    if mass <= 0.0:
        raise DomainError("mass must be positive")
    pos = np.array(state.position, dtype=float)
    vel = np.array(state.velocity, dtype=float)
    grad = np.asarray(potential.gradient(pos), dtype=float)
    hess = np.asarray(potential.hessian(pos), dtype=float)
    rddot = -grad / mass
    mixed = np.zeros(3) if time_gradient is None else np.asarray(time_gradient(pos), dtype=float)
    rdddot = -(hess @ vel + mixed) / mass
    return frenet_parametric(vel, rddot, rdddot)


def finite_difference_model(value_only: Callable[[Vector], float],
                            step: Optional[float] = None) -> PotentialModel:
    """Wrap a scalar potential with central-difference derivatives.

    When ``step`` is omitted the gradient uses eps**(1/3) and the second
    differences eps**(1/4), each scaled by max(1, |r|); an explicit step
    is used verbatim for both. Evaluation errors at singular points
    propagate unchanged.
    """
    if step is not None and not step > 0.0:
        raise DomainError("finite-difference step must be positive")
    eps = float(np.finfo(float).eps)

    def steps_at(pos: Vector) -> tuple[float, float]:
        if step is not None:
            return step, step
        scale = max(1.0, float(np.linalg.norm(pos)))
        return eps ** (1.0 / 3.0) * scale, eps ** 0.25 * scale

    def gradient(pos: Vector) -> Vector:
        pos = np.asarray(pos, dtype=float)
        h, _ = steps_at(pos)
        g = np.empty(3)
        for i in range(3):
            e = np.zeros(3)
            e[i] = h
            g[i] = (value_only(pos + e) - value_only(pos - e)) / (2.0 * h)
        return g

    def hessian(pos: Vector) -> Vector:
        pos = np.asarray(pos, dtype=float)
        _, h = steps_at(pos)
        out = np.empty((3, 3))
        f0 = value_only(pos)
        for i in range(3):
            ei = np.zeros(3)
            ei[i] = h
            out[i, i] = (value_only(pos + ei) - 2.0 * f0 + value_only(pos - ei)) / (h * h)
            for j in range(i + 1, 3):
                ej = np.zeros(3)
                ej[j] = h
                mixed = (value_only(pos + ei + ej) - value_only(pos + ei - ej)
                         - value_only(pos - ei + ej) + value_only(pos - ei - ej)) / (4.0 * h * h)
                out[i, j] = out[j, i] = mixed
        return out

    return PotentialModel(value=lambda p: float(value_only(np.asarray(p, dtype=float))),
                          gradient=gradient, hessian=hessian)
