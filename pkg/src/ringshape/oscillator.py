"""The oscillatory ring-shaped system: a harmonic well plus a repulsive ring.

Potential energy (unit mass):

    U = omega**2 (x**2 + y**2 + z**2) / 2 + q / (2 (x**2 + y**2))

All motions are bounded between two coaxial cylinders of radii rho1 <= rho2
and height 2 z0. This module provides the potential, the full integral set,
the closed-form trajectory and its constants, equipotential curves, planarity
via torsion, (quasi-)periodicity detection, the orbit-averaged potential, the
degenerate cylinder orbits, and the semiclassical spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import (
    AXIS_GUARD,
    DEGENERATE_RTOL,
    RATIONAL_MAX_DEN,
    RATIONAL_TOL,
    TWO_PI,
    ZERO_TOL,
    DomainError,
    MotionConstants,
    OscParams,
    PhaseState,
    PlanarityClass,
    RationalApprox,
    angular_momentum,
    best_rational,
    from_cylindrical,
)
from .frenet import PotentialModel


@dataclass(frozen=True)
class OscOrbit:
    """Six-constant parametrization of a bounded orbit.

    ``rho1``/``rho2`` are the turning radii, ``z0`` the axial amplitude,
    ``phi0`` the azimuth constant, ``t0`` the radial time offset and
    ``t0p`` the axial phase time offset.
    """

    rho1: float
    rho2: float
    z0: float
    phi0: float = 0.0
    t0: float = 0.0
    t0p: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.rho1 <= self.rho2 and self.rho2 > 0.0):
            raise DomainError("turning radii must satisfy 0 <= rho1 <= rho2, rho2 > 0")
        if self.z0 < 0.0:
            raise DomainError("z amplitude must be non-negative")

    @property
    def sum_sq(self) -> float:
        return self.rho1 ** 2 + self.rho2 ** 2

    @property
    def diff_sq(self) -> float:
        return self.rho2 ** 2 - self.rho1 ** 2

    @property
    def alpha(self) -> float:
        """Shape angle with sin = diff_sq/sum_sq and cos = 2 rho1 rho2/sum_sq."""
        return math.atan2(self.diff_sq, 2.0 * self.rho1 * self.rho2)

    @property
    def degenerate(self) -> bool:
        return self.diff_sq < DEGENERATE_RTOL * self.rho2 ** 2


@dataclass(frozen=True)
class OscInvariants:
    """Values of the six integrals of motion at a phase point.

    ``a4`` and ``a5`` are the spheroidal-coordinate invariants; they are
    linear in the others, a4/a5 = a1 +/- 2 a_scale**2 (a2 - h), for any
    positive spheroidal scale.
    """

    h: float
    a1: float
    a2: float
    a3: float
    a4: float
    a5: float
    a_scale: float


@dataclass(frozen=True)
class OscBounds:
    rho1: float
    rho2: float
    z0: float
    degenerate: bool


@dataclass(frozen=True)
class OscPlanarity:
    verdict: PlanarityClass
    torsion_num: float
    torsion_den: float

    @property
    def torsion(self) -> float:
        return -self.torsion_num / self.torsion_den if self.torsion_den > 0.0 else math.nan


@dataclass(frozen=True)
class OscPeriodicity:
    """Outcome of the closed-orbit test on the frequency ratio m_eff/m."""

    kind: str                       # "periodic" | "quasi_periodic" | "meridional"
    ratio: Optional[float]          # m_eff/m, None when m = 0
    rational: Optional[RationalApprox]
    period: Optional[float]


@dataclass(frozen=True)
class EquipotentialCurve:
    """Sampled half-section of an equipotential surface (z >= 0 branch)."""

    rho: np.ndarray
    z: np.ndarray
    rho_min: float
    rho_max: float
    degenerate: bool


# ---------------------------------------------------------------------------
# potential and invariants
# ---------------------------------------------------------------------------

def _check_off_axis(rho_sq: float) -> None:
    if rho_sq <= AXIS_GUARD * AXIS_GUARD:
        raise DomainError("state lies on the singular symmetry axis (rho ~ 0)")


def osc_potential(p: OscParams, state: PhaseState) -> float:
    """Potential energy at a phase point; the symmetry axis is rejected."""
    rho_sq = state.x * state.x + state.y * state.y
    _check_off_axis(rho_sq)
    r_sq = rho_sq + state.z * state.z
    return 0.5 * p.omega ** 2 * r_sq + 0.5 * p.q / rho_sq


def osc_potential_model(p: OscParams) -> PotentialModel:
    """Analytic value/gradient/hessian callbacks for this potential."""
    om2, q = p.omega ** 2, p.q

    def value(pos) -> float:
        x, y, z = pos
        rho_sq = x * x + y * y
        _check_off_axis(rho_sq)
        return 0.5 * om2 * (rho_sq + z * z) + 0.5 * q / rho_sq

    def gradient(pos):
        x, y, z = pos
        rho_sq = x * x + y * y
        _check_off_axis(rho_sq)
        rho4 = rho_sq * rho_sq
        return np.array([om2 * x - q * x / rho4, om2 * y - q * y / rho4, om2 * z])

    def hessian(pos):
        x, y, z = pos
        rho_sq = x * x + y * y
        _check_off_axis(rho_sq)
        rho4 = rho_sq * rho_sq
        rho6 = rho4 * rho_sq
        h = np.zeros((3, 3))
        h[0, 0] = om2 - q / rho4 + 4.0 * q * x * x / rho6
        h[1, 1] = om2 - q / rho4 + 4.0 * q * y * y / rho6
        h[0, 1] = h[1, 0] = 4.0 * q * x * y / rho6
        h[2, 2] = om2
        return h

    return PotentialModel(value=value, gradient=gradient, hessian=hessian)


def osc_invariants(p: OscParams, state: PhaseState, a_scale: float = 1.0) -> OscInvariants:
    """Evaluate the integral set {H, A1..A5} at a phase point."""
    if a_scale <= 0.0:
        raise DomainError("spheroidal scale must be positive")
    rho_sq = state.x * state.x + state.y * state.y
    _check_off_axis(rho_sq)
    l1, l2, l3 = angular_momentum(state)
    r_sq = rho_sq + state.z * state.z
    a1 = l1 * l1 + l2 * l2 + l3 * l3 + p.q * r_sq / rho_sq
    a2 = 0.5 * (state.vz * state.vz + p.omega ** 2 * state.z * state.z)
    h = state.kinetic + osc_potential(p, state)
    shift = 2.0 * a_scale * a_scale * (a2 - h)
    return OscInvariants(h=h, a1=a1, a2=a2, a3=l3, a4=a1 + shift, a5=a1 - shift,
                         a_scale=a_scale)


def osc_invariant_functions(p: OscParams, a_scale: float = 1.0) -> dict[str, Callable[[PhaseState], float]]:
    """Named invariant evaluators, e.g. for drift reports."""
    return {
        "H": lambda s: osc_invariants(p, s, a_scale).h,
        "A1": lambda s: osc_invariants(p, s, a_scale).a1,
        "A2": lambda s: osc_invariants(p, s, a_scale).a2,
        "A3": lambda s: osc_invariants(p, s, a_scale).a3,
        "A4": lambda s: osc_invariants(p, s, a_scale).a4,
        "A5": lambda s: osc_invariants(p, s, a_scale).a5,
    }


# ---------------------------------------------------------------------------
# orbit geometry <-> constants of motion
# ---------------------------------------------------------------------------

def osc_bounds(p: OscParams, c: MotionConstants) -> OscBounds:
    """Turning radii and axial amplitude from the constants of motion.

    Raises DomainError naming the violated admissibility inequality.
    """
    e, k, m_eff = c.energy, c.separation, c.m_eff
    if not k > 0.0:
        raise DomainError("admissibility violated: K > 0")
    if e < k - 1e-12 * max(1.0, abs(k)):
        raise DomainError("admissibility violated: E >= K")
    disc = k * k - p.omega ** 2 * m_eff * m_eff
    if disc < -1e-12 * k * k:
        raise DomainError("admissibility violated: K**2 >= omega**2 M**2")
    # discriminants below a few ulps of K**2 are roundoff around the
    # degenerate (equal radii) case; snapping keeps rho1 == rho2 exact
    if disc <= 64.0 * np.finfo(float).eps * k * k:
        disc = 0.0
    root = math.sqrt(disc)
    rho1 = math.sqrt(max(k - root, 0.0)) / p.omega
    rho2 = math.sqrt(k + root) / p.omega
    z0 = math.sqrt(max(2.0 * (e - k), 0.0)) / p.omega
    return OscBounds(rho1=rho1, rho2=rho2, z0=z0, degenerate=root <= DEGENERATE_RTOL * k)


def _snap_m_sq(m_sq: float, m_eff_sq: float) -> float:
    """Collapse axial momenta below the geometric resolution to exactly zero.

    The turning radii store m**2 only to absolute accuracy of a few ulps
    of m_eff**2, so anything smaller is representational noise around the
    meridional case.
    """
    if m_sq <= 32.0 * np.finfo(float).eps * max(1.0, m_eff_sq):
        return 0.0
    return m_sq


def osc_constants_from_bounds(p: OscParams, orbit: OscOrbit,
                              m_sign: float = 1.0) -> MotionConstants:
    """Constants of motion from the orbit geometry; the sign of m is a choice."""
    om2 = p.omega ** 2
    m_eff_sq = om2 * orbit.rho1 ** 2 * orbit.rho2 ** 2
    m_sq = m_eff_sq - p.q
    if m_sq < -1e-12 * max(1.0, p.q):
        raise DomainError("orbit geometry incompatible with ring strength: "
                          "omega**2 rho1**2 rho2**2 >= q required")
    m = math.copysign(math.sqrt(_snap_m_sq(max(m_sq, 0.0), m_eff_sq)), m_sign)
    k = 0.5 * om2 * orbit.sum_sq
    e = 0.5 * om2 * (orbit.sum_sq + orbit.z0 ** 2)
    return MotionConstants.from_m(e, k, m, p.q)


def osc_orbit_from_constants(p: OscParams, c: MotionConstants, phi0: float = 0.0,
                             t0: float = 0.0, t0p: float = 0.0) -> OscOrbit:
    b = osc_bounds(p, c)
    return OscOrbit(rho1=b.rho1, rho2=b.rho2, z0=b.z0, phi0=phi0, t0=t0, t0p=t0p)


def _m_and_ratio(p: OscParams, orbit: OscOrbit, m_sign: float) -> tuple[float, float]:
    """Signed axial angular momentum and the ratio m/m_eff for an orbit."""
    m_eff = p.omega * orbit.rho1 * orbit.rho2
    m_sq = m_eff * m_eff - p.q
    if m_sq < -1e-12 * max(1.0, p.q):
        raise DomainError("orbit geometry incompatible with ring strength")
    m = math.copysign(math.sqrt(_snap_m_sq(max(m_sq, 0.0), m_eff * m_eff)), m_sign)
    return m, (m / m_eff if m_eff > 0.0 else 0.0)


# ---------------------------------------------------------------------------
# closed-form trajectory
# ---------------------------------------------------------------------------

def osc_trajectory_cyl(p: OscParams, orbit: OscOrbit, m_sign: float,
                       t: float) -> tuple[float, float, float, float, float, float]:
    """Cylindrical coordinates and rates at time t, with continuous azimuth.

    The azimuth keeps winding (it is not reduced mod 2 pi) so that the
    accumulated angle per radial period is exactly pi * m/m_eff.
    """
    m, ratio = _m_and_ratio(p, orbit, m_sign)
    psi = p.omega * (t - orbit.t0)
    z = orbit.z0 * math.sin(p.omega * (t - orbit.t0p))
    z_dot = orbit.z0 * p.omega * math.cos(p.omega * (t - orbit.t0p))

    if orbit.degenerate:
        rho0 = math.sqrt(0.5 * orbit.sum_sq)
        phi = orbit.phi0 + ratio * psi
        return rho0, phi, z, 0.0, ratio * p.omega, z_dot

    s2 = math.sin(2.0 * psi)
    rho = math.sqrt(0.5 * (orbit.sum_sq + orbit.diff_sq * s2))
    if rho == 0.0:
        raise DomainError("trajectory touches the symmetry axis at this time")
    rho_dot = 0.5 * p.omega * orbit.diff_sq * math.cos(2.0 * psi) / rho
    if m == 0.0:
        return rho, orbit.phi0, z, rho_dot, 0.0, z_dot
    u = (orbit.sum_sq * math.tan(psi) + orbit.diff_sq) / (2.0 * orbit.rho1 * orbit.rho2)
    winding = math.pi * math.floor(psi / math.pi + 0.5)
    phi = orbit.phi0 - 0.5 * ratio * orbit.alpha + ratio * (math.atan(u) + winding)
    return rho, phi, z, rho_dot, m / (rho * rho), z_dot


def osc_trajectory(p: OscParams, orbit: OscOrbit, m_sign: float, t: float) -> PhaseState:
    """Phase state at time t on the closed-form orbit.

    Degenerate orbits (rho1 = rho2) dispatch to the uniform-rotation
    cylinder branch automatically.
    """
    rho, phi, z, rho_dot, phi_dot, z_dot = osc_trajectory_cyl(p, orbit, m_sign, t)
    return from_cylindrical(rho, phi, z, rho_dot, phi_dot, z_dot, t=t)


def osc_sample(p: OscParams, orbit: OscOrbit, m_sign: float, times) -> list[PhaseState]:
    return [osc_trajectory(p, orbit, m_sign, float(t)) for t in times]


def osc_projection(orbit: OscOrbit, m_ratio: float, phi: float) -> float:
    """Radius of the xy-plane projection at azimuth phi.

    ``m_ratio`` is the signed ratio m/m_eff. The projection oscillates
    between rho1 and rho2; it is undefined for meridional motion (m = 0).
    """
    if m_ratio == 0.0:
        raise DomainError("projection undefined for m = 0 (radial segment)")
    arg = 2.0 * (phi - orbit.phi0) / m_ratio
    denom = orbit.sum_sq - orbit.diff_sq * math.sin(arg)
    return math.sqrt(2.0) * orbit.rho1 * orbit.rho2 / math.sqrt(denom)


# ---------------------------------------------------------------------------
# equipotentials
# ---------------------------------------------------------------------------

def osc_equipotential(p: OscParams, level: float, n_samples: int) -> EquipotentialCurve:
    """Sample the equipotential section z(rho) >= 0 at the given energy level.

    The surface exists for level >= omega sqrt(q) and collapses to the
    minimum circle rho = (q/omega**2)**(1/4), z = 0 at equality.
    """
    if n_samples < 1:
        raise DomainError("need at least one sample")
    floor_level = p.omega * math.sqrt(p.q)
    if level < floor_level - 1e-12 * max(1.0, floor_level):
        raise DomainError("empty equipotential: level below the potential minimum "
                          "omega*sqrt(q)")
    if p.q == 0.0 and level <= 0.0:
        raise DomainError("empty equipotential: the zero level of the pure "
                          "oscillator is the single point at the origin")
    om2 = p.omega ** 2
    disc = max(level * level - om2 * p.q, 0.0)
    root = math.sqrt(disc)
    rho_min = math.sqrt(max(level - root, 0.0) / om2)
    rho_max = math.sqrt((level + root) / om2)
    degenerate = root <= 1e-14 * max(1.0, level)
    rho = np.linspace(rho_min, rho_max, n_samples)
    if degenerate or rho_min == 0.0:
        # avoid the axis point rho = 0 present only when q = 0
        rho = rho[rho > 0.0] if rho_min == 0.0 else rho
        if rho.size == 0:
            rho = np.array([rho_max])
    zsq = (-om2 * rho ** 4 + 2.0 * level * rho ** 2 - p.q) / (om2 * rho ** 2)
    z = np.sqrt(np.maximum(zsq, 0.0))
    return EquipotentialCurve(rho=rho, z=z, rho_min=rho_min, rho_max=rho_max,
                              degenerate=degenerate)


# ---------------------------------------------------------------------------
# periodicity and quantized orbits
# ---------------------------------------------------------------------------

def osc_periodicity(p: OscParams, c: MotionConstants, tol: float = RATIONAL_TOL,
                    max_den: int = RATIONAL_MAX_DEN) -> OscPeriodicity:
    """Decide whether the orbit labelled by c closes, and give its period.

    Meridional motion (m = 0) is always periodic with the base period
    2 pi / omega. Otherwise the orbit closes iff m_eff/m is rational
    k1/k2, with period |k1| 2 pi / omega.
    """
    base = TWO_PI / p.omega
    if c.m_z == 0.0:
        return OscPeriodicity(kind="meridional", ratio=None, rational=None, period=base)
    ratio = c.m_eff / c.m_z
    approx = best_rational(ratio, tol, max_den)
    if approx is None:
        return OscPeriodicity(kind="quasi_periodic", ratio=ratio, rational=None, period=None)
    return OscPeriodicity(kind="periodic", ratio=ratio, rational=approx,
                          period=abs(approx.k1) * base)


def osc_quantized_constants(q: float, k1: int, k2: int, omega: float) -> tuple[float, float]:
    """(m**2, rho1**2 rho2**2) forced by a closed orbit with ratio k1/k2."""
    if q <= 0.0:
        raise DomainError("closed-orbit constraint degenerates at q = 0")
    if omega <= 0.0:
        raise DomainError("omega must be positive")
    if k1 * k1 <= k2 * k2 or k2 == 0:
        raise DomainError("closed-orbit integers must satisfy k1**2 > k2**2 >= 1")
    gap = k1 * k1 - k2 * k2
    return q * k2 * k2 / gap, (q / omega ** 2) * k1 * k1 / gap


def osc_mean_potential(p: OscParams, orbit: OscOrbit) -> float:
    """Potential energy averaged over one base period 2 pi / omega."""
    if orbit.rho1 <= 0.0:
        raise DomainError("mean potential undefined for rho1 = 0")
    energy = 0.5 * p.omega ** 2 * (orbit.sum_sq + orbit.z0 ** 2)
    return 0.5 * energy + 0.5 * p.q / (orbit.rho1 * orbit.rho2)


# ---------------------------------------------------------------------------
# particular cases
# ---------------------------------------------------------------------------

def osc_angmom_q0(orbit: OscOrbit, omega: float, m_sign: float = 1.0) -> tuple[float, float, float]:
    """Constant angular momentum vector of the q = 0 (pure oscillator) orbit.

    The elliptic trajectory lies in the plane perpendicular to this vector.
    """
    sign = math.copysign(1.0, m_sign)
    pref = omega / math.sqrt(2.0) * orbit.z0 * math.sqrt(orbit.sum_sq)
    delta = omega * (orbit.t0p - orbit.t0)
    cd, sd = math.cos(delta), math.sin(delta)
    half = 0.5 * orbit.alpha
    l1 = pref * (math.sin(orbit.phi0 + sign * half) * cd
                 + sign * math.cos(orbit.phi0 - sign * half) * sd)
    l2 = -pref * (math.cos(orbit.phi0 + sign * half) * cd
                  - sign * math.sin(orbit.phi0 - sign * half) * sd)
    l3 = sign * omega * orbit.rho1 * orbit.rho2
    return l1, l2, l3


def osc_cylinder_orbit(p: OscParams, c: MotionConstants, phi0p: float, t0p: float,
                       t: float) -> PhaseState:
    """State on a degenerate orbit pinned to the cylinder rho = rho0.

    Requires K = omega * m_eff; the motion combines uniform rotation at
    angular rate m/rho0**2 with the axial oscillation at rate omega.
    """
    if abs(c.separation - p.omega * c.m_eff) > 1e-9 * max(1.0, c.separation):
        raise DomainError("cylinder orbit requires K = omega * m_eff")
    rho0 = math.sqrt(c.separation) / p.omega
    z0 = math.sqrt(max(2.0 * (c.energy - c.separation), 0.0)) / p.omega
    rate = p.omega * c.m_ratio
    ang = rate * t + phi0p
    z = z0 * math.sin(p.omega * (t - t0p))
    z_dot = z0 * p.omega * math.cos(p.omega * (t - t0p))
    return PhaseState(
        x=rho0 * math.cos(ang), y=rho0 * math.sin(ang), z=z,
        vx=-rho0 * rate * math.sin(ang), vy=rho0 * rate * math.cos(ang), vz=z_dot, t=t,
    )


# ---------------------------------------------------------------------------
# planarity via torsion
# ---------------------------------------------------------------------------

def osc_torsion_terms(p: OscParams, state: PhaseState, m: float) -> tuple[float, float]:
    """(num, den) of the torsion at a state, specialized to this potential.

    Identical to the general conservative-system decomposition evaluated
    with this potential's derivatives; ``tau = -num/den``.
    """
    x, y, z, vx, vy, vz = state.x, state.y, state.z, state.vx, state.vy, state.vz
    rho_sq = x * x + y * y
    _check_off_axis(rho_sq)
    rho4 = rho_sq * rho_sq
    rho8 = rho4 * rho4
    om2 = p.omega ** 2
    f = p.q - om2 * rho4
    radial = x * vx + y * vy
    num = p.q * m * (f * vz + 4.0 * om2 * rho_sq * radial * z) / rho8
    den = (f * f * (m * m + rho_sq * vz * vz)
           + 2.0 * om2 * rho4 * f * radial * z * vz
           + om2 * om2 * rho8 * (vx * vx + vy * vy) * z * z) / rho8
    return num, den


def osc_planarity(p: OscParams, state: PhaseState, c: MotionConstants,
                  tol: float = ZERO_TOL) -> OscPlanarity:
    """Classify the orbit's planarity and report the torsion split at a state.

    The classification comes from the constants of motion; the torsion
    numerator/denominator witness it pointwise. A vanishing denominator
    together with a vanishing numerator signals an undefined torsion
    (straight or degenerate instant); the classification is still valid.
    """
    num, den = osc_torsion_terms(p, state, c.m_z)
    scale = max(1.0, abs(c.energy))
    if p.q == 0.0:
        verdict = PlanarityClass.PLANAR_Q_ZERO
    elif abs(c.energy - c.separation) <= tol * scale:
        verdict = PlanarityClass.PLANAR_EQUATORIAL
    elif abs(c.m_z) <= tol:
        pinned = abs(c.separation - p.omega * math.sqrt(p.q)) <= tol * scale
        verdict = PlanarityClass.PLANAR_DEGENERATE if pinned else PlanarityClass.PLANAR_MERIDIONAL
    else:
        verdict = PlanarityClass.NON_PLANAR
    return OscPlanarity(verdict=verdict, torsion_num=num, torsion_den=den)


# ---------------------------------------------------------------------------
# semiclassical spectrum
# ---------------------------------------------------------------------------

def osc_semiclassical(p: OscParams, m: int, n_rho: int, n_z: int) -> float:
    """Semiclassical energy level E = (m_eff + 2 n_rho + n_z + 3/2) omega."""
    if n_rho < 0 or n_z < 0:
        raise DomainError("radial and axial quantum numbers must be non-negative")
    m_eff = math.sqrt(m * m + p.q)
    return (m_eff + 2 * n_rho + n_z + 1.5) * p.omega
