"""Independent numerical integration of Hamilton's equations.

Everything the closed forms claim is checked against this module: an
adaptive embedded Runge-Kutta integrator (SciPy's eighth-order pair by
default, the classic 5(4) pair optionally) drives qdot = v, vdot = -grad V
with per-step local error at the requested tolerance, dense output at
caller-requested sample times, and drift statistics for any set of named
invariants.

Drift is measured at the integrator's accepted steps, where the solution
carries no interpolation error; dense samples are for trajectory
comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .core import DomainError, PhaseState
from .frenet import PotentialModel

_METHODS = {"dop853": "DOP853", "rk45": "RK45"}
# nominal propagating order, used by convergence diagnostics
METHOD_ORDER = {"dop853": 8, "rk45": 5}

InvariantMap = dict[str, Callable[[PhaseState], float]]


@dataclass(frozen=True)
class StepStats:
    min: float
    max: float
    count: int


@dataclass(frozen=True)
class DriftStat:
    max_abs: float
    max_rel: float


@dataclass(frozen=True)
class IntegrationRun:
    """Result of one adaptive integration.

    ``samples`` holds the dense output at the requested times (strictly
    increasing for forward runs). ``completed`` is False when the step
    size underflowed (typically at a potential singularity); ``t_last``
    is then the last time reached.
    """

    samples: list[PhaseState]
    tolerance: float
    step_stats: StepStats
    drift: dict[str, DriftStat]
    completed: bool
    t_last: float
    method: str


@dataclass(frozen=True)
class ClosureResult:
    distance: float
    closed: bool
    threshold: float


def _state_to_vec(state: PhaseState) -> np.ndarray:
    return np.array([state.x, state.y, state.z, state.vx, state.vy, state.vz])


def _vec_to_state(vec: np.ndarray, t: float) -> PhaseState:
    x, y, z, vx, vy, vz = (float(c) for c in vec)
    return PhaseState(x=x, y=y, z=z, vx=vx, vy=vy, vz=vz, t=float(t))


def hamilton_rhs(potential: PotentialModel) -> Callable[[float, np.ndarray], np.ndarray]:
    """Right-hand side of Hamilton's equations for a unit-mass particle.

    Singular potential evaluations surface as NaN, which the adaptive
    controller treats as a rejected step; the run then ends gracefully
    instead of raising from inside the stepper.
    """

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        out = np.empty(6)
        out[:3] = y[3:]
        try:
            out[3:] = -np.asarray(potential.gradient(y[:3]), dtype=float)
        except (DomainError, ZeroDivisionError, FloatingPointError, OverflowError):
            out[:] = np.nan
        return out

    return rhs


def drift_report(states: Sequence[PhaseState], invariants: InvariantMap) -> dict[str, DriftStat]:
    """Max absolute/relative drift of each named invariant along the states."""
    out: dict[str, DriftStat] = {}
    for name, fn in invariants.items():
        values = np.array([fn(s) for s in states])
        ref = values[0]
        max_abs = float(np.max(np.abs(values - ref)))
        out[name] = DriftStat(max_abs=max_abs, max_rel=max_abs / max(abs(ref), 1e-300))
    return out


def integrate(potential: PotentialModel, initial: PhaseState, t_end: float, tol: float,
              invariants: Optional[InvariantMap] = None,
              sample_times: Optional[Sequence[float]] = None,
              method: str = "dop853") -> IntegrationRun:
    """Integrate Hamilton's equations from ``initial`` up to ``t_end``.

    ``sample_times`` default to the accepted steps. ``t_end`` may lie on
    either side of the initial time (backward integration is allowed).
    A step-size underflow near a singularity yields a partial run with
    ``completed`` False rather than an exception.
    """
    if not tol > 0.0:
        raise DomainError("integration tolerance must be positive")
    if method not in _METHODS:
        raise DomainError(f"unknown integrator '{method}' (use one of {sorted(_METHODS)})")
    if t_end == initial.t:
        raise DomainError("t_end must differ from the initial time")
    # fail fast if the initial state itself is singular
    potential.gradient(np.array(initial.position, dtype=float))

    t_eval = None
    if sample_times is not None:
        t_eval = np.asarray(sample_times, dtype=float)

    sol = solve_ivp(hamilton_rhs(potential), (initial.t, t_end), _state_to_vec(initial),
                    method=_METHODS[method], rtol=tol, atol=tol,
                    t_eval=t_eval, dense_output=True)
    if sol.status not in (0, -1):
        raise DomainError(f"integration failed: {sol.message}")
    completed = sol.status == 0

    node_times = np.asarray(sol.sol.ts)
    widths = np.abs(np.diff(node_times))
    stats = StepStats(min=float(widths.min()), max=float(widths.max()),
                      count=int(widths.size))

    node_states = [_vec_to_state(col, tv)
                   for tv, col in zip(node_times, sol.sol(node_times).T)]
    drift = drift_report(node_states, invariants) if invariants else {}

    if t_eval is None:
        samples = node_states
    else:
        samples = [_vec_to_state(col, tv) for tv, col in zip(sol.t, sol.y.T)]

    return IntegrationRun(samples=samples, tolerance=tol, step_stats=stats, drift=drift,
                          completed=completed, t_last=float(node_times[-1]), method=method)


def closure_test(potential: PotentialModel, initial: PhaseState, candidate_period: float,
                 tol: float, threshold: float = 1e-6,
                 method: str = "dop853") -> ClosureResult:
    """Integrate one candidate period and measure the phase-space return distance.

    The distance combines position and velocity mismatches, each normalized
    by the initial magnitude of that block (or 1 if it vanishes).
    """
    if not candidate_period > 0.0:
        raise DomainError("candidate period must be positive")
    run = integrate(potential, initial, initial.t + candidate_period, tol,
                    sample_times=[initial.t + candidate_period], method=method)
    if not run.completed or not run.samples:
        raise DomainError("closure test failed: integration did not reach the period")
    final = run.samples[-1]
    r0 = np.array(initial.position)
    v0 = np.array(initial.velocity)
    dr = np.linalg.norm(np.array(final.position) - r0)
    dv = np.linalg.norm(np.array(final.velocity) - v0)
    pos_scale = np.linalg.norm(r0) or 1.0
    vel_scale = np.linalg.norm(v0) or 1.0
    distance = math.hypot(dr / pos_scale, dv / vel_scale)
    return ClosureResult(distance=distance, closed=distance < threshold,
                         threshold=threshold)
