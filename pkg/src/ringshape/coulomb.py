"""The coulombic ring-shaped (Hartmann) system: attraction plus ring repulsion.

Potential energy (unit mass):

    V = -z_strength / r + q / (2 (x**2 + y**2))

Bounded motions exist for -z_strength**2/(2K) <= E < 0 and live between two
spheres of radii r1 <= r2, with the polar angle confined to
[theta0, pi - theta0]. The E = 0 family is the separatrix to unbounded
motion. This module covers the potential, its integral set, equipotential
classification, the Kepler-type closed-form trajectory, the separatrix,
planarity, periodicity, the virial average, the degenerate sphere and planar
orbits, the semiclassical spectrum, and the ring-strength values that produce
local (accidental) degeneracies of that spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import (
    AXIS_GUARD,
    RATIONAL_MAX_DEN,
    RATIONAL_TOL,
    TWO_PI,
    ZERO_TOL,
    CoulParams,
    DomainError,
    MotionConstants,
    NumericError,
    PhaseState,
    PlanarityClass,
    RationalApprox,
    angular_momentum,
    best_rational,
    from_spherical,
    unwrapped_atan,
)
from .frenet import PotentialModel
from .oscillator import _snap_m_sq

KEPLER_TOL = 1e-14
KEPLER_MAX_ITER = 50


@dataclass(frozen=True)
class CoulOrbit:
    """Six-constant parametrization of a bounded orbit.

    ``r1``/``r2`` are the radial turning points, ``theta0`` in (0, pi/2]
    the polar turning angle, ``phi0`` the azimuth constant, ``t0`` the
    radial time offset and ``beta0`` the polar phase constant.
    """

    r1: float
    r2: float
    theta0: float
    phi0: float = 0.0
    t0: float = 0.0
    beta0: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.r1 <= self.r2):
            raise DomainError("radial turning points must satisfy 0 < r1 <= r2")
        if not (0.0 < self.theta0 <= 0.5 * math.pi + 1e-15):
            raise DomainError("polar turning angle must lie in (0, pi/2]")

    @property
    def semi_major(self) -> float:
        return 0.5 * (self.r1 + self.r2)

    @property
    def eccentricity(self) -> float:
        return (self.r2 - self.r1) / (self.r1 + self.r2)


@dataclass(frozen=True)
class CoulInvariants:
    """Values of the integral set {H, B1, B2, B3} at a phase point.

    ``b3`` is the axial component of the generalized Laplace-Runge-Lenz
    combination, in its classical (symmetrized) form.
    """

    h: float
    b1: float
    b2: float
    b3: float


@dataclass(frozen=True)
class CoulBounds:
    r1: float
    r2: float
    theta0: float
    degenerate: bool


@dataclass(frozen=True)
class CoulPlanarity:
    verdict: PlanarityClass
    torsion_num: float
    torsion_den: float

    @property
    def torsion(self) -> float:
        return -self.torsion_num / self.torsion_den if self.torsion_den > 0.0 else math.nan


@dataclass(frozen=True)
class CoulPeriod:
    """Radial period plus the global closed-orbit analysis."""

    t_c: float
    kind: str                        # "periodic" | "quasi_periodic" | "meridional"
    ratio: Optional[float]
    rational: Optional[RationalApprox]
    global_period: Optional[float]
    quantized_m_sq: Optional[float]          # m**2 forced by closure
    quantized_geometry: Optional[float]      # r1 r2/(r1+r2) sin(theta0)**2 forced by closure


@dataclass(frozen=True)
class SeparatrixOrbit:
    """Zero-energy orbit data; r_min = K/(2 z_strength) is the closest approach."""

    r_min: float
    theta0: float
    phi0: float = 0.0
    beta0: float = 0.0
    t0: float = 0.0

    def __post_init__(self):
        if not self.r_min > 0.0:
            raise DomainError("separatrix closest approach must be positive")
        if not (0.0 < self.theta0 <= 0.5 * math.pi + 1e-15):
            raise DomainError("polar turning angle must lie in (0, pi/2]")


@dataclass(frozen=True)
class CoulEquipotential:
    """Classified equipotential section: case is 'negative', 'zero' or 'positive'."""

    case: str
    rho: np.ndarray
    z: np.ndarray
    rho_min: float
    rho_max: Optional[float]     # None for the unbounded zero-level surface
    degenerate: bool


@dataclass(frozen=True)
class DegeneracyTriple:
    """Quantum numbers (m, m', I) whose levels coincide at ring strength q_value."""

    m: int
    m_prime: int
    i_shift: int
    q_value: float


# ---------------------------------------------------------------------------
# potential and invariants
# ---------------------------------------------------------------------------

def _check_regular(rho_sq: float, r: float) -> None:
    if r <= AXIS_GUARD:
        raise DomainError("state at the singular origin (r ~ 0)")
    if rho_sq <= AXIS_GUARD * AXIS_GUARD:
        raise DomainError("state lies on the singular symmetry axis (rho ~ 0)")


def coul_potential(p: CoulParams, state: PhaseState) -> float:
    """Potential energy at a phase point; origin and axis are rejected."""
    rho_sq = state.x * state.x + state.y * state.y
    r = math.sqrt(rho_sq + state.z * state.z)
    _check_regular(rho_sq, r)
    return -p.z_strength / r + 0.5 * p.q / rho_sq


def coul_potential_model(p: CoulParams) -> PotentialModel:
    """Analytic value/gradient/hessian callbacks for this potential."""
    zs, q = p.z_strength, p.q

    def value(pos) -> float:
        x, y, z = pos
        rho_sq = x * x + y * y
        r = math.sqrt(rho_sq + z * z)
        _check_regular(rho_sq, r)
        return -zs / r + 0.5 * q / rho_sq

    def gradient(pos):
        x, y, z = pos
        rho_sq = x * x + y * y
        r = math.sqrt(rho_sq + z * z)
        _check_regular(rho_sq, r)
        r3 = r ** 3
        rho4 = rho_sq * rho_sq
        return np.array([zs * x / r3 - q * x / rho4,
                         zs * y / r3 - q * y / rho4,
                         zs * z / r3])

    def hessian(pos):
        x, y, z = pos
        rho_sq = x * x + y * y
        r = math.sqrt(rho_sq + z * z)
        _check_regular(rho_sq, r)
        r3, r5 = r ** 3, r ** 5
        rho4 = rho_sq * rho_sq
        rho6 = rho4 * rho_sq
        h = np.empty((3, 3))
        h[0, 0] = zs / r3 - 3.0 * zs * x * x / r5 - q / rho4 + 4.0 * q * x * x / rho6
        h[1, 1] = zs / r3 - 3.0 * zs * y * y / r5 - q / rho4 + 4.0 * q * y * y / rho6
        h[2, 2] = zs / r3 - 3.0 * zs * z * z / r5
        h[0, 1] = h[1, 0] = -3.0 * zs * x * y / r5 + 4.0 * q * x * y / rho6
        h[0, 2] = h[2, 0] = -3.0 * zs * x * z / r5
        h[1, 2] = h[2, 1] = -3.0 * zs * y * z / r5
        return h

    return PotentialModel(value=value, gradient=gradient, hessian=hessian)


def coul_invariants(p: CoulParams, state: PhaseState) -> CoulInvariants:
    """Evaluate the integral set {H, B1, B2, B3} at a phase point."""
    rho_sq = state.x * state.x + state.y * state.y
    r = math.sqrt(rho_sq + state.z * state.z)
    _check_regular(rho_sq, r)
    l1, l2, l3 = angular_momentum(state)
    sin_sq_theta = rho_sq / (r * r)
    b1 = l1 * l1 + l2 * l2 + l3 * l3 + p.q / sin_sq_theta
    h = state.kinetic + coul_potential(p, state)
    b3 = (l1 * state.vy - l2 * state.vx
          + p.z_strength * state.z / r - p.q * state.z / rho_sq)
    return CoulInvariants(h=h, b1=b1, b2=l3, b3=b3)


def coul_invariant_functions(p: CoulParams) -> dict[str, Callable[[PhaseState], float]]:
    """Named invariant evaluators, e.g. for drift reports."""
    return {
        "H": lambda s: coul_invariants(p, s).h,
        "B1": lambda s: coul_invariants(p, s).b1,
        "B2": lambda s: coul_invariants(p, s).b2,
        "B3": lambda s: coul_invariants(p, s).b3,
    }


# ---------------------------------------------------------------------------
# equipotentials
# ---------------------------------------------------------------------------

def coul_equipotential(p: CoulParams, level: float, n_samples: int,
                       rho_max: Optional[float] = None) -> CoulEquipotential:
    """Sample and classify the equipotential section z(rho) >= 0.

    Negative levels give bounded tori down to the minimum circle
    rho = q/z_strength at level = -z_strength**2/(2 q); the zero level is
    unbounded (a caller-supplied ``rho_max`` truncates it); positive levels
    give tubes that close onto the axis singularity near
    rho = sqrt(q/(2 level)), which bounds the radii from above.
    """
    if n_samples < 1:
        raise DomainError("need at least one sample")
    zs, q = p.z_strength, p.q

    def z_of(rho: np.ndarray) -> np.ndarray:
        t1 = q - 2.0 * level * rho * rho
        disc = np.maximum(4.0 * zs * zs * rho * rho - t1 * t1, 0.0)
        return rho / t1 * np.sqrt(disc)

    if level < 0.0:
        if q > 0.0:
            floor_level = -0.5 * zs * zs / q
            if level < floor_level * (1.0 + 1e-12):
                raise DomainError("empty equipotential: level below the potential "
                                  "minimum -z_strength**2/(2 q)")
        disc = max(zs * zs + 2.0 * q * level, 0.0)
        root = math.sqrt(disc)
        lo = (zs - root) / (-2.0 * level)
        hi = (zs + root) / (-2.0 * level)
        rho = np.linspace(lo, hi, n_samples)
        with np.errstate(invalid="ignore", divide="ignore"):
            z = z_of(rho)
        # q = 0 starts the section at the axis, where the sphere pole sits
        z[rho == 0.0] = zs / (-level)
        degenerate = root <= 1e-14 * zs
        return CoulEquipotential(case="negative", rho=rho, z=z,
                                 rho_min=lo, rho_max=hi, degenerate=degenerate)
    if level == 0.0:
        if q == 0.0:
            raise DomainError("the zero level with q = 0 is the sphere at infinity")
        lo = 0.5 * q / zs
        if rho_max is None:
            raise DomainError("the zero-level equipotential is unbounded: rho_max required")
        if rho_max <= lo:
            raise DomainError("rho_max must exceed the zero-level minimum radius q/(2 z)")
        rho = np.linspace(lo, rho_max, n_samples)
        z = rho / q * np.sqrt(np.maximum(4.0 * zs * zs * rho * rho - q * q, 0.0))
        return CoulEquipotential(case="zero", rho=rho, z=z,
                                 rho_min=lo, rho_max=None, degenerate=False)
    # positive level: q = 0 leaves no equipotential at all (V < 0 everywhere)
    if q == 0.0:
        raise DomainError("empty equipotential: positive levels require q > 0")
    lo = (-zs + math.sqrt(zs * zs + 2.0 * q * level)) / (2.0 * level)
    hi = math.sqrt(0.5 * q / level)
    # open upper end: z diverges there, so stop one spacing short
    rho = np.linspace(lo, hi, n_samples + 1)[:-1]
    return CoulEquipotential(case="positive", rho=rho, z=z_of(rho),
                             rho_min=lo, rho_max=hi, degenerate=False)


# ---------------------------------------------------------------------------
# orbit geometry <-> constants of motion
# ---------------------------------------------------------------------------

def coul_bounds(p: CoulParams, c: MotionConstants) -> CoulBounds:
    """Radial turning points and polar turning angle from the constants.

    Raises DomainError naming the violated admissibility inequality.
    """
    e, k, m_eff = c.energy, c.separation, c.m_eff
    if not k > 0.0:
        raise DomainError("admissibility violated: K > 0")
    if not e < 0.0:
        raise DomainError("admissibility violated: E < 0 (bounded motion)")
    zs = p.z_strength
    disc = zs * zs + 2.0 * e * k
    if disc < -1e-12 * zs * zs:
        raise DomainError("admissibility violated: E >= -z_strength**2/(2 K)")
    # roundoff guard around the degenerate (pinned radius) case
    if disc <= 64.0 * np.finfo(float).eps * zs * zs:
        disc = 0.0
    if m_eff * m_eff > k * (1.0 + 1e-12):
        raise DomainError("admissibility violated: K >= M**2")
    root = math.sqrt(disc)
    r1 = (zs - root) / (-2.0 * e)
    r2 = (zs + root) / (-2.0 * e)
    theta0 = math.asin(min(1.0, m_eff / math.sqrt(k)))
    return CoulBounds(r1=r1, r2=r2, theta0=theta0, degenerate=root <= 1e-12 * zs)


def coul_constants_from_bounds(p: CoulParams, orbit: CoulOrbit,
                               m_sign: float = 1.0) -> MotionConstants:
    """Constants of motion from the orbit geometry; the sign of m is a choice."""
    zs = p.z_strength
    k = 2.0 * zs * orbit.r1 * orbit.r2 / (orbit.r1 + orbit.r2)
    sin0 = math.sin(orbit.theta0)
    m_eff_sq = k * sin0 * sin0
    m_sq = m_eff_sq - p.q
    if m_sq < -1e-12 * max(1.0, p.q):
        raise DomainError("orbit geometry incompatible with ring strength: "
                          "K sin(theta0)**2 >= q required")
    m = math.copysign(math.sqrt(_snap_m_sq(max(m_sq, 0.0), m_eff_sq)), m_sign)
    e = -zs / (orbit.r1 + orbit.r2)
    return MotionConstants.from_m(e, k, m, p.q)


def coul_orbit_from_constants(p: CoulParams, c: MotionConstants, phi0: float = 0.0,
                              t0: float = 0.0, beta0: float = 0.0) -> CoulOrbit:
    b = coul_bounds(p, c)
    return CoulOrbit(r1=b.r1, r2=b.r2, theta0=b.theta0, phi0=phi0, t0=t0, beta0=beta0)


# ---------------------------------------------------------------------------
# closed-form trajectory
# ---------------------------------------------------------------------------

def _eccentric_anomaly(mean_anom: float, ecc: float) -> float:
    """Solve u - ecc sin(u) = mean_anom by Newton iteration."""
    turns = math.floor(mean_anom / TWO_PI)
    m_red = mean_anom - TWO_PI * turns
    u = m_red + ecc * math.sin(m_red)
    for _ in range(KEPLER_MAX_ITER):
        f = u - ecc * math.sin(u) - m_red
        du = f / (1.0 - ecc * math.cos(u))
        u -= du
        if abs(du) < KEPLER_TOL:
            return u + TWO_PI * turns
    raise NumericError("eccentric-anomaly iteration did not converge")


def _true_anomaly(u: float, ecc: float) -> float:
    """Continuous true anomaly from the eccentric anomaly (|v - u| < pi)."""
    beta = ecc / (1.0 + math.sqrt(1.0 - ecc * ecc))
    return u + 2.0 * math.atan2(beta * math.sin(u), 1.0 - beta * math.cos(u))


def _mean_motion(p: CoulParams, energy: float) -> float:
    return (-2.0 * energy) ** 1.5 / p.z_strength


def coul_radial_time(p: CoulParams, orbit: CoulOrbit, t: float) -> tuple[float, float]:
    """(r, r_dot) at time t on the bounded orbit.

    The transcendental time-radius relation is inverted through the
    auxiliary angle u with r = a (1 - e cos u); the phase convention puts
    the inner turning point a quarter radial period before t0.
    """
    a, e = orbit.semi_major, orbit.eccentricity
    energy = -p.z_strength / (orbit.r1 + orbit.r2)
    n = _mean_motion(p, energy)
    u = _eccentric_anomaly(n * (t - orbit.t0) + 0.5 * math.pi, e)
    r = a * (1.0 - e * math.cos(u))
    r_dot = n * a * a * e * math.sin(u) / r
    return r, r_dot


def coul_trajectory_sph(p: CoulParams, orbit: CoulOrbit, m_sign: float,
                        t: float) -> tuple[float, float, float, float, float, float]:
    """Spherical coordinates and rates at time t, with continuous azimuth.

    Branches of the multivalued printed relations are fixed by the
    canonical-momentum requirements r**2 sin(theta)**2 phi_dot = m and
    r**2 theta_dot = +/- sqrt(K - M**2/sin(theta)**2); the azimuth then
    advances by exactly 2 pi m/m_eff per radial period.
    """
    c = coul_constants_from_bounds(p, orbit, m_sign)
    a, e = orbit.semi_major, orbit.eccentricity
    n = _mean_motion(p, c.energy)
    sqrt_k = math.sqrt(c.separation)
    if c.m_eff <= 0.0:
        raise DomainError("polar parametrization needs m_eff > 0 (q > 0 or m != 0)")
    u = _eccentric_anomaly(n * (t - orbit.t0) + 0.5 * math.pi, e)
    r = a * (1.0 - e * math.cos(u))
    r_dot = n * a * a * e * math.sin(u) / r
    w = _true_anomaly(u, e) - orbit.beta0
    c0, s0 = math.cos(orbit.theta0), math.sin(orbit.theta0)
    cos_theta = c0 * math.cos(w)
    theta = math.acos(cos_theta)
    sin_theta = math.sin(theta)
    theta_dot = c0 * math.sin(w) * sqrt_k / (r * r * sin_theta)
    if c.m_z == 0.0:
        phi, phi_dot = orbit.phi0, 0.0
    else:
        ratio = c.m_ratio
        phi = orbit.phi0 - ratio * 0.5 * math.pi + ratio * unwrapped_atan(w, s0)
        phi_dot = c.m_z / (r * r * sin_theta * sin_theta)
    return r, theta, phi, r_dot, theta_dot, phi_dot


def coul_trajectory(p: CoulParams, orbit: CoulOrbit, m_sign: float, t: float) -> PhaseState:
    """Phase state at time t on the closed-form bounded orbit."""
    r, th, ph, rd, thd, phd = coul_trajectory_sph(p, orbit, m_sign, t)
    return from_spherical(r, th, ph, rd, thd, phd, t=t)


def coul_sample(p: CoulParams, orbit: CoulOrbit, m_sign: float, times) -> list[PhaseState]:
    return [coul_trajectory(p, orbit, m_sign, float(t)) for t in times]


# ---------------------------------------------------------------------------
# the separatrix (E = 0)
# ---------------------------------------------------------------------------

def separatrix_radius(z_strength: float, r_min: float, dt: float) -> float:
    """Radius at time offset dt on the zero-energy orbit.

    The unique real root >= r_min of
    r**3 + 3 r**2 r_min - 4 r_min**3 - (9/2) z (dt)**2 = 0, by a
    cancellation-free Cardano form (the product of the two cube-root
    arguments is exactly r_min**6).
    """
    if r_min <= 0.0 or z_strength <= 0.0:
        raise DomainError("separatrix requires positive strength and closest approach")
    forcing = 4.5 * z_strength * dt * dt
    big = r_min ** 3 + 0.5 * forcing + math.sqrt(forcing * r_min ** 3 + 0.25 * forcing * forcing)
    root = float(np.cbrt(big) + np.cbrt(r_min ** 6 / big)) - r_min
    if not root >= r_min * (1.0 - 1e-12):
        raise NumericError("separatrix cubic produced a root below closest approach")
    return root


def coul_separatrix(p: CoulParams, orbit: SeparatrixOrbit, m_sign: float,
                    t: float) -> PhaseState:
    """Phase state at time t on the zero-energy (separatrix) orbit."""
    zs = p.z_strength
    k = 2.0 * zs * orbit.r_min
    sqrt_k = math.sqrt(k)
    c0, s0 = math.cos(orbit.theta0), math.sin(orbit.theta0)
    m_eff = sqrt_k * s0
    m_sq = m_eff * m_eff - p.q
    if m_sq < -1e-12 * max(1.0, p.q):
        raise DomainError("separatrix geometry incompatible with ring strength")
    m = math.copysign(math.sqrt(_snap_m_sq(max(m_sq, 0.0), m_eff * m_eff)), m_sign)

    dt = t - orbit.t0
    r = separatrix_radius(zs, orbit.r_min, dt)
    excess = max(r - orbit.r_min, 0.0)
    r_dot = 3.0 * zs * dt / (r * r + 2.0 * r * orbit.r_min)
    # parabolic-anomaly angle, odd in dt and increasing
    v = math.copysign(2.0 * math.atan(math.sqrt(excess / orbit.r_min)), dt)
    w = v - orbit.beta0 + 0.5 * math.pi
    cos_theta = c0 * math.cos(w)
    theta = math.acos(cos_theta)
    sin_theta = math.sin(theta)
    theta_dot = c0 * math.sin(w) * sqrt_k / (r * r * sin_theta)
    if m == 0.0:
        phi, phi_dot = orbit.phi0, 0.0
    else:
        ratio = m / m_eff
        phi = orbit.phi0 - ratio * 0.5 * math.pi + ratio * unwrapped_atan(w, s0)
        phi_dot = m / (r * r * sin_theta * sin_theta)
    return from_spherical(r, theta, phi, r_dot, theta_dot, phi_dot, t=t)


# ---------------------------------------------------------------------------
# planarity via torsion
# ---------------------------------------------------------------------------

def coul_torsion_terms(p: CoulParams, state: PhaseState, m: float) -> tuple[float, float]:
    """(num, den) of the torsion at a state, specialized to this potential."""
    x, y, z, vx, vy, vz = state.x, state.y, state.z, state.vx, state.vy, state.vz
    rho_sq = x * x + y * y
    r = math.sqrt(rho_sq + z * z)
    _check_regular(rho_sq, r)
    rho4 = rho_sq * rho_sq
    rho8 = rho4 * rho4
    zs = p.z_strength
    g = p.q - zs * rho4 / r ** 3
    radial = x * vx + y * vy
    num = p.q * m * (g * vz + zs * (rho_sq / r ** 5)
                     * (radial * (r * r + 3.0 * z * z) - 3.0 * z * vz * rho_sq) * z) / rho8
    den = (g * g * (m * m + rho_sq * vz * vz)
           + 2.0 * zs * rho4 / r ** 3 * g * radial * z * vz
           + (zs * rho4 / r ** 3) ** 2 * (vx * vx + vy * vy) * z * z) / rho8
    return num, den


def coul_planarity(p: CoulParams, state: PhaseState, c: MotionConstants,
                   tol: float = ZERO_TOL) -> CoulPlanarity:
    """Classify the orbit's planarity and report the torsion split at a state.

    Planar cases: zero ring strength; equatorial confinement (M**2 = K);
    meridional motion (m = 0); and the static equilibrium circle
    rho**4 = (q/z) r**3 in the plane z = 0.
    """
    num, den = coul_torsion_terms(p, state, c.m_z)
    scale = max(1.0, abs(c.separation))
    rho_sq = state.x * state.x + state.y * state.y
    r = state.r
    # the static circle has M**2 = K as well, so test it before equatorial
    static = (abs(c.m_z) <= tol
              and abs(state.z) <= tol * max(1.0, r)
              and abs(rho_sq * rho_sq - (p.q / p.z_strength) * r ** 3)
              <= tol * max(1.0, r ** 3))
    if p.q == 0.0:
        verdict = PlanarityClass.PLANAR_Q_ZERO
    elif static:
        verdict = PlanarityClass.PLANAR_DEGENERATE
    elif abs(c.m_eff * c.m_eff - c.separation) <= tol * scale:
        verdict = PlanarityClass.PLANAR_EQUATORIAL
    elif abs(c.m_z) <= tol:
        verdict = PlanarityClass.PLANAR_MERIDIONAL
    else:
        verdict = PlanarityClass.NON_PLANAR
    return CoulPlanarity(verdict=verdict, torsion_num=num, torsion_den=den)


# ---------------------------------------------------------------------------
# periodicity, virial, particular cases
# ---------------------------------------------------------------------------

def coul_period(p: CoulParams, c: MotionConstants, tol: float = RATIONAL_TOL,
                max_den: int = RATIONAL_MAX_DEN) -> CoulPeriod:
    """Radial period and, when m_eff/m is rational, the global period.

    A closed orbit forces the "quantized" values of m**2 and of the
    geometric combination r1 r2/(r1+r2) sin(theta0)**2, which are reported
    alongside (None for the trivial q = 0 closure).
    """
    if not c.energy < 0.0:
        raise DomainError("radial period defined for bounded motion only (E < 0)")
    t_c = TWO_PI * p.z_strength * (-2.0 * c.energy) ** -1.5
    if c.m_z == 0.0:
        return CoulPeriod(t_c=t_c, kind="meridional", ratio=None, rational=None,
                          global_period=t_c, quantized_m_sq=None, quantized_geometry=None)
    ratio = c.m_eff / c.m_z
    approx = best_rational(ratio, tol, max_den)
    if approx is None:
        return CoulPeriod(t_c=t_c, kind="quasi_periodic", ratio=ratio, rational=None,
                          global_period=None, quantized_m_sq=None, quantized_geometry=None)
    k1, k2 = approx.k1, approx.k2
    gap = k1 * k1 - k2 * k2
    if gap > 0 and p.q > 0.0:
        q_m_sq = p.q * k2 * k2 / gap
        q_geom = 0.5 * (p.q / p.z_strength) * k1 * k1 / gap
    else:
        q_m_sq = q_geom = None
    return CoulPeriod(t_c=t_c, kind="periodic", ratio=ratio, rational=approx,
                      global_period=abs(k1) * t_c,
                      quantized_m_sq=q_m_sq, quantized_geometry=q_geom)


def coul_virial(p: CoulParams, orbit: CoulOrbit, c: MotionConstants) -> float:
    """Potential energy averaged over one radial period."""
    e_geom = -p.z_strength / (orbit.r1 + orbit.r2)
    if abs(e_geom - c.energy) > 1e-9 * max(1.0, abs(e_geom)):
        raise DomainError("orbit geometry and constants disagree on the energy")
    return (2.0 * c.energy
            + p.q / ((orbit.r1 + orbit.r2) * math.sqrt(orbit.r1 * orbit.r2)
                     * math.sin(orbit.theta0)))


def coul_planar_orbit(p: CoulParams, c: MotionConstants, phi: float,
                      phi0: float = 0.0) -> float:
    """Radius at azimuth phi of an equatorial orbit (M**2 = K).

    Bounded orbits (E < 0) trace a conic-like curve between the turning
    radii; the zero-energy orbit is the parabola-like separatrix curve.
    """
    if abs(c.m_eff * c.m_eff - c.separation) > 1e-9 * max(1.0, c.separation):
        raise DomainError("planar orbit requires M**2 = K (equatorial confinement)")
    if c.m_z == 0.0:
        raise DomainError("equatorial orbit with m = 0 carries no azimuthal motion")
    ratio = c.m_eff / c.m_z
    if c.energy < 0.0:
        b = coul_bounds(p, c)
        rho1, rho2 = b.r1, b.r2
        return 2.0 * rho1 * rho2 / (rho1 + rho2
                                    - (rho2 - rho1) * math.sin(ratio * (phi - phi0)))
    if abs(c.energy) <= 1e-12 * max(1.0, c.separation):
        rho_min = 0.5 * c.separation / p.z_strength
        return rho_min * (1.0 + math.tan(0.5 * ratio * (phi - phi0)) ** 2)
    raise DomainError("unbounded motions (E > 0) are out of scope")


def coul_sphere_orbit(p: CoulParams, c: MotionConstants, psi0: float, m_sign: float,
                      t: float) -> PhaseState:
    """State on a degenerate orbit pinned to the sphere r = r0.

    Requires 2 E K = -z_strength**2; the polar angle oscillates at the
    radial frequency and the azimuth winds at rate m/(r0 sin(theta))**2.
    """
    zs = p.z_strength
    if abs(2.0 * c.energy * c.separation + zs * zs) > 1e-9 * zs * zs:
        raise DomainError("sphere orbit requires 2 E K = -z_strength**2")
    r0 = zs / (-2.0 * c.energy)
    t_c = TWO_PI * zs * (-2.0 * c.energy) ** -1.5
    sin0 = min(1.0, c.m_eff / math.sqrt(c.separation))
    cos0 = math.sqrt(max(1.0 - sin0 * sin0, 0.0))
    m = math.copysign(abs(c.m_z), m_sign)
    psi = TWO_PI * t / t_c + psi0
    psi_rate = TWO_PI / t_c
    cos_theta = cos0 * math.cos(psi)
    theta = math.acos(cos_theta)
    sin_theta = math.sin(theta)
    theta_dot = cos0 * math.sin(psi) * psi_rate / sin_theta
    if m == 0.0:
        phi, phi_dot = 0.0, 0.0
    else:
        ratio = m / c.m_eff
        phi = ratio * unwrapped_atan(psi, sin0)
        phi_dot = m / (r0 * r0 * sin_theta * sin_theta)
    return from_spherical(r0, theta, phi, 0.0, theta_dot, phi_dot, t=t)


def coul_semiclassical(p: CoulParams, m: int, n_r: int, n_theta: int) -> float:
    """Semiclassical level E = -z**2 / (2 (m_eff + n_r + n_theta + 1)**2)."""
    if n_r < 0 or n_theta < 0:
        raise DomainError("radial and polar quantum numbers must be non-negative")
    m_eff = math.sqrt(m * m + p.q)
    principal = m_eff + n_r + n_theta + 1.0
    return -0.5 * p.z_strength ** 2 / (principal * principal)


# ---------------------------------------------------------------------------
# local (accidental) degeneracies
# ---------------------------------------------------------------------------

def degeneracy_q(m: int, m_prime: int, i_shift: int) -> Optional[DegeneracyTriple]:
    """Ring strength at which the levels (m, n) and (m', n + i_shift) coincide.

    Coincidence requires sqrt(m**2 + q) - sqrt(m'**2 + q) = +/- i_shift with
    q > 0; the squared lattice condition also admits a spurious branch
    (effective momenta summing to i_shift), which is rejected, as is q <= 0
    where the constraint is vacuous.
    """
    if i_shift == 0:
        raise DomainError("the level shift I must be nonzero")
    if m_prime == m or m_prime == -m:
        raise DomainError("local degeneracies need m' != +/- m")
    i_sq = i_shift * i_shift
    q = (i_sq - (m + m_prime) ** 2) * (i_sq - (m - m_prime) ** 2) / (4.0 * i_sq)
    if q <= 0.0:
        return None
    gap = math.sqrt(m * m + q) - math.sqrt(m_prime * m_prime + q)
    if abs(abs(gap) - abs(i_shift)) > 1e-12 * max(1.0, abs(i_shift)):
        return None   # spurious branch of the squared condition
    return DegeneracyTriple(m=m, m_prime=m_prime, i_shift=i_shift, q_value=q)


def degeneracy_search(q: float, tol: float, max_m: int, max_i: int) -> list[DegeneracyTriple]:
    """All integer triples whose degeneracy ring strength matches q within tol."""
    if q < 0.0:
        raise DomainError("ring strength must be non-negative")
    if max_m < 0 or max_i < 1:
        raise DomainError("search bounds must satisfy max_m >= 0, max_i >= 1")
    out: list[DegeneracyTriple] = []
    for m in range(-max_m, max_m + 1):
        for m_prime in range(-max_m, max_m + 1):
            if m_prime == m or m_prime == -m:
                continue
            for i_shift in range(-max_i, max_i + 1):
                if i_shift == 0:
                    continue
                triple = degeneracy_q(m, m_prime, i_shift)
                if triple is not None and abs(triple.q_value - q) <= tol:
                    out.append(triple)
    return out
