"""Shared domain types, coordinate conversions, and rational detection.

All quantities are in atomic-style units with the particle's reduced mass
fixed at 1, so velocities double as linear momenta. Every type here is an
immutable value and every function is pure.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

TWO_PI = 2.0 * math.pi

# States closer to the symmetry axis (or origin) than this are treated as
# singular for the ring-shaped potentials.
AXIS_GUARD = 1e-10

# Default tolerances: rational detection for periodicity tests, zero tests
# on constants and torsion, and the relative gap treated as a degenerate
# (equal turning radii) orbit.
RATIONAL_TOL = 1e-9
RATIONAL_MAX_DEN = 10 ** 6
ZERO_TOL = 1e-10
DEGENERATE_RTOL = 1e-12


def unwrapped_atan(w: float, stretch: float) -> float:
    """Continuous branch of atan(tan(w)/stretch), increasing by pi per pi of w."""
    return math.atan(math.tan(w) / stretch) + math.pi * math.floor(w / math.pi + 0.5)


class DomainError(ValueError):
    """Input outside the physical or mathematical domain of an operation."""


class NumericError(RuntimeError):
    """An iterative numerical procedure failed to converge."""


class PlanarityClass(enum.Enum):
    """Classification of a trajectory's planarity."""

    PLANAR_Q_ZERO = "planar-q-zero"            # ring coupling absent
    PLANAR_EQUATORIAL = "planar-equatorial"    # confined to the z = 0 plane
    PLANAR_MERIDIONAL = "planar-meridional"    # confined to a phi = const half-plane
    PLANAR_DEGENERATE = "planar-degenerate"    # pinned radius, no azimuthal motion
    NON_PLANAR = "non-planar"


@dataclass(frozen=True)
class OscParams:
    """Ring-shaped oscillator parameters: frequency and ring strength."""

    omega: float
    q: float

    def __post_init__(self):
        if not (self.omega > 0.0 and math.isfinite(self.omega)):
            raise DomainError("omega must be positive and finite")
        if not (self.q >= 0.0 and math.isfinite(self.q)):
            raise DomainError("q must be non-negative and finite")


@dataclass(frozen=True)
class CoulParams:
    """Coulombic ring-shaped (Hartmann) parameters: attraction and ring strength."""

    z_strength: float
    q: float

    def __post_init__(self):
        if not (self.z_strength > 0.0 and math.isfinite(self.z_strength)):
            raise DomainError("z_strength must be positive and finite")
        if not (self.q >= 0.0 and math.isfinite(self.q)):
            raise DomainError("q must be non-negative and finite")


@dataclass(frozen=True)
class PhaseState:
    """Cartesian position and velocity of a unit-mass particle at time t."""

    x: float
    y: float
    z: float
    vx: float
    vy: float
    vz: float
    t: float = 0.0

    def __post_init__(self):
        for name in ("x", "y", "z", "vx", "vy", "vz", "t"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"PhaseState component {name} must be finite")

    @property
    def rho(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def r(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    @property
    def position(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    @property
    def velocity(self) -> tuple[float, float, float]:
        return (self.vx, self.vy, self.vz)

    @property
    def kinetic(self) -> float:
        return 0.5 * (self.vx * self.vx + self.vy * self.vy + self.vz * self.vz)


@dataclass(frozen=True)
class MotionConstants:
    """Separation constants and angular momentum labelling an orbit.

    ``m_eff`` is the effective angular momentum sqrt(m_z**2 + q) that
    replaces \\|l3\\| in every orbit formula of the ring-shaped systems.
    """

    energy: float
    separation: float
    m_z: float
    m_eff: float

    def __post_init__(self):
        if not (self.separation > 0.0 and math.isfinite(self.separation)):
            raise DomainError("separation constant K must be positive")
        if self.m_eff < abs(self.m_z) - 1e-12 * max(1.0, abs(self.m_z)):
            raise DomainError("m_eff must be at least |m_z|")

    @classmethod
    def from_m(cls, energy: float, separation: float, m_z: float, q: float) -> "MotionConstants":
        """Build constants from the axial angular momentum and ring strength."""
        if q < 0.0:
            raise DomainError("ring strength q must be non-negative")
        return cls(energy, separation, m_z, math.sqrt(m_z * m_z + q))

    @property
    def m_ratio(self) -> float:
        """Signed frequency ratio m / m_eff (0 when both vanish)."""
        if self.m_eff == 0.0:
            return 0.0
        return self.m_z / self.m_eff


@dataclass(frozen=True)
class RationalApprox:
    """A rational approximation k1/k2 to a real value, k2 > 0, gcd(k1, k2) = 1."""

    k1: int
    k2: int
    value: float
    residual: float


# ---------------------------------------------------------------------------
# coordinate conversions
# ---------------------------------------------------------------------------

def to_cylindrical(state: PhaseState) -> tuple[float, float, float, float, float, float]:
    """Convert to (rho, phi, z, rho_dot, phi_dot, z_dot), phi in (-pi, pi].

    On the symmetry axis rho = 0 the angle is reported as 0 and the rates
    rho_dot, phi_dot as NaN (they are undefined there).
    """
    rho = math.hypot(state.x, state.y)
    if rho == 0.0:
        return 0.0, 0.0, state.z, math.nan, math.nan, state.vz
    phi = math.atan2(state.y, state.x)
    if phi <= -math.pi:
        phi = math.pi
    rho_dot = (state.x * state.vx + state.y * state.vy) / rho
    phi_dot = (state.x * state.vy - state.y * state.vx) / (rho * rho)
    return rho, phi, state.z, rho_dot, phi_dot, state.vz


def from_cylindrical(rho: float, phi: float, z: float,
                     rho_dot: float, phi_dot: float, z_dot: float,
                     t: float = 0.0) -> PhaseState:
    c, s = math.cos(phi), math.sin(phi)
    return PhaseState(
        x=rho * c, y=rho * s, z=z,
        vx=rho_dot * c - rho * phi_dot * s,
        vy=rho_dot * s + rho * phi_dot * c,
        vz=z_dot, t=t,
    )


def to_spherical(state: PhaseState) -> tuple[float, float, float, float, float, float]:
    """Convert to (r, theta, phi, r_dot, theta_dot, phi_dot), theta in [0, pi].

    The origin r = 0 is rejected: it is a singular point of both potentials.
    On the polar axis theta_dot and phi_dot are reported as NaN.
    """
    r = state.r
    if r == 0.0:
        raise DomainError("spherical conversion undefined at the origin r = 0")
    theta = math.acos(max(-1.0, min(1.0, state.z / r)))
    r_dot = (state.x * state.vx + state.y * state.vy + state.z * state.vz) / r
    rho = math.hypot(state.x, state.y)
    if rho == 0.0:
        return r, theta, 0.0, r_dot, math.nan, math.nan
    phi = math.atan2(state.y, state.x)
    if phi <= -math.pi:
        phi = math.pi
    theta_dot = (state.z * r_dot - state.vz * r) / (r * rho)
    phi_dot = (state.x * state.vy - state.y * state.vx) / (rho * rho)
    return r, theta, phi, r_dot, theta_dot, phi_dot


def from_spherical(r: float, theta: float, phi: float,
                   r_dot: float, theta_dot: float, phi_dot: float,
                   t: float = 0.0) -> PhaseState:
    st, ct = math.sin(theta), math.cos(theta)
    cp, sp = math.cos(phi), math.sin(phi)
    rho, rho_dot = r * st, r_dot * st + r * ct * theta_dot
    return PhaseState(
        x=rho * cp, y=rho * sp, z=r * ct,
        vx=rho_dot * cp - rho * phi_dot * sp,
        vy=rho_dot * sp + rho * phi_dot * cp,
        vz=r_dot * ct - r * st * theta_dot, t=t,
    )


def angular_momentum(state: PhaseState) -> tuple[float, float, float]:
    """Angular momentum r x v of the unit-mass particle."""
    return (
        state.y * state.vz - state.z * state.vy,
        state.z * state.vx - state.x * state.vz,
        state.x * state.vy - state.y * state.vx,
    )


# ---------------------------------------------------------------------------
# rational detection
# ---------------------------------------------------------------------------

def _simplest_in_interval(lo: float, hi: float) -> Optional[tuple[int, int]]:
    """Minimal-denominator fraction in the closed interval [lo, hi].

    Continued-fraction descent on the interval endpoints; the result's
    denominator is a global minimum over all fractions in the interval.
    """
    if not (lo <= hi):
        return None
    terms: list[int] = []
    a_lo, a_hi = lo, hi
    for depth in range(128):
        n = math.ceil(a_lo)
        if n <= a_hi:
            if depth == 0:
                # whole interval spans integers: any has denominator 1, so
                # take the one nearest the centre for the smallest residual
                m = math.floor(a_hi)
                centre = 0.5 * (a_lo + a_hi)
                n = n if abs(n - centre) <= abs(m - centre) else m
            # at depth > 0 the term scales the folded denominator, so the
            # smallest admissible term gives the smallest denominator
            terms.append(n)
            break
        fl = math.floor(a_lo)
        terms.append(fl)
        a_lo, a_hi = 1.0 / (a_hi - fl), 1.0 / (a_lo - fl)
    else:
        return None
    num, den = terms[-1], 1
    for a in reversed(terms[:-1]):
        num, den = a * num + den, num
    if den < 0:
        num, den = -num, -den
    return num, den


def best_rational(value: float, tol: float, max_den: int) -> Optional[RationalApprox]:
    """Smallest-denominator fraction k1/k2 with |value - k1/k2| <= tol.

    Returns None when no fraction with denominator at most ``max_den``
    lies within ``tol`` of ``value``. The denominator of the result is
    minimal over all such fractions, not merely over the convergents of
    ``value``, so quasi-periodicity detection never reports a longer
    period than necessary.
    """
    if not math.isfinite(value):
        raise DomainError("best_rational requires a finite value")
    if not (tol > 0.0 and math.isfinite(tol)):
        raise DomainError("tolerance must be positive and finite")
    if max_den < 1:
        raise DomainError("max_den must be at least 1")
    found = _simplest_in_interval(value - tol, value + tol)
    if found is None:
        return None
    k1, k2 = found
    if k2 > max_den:
        return None
    return RationalApprox(k1=k1, k2=k2, value=value, residual=abs(value - k1 / k2))
