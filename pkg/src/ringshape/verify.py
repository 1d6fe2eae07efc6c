"""Cross-validation suite: closed forms against the numerical oracle.

Each check pits an analytic result (trajectory, invariant, period, average,
spectrum, degeneracy, root) against an independent route: adaptive
integration, quadrature, enumeration, or direct residual evaluation. The
CLI ``verify`` command runs the whole suite; the acceptance tests assert
it check by check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import coulomb as cb
from . import oscillator as osc
from .core import CoulParams, MotionConstants, OscParams
from .frenet import torsion_terms_expanded
from .oracle import closure_test, drift_report, integrate


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    measured: float
    threshold: float
    op: str          # "<" pass when measured < threshold, ">" when it exceeds
    passed: bool
    detail: str = ""


def _check(criterion: int, name: str, measured: float, threshold: float,
           op: str = "<", detail: str = "") -> CheckResult:
    passed = measured < threshold if op == "<" else measured > threshold
    return CheckResult(criterion=criterion, name=name, measured=float(measured),
                       threshold=threshold, op=op, passed=passed, detail=detail)


# ---------------------------------------------------------------------------
# the two worked orbits used throughout
# ---------------------------------------------------------------------------

def worked_osc() -> tuple[OscParams, osc.OscOrbit, MotionConstants]:
    """Ring oscillator with omega=1, q=5: turning radii 1 and 3, z amplitude 2."""
    p = OscParams(omega=1.0, q=5.0)
    orbit = osc.OscOrbit(rho1=1.0, rho2=3.0, z0=2.0)
    return p, orbit, osc.osc_constants_from_bounds(p, orbit, m_sign=1.0)


def worked_coul() -> tuple[CoulParams, cb.CoulOrbit, MotionConstants]:
    """Hartmann system with z=1, q=5/4: radial shell [2, 6], polar cone pi/3."""
    p = CoulParams(z_strength=1.0, q=1.25)
    orbit = cb.CoulOrbit(r1=2.0, r2=6.0, theta0=math.pi / 3.0)
    return p, orbit, cb.coul_constants_from_bounds(p, orbit, m_sign=1.0)


def _max_position_error(samples, reference) -> float:
    worst = 0.0
    for got, want in zip(samples, reference):
        err = max(abs(got.x - want.x), abs(got.y - want.y), abs(got.z - want.z))
        worst = max(worst, err)
    return worst


def _max_rel_drift(drift) -> float:
    return max(d.max_rel for d in drift.values())


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def criterion_1() -> list[CheckResult]:
    """Oracle equivalence of the oscillator's closed-form trajectory."""
    p, orbit, _ = worked_osc()
    t_end = 20.0 * math.pi
    times = np.linspace(0.0, t_end, 800)
    start = osc.osc_trajectory(p, orbit, 1.0, 0.0)
    run = integrate(osc.osc_potential_model(p), start, t_end, 1e-12, sample_times=times)
    closed = osc.osc_sample(p, orbit, 1.0, times)
    err = _max_position_error(run.samples, closed)
    return [_check(1, "oscillator closed form vs integration, max position error", err, 1e-6)]


def criterion_2() -> list[CheckResult]:
    """Oracle equivalence of the Hartmann system's closed-form trajectory."""
    p, orbit, _ = worked_coul()
    t_end = 3.0 * 16.0 * math.pi
    times = np.linspace(0.0, t_end, 800)
    start = cb.coul_trajectory(p, orbit, 1.0, 0.0)
    run = integrate(cb.coul_potential_model(p), start, t_end, 1e-12, sample_times=times)
    closed = cb.coul_sample(p, orbit, 1.0, times)
    err = _max_position_error(run.samples, closed)
    return [_check(2, "coulomb closed form vs integration, max position error", err, 1e-6)]


def criterion_3() -> list[CheckResult]:
    """Conservation of the full integral sets along both trajectory routes."""
    out = []
    p, orbit, _ = worked_osc()
    fns = osc.osc_invariant_functions(p)
    times = np.linspace(0.0, 20.0 * math.pi, 1000)
    closed = osc.osc_sample(p, orbit, 1.0, times)
    out.append(_check(3, "oscillator invariants drift, closed form",
                      _max_rel_drift(drift_report(closed, fns)), 1e-9))
    run = integrate(osc.osc_potential_model(p), closed[0], times[-1], 1e-12, invariants=fns)
    out.append(_check(3, "oscillator invariants drift, integrated",
                      _max_rel_drift(run.drift), 1e-9))

    p, orbit, _ = worked_coul()
    fns = cb.coul_invariant_functions(p)
    times = np.linspace(0.0, 48.0 * math.pi, 1000)
    closed = cb.coul_sample(p, orbit, 1.0, times)
    out.append(_check(3, "coulomb invariants drift, closed form",
                      _max_rel_drift(drift_report(closed, fns)), 1e-9))
    run = integrate(cb.coul_potential_model(p), closed[0], times[-1], 1e-12, invariants=fns)
    out.append(_check(3, "coulomb invariants drift, integrated",
                      _max_rel_drift(run.drift), 1e-9))
    return out


def criterion_4() -> list[CheckResult]:
    """Closure at the predicted global periods, non-closure at the base periods."""
    out = []
    p, orbit, _ = worked_osc()
    model = osc.osc_potential_model(p)
    start = osc.osc_trajectory(p, orbit, 1.0, 0.0)
    out.append(_check(4, "oscillator closure at 6 pi",
                      closure_test(model, start, 6.0 * math.pi, 1e-12).distance, 1e-6))
    out.append(_check(4, "oscillator non-closure at 2 pi",
                      closure_test(model, start, 2.0 * math.pi, 1e-12).distance, 1e-2, op=">",
                      detail="base period must not close the orbit"))
    p, orbit, _ = worked_coul()
    model = cb.coul_potential_model(p)
    start = cb.coul_trajectory(p, orbit, 1.0, 0.0)
    out.append(_check(4, "coulomb closure at 48 pi",
                      closure_test(model, start, 48.0 * math.pi, 1e-12).distance, 1e-6))
    out.append(_check(4, "coulomb non-closure at 16 pi",
                      closure_test(model, start, 16.0 * math.pi, 1e-12).distance, 1e-2, op=">",
                      detail="radial period must not close the orbit"))
    return out


def criterion_5() -> list[CheckResult]:
    """Closed-orbit ("quantized") identities for both systems."""
    m_sq, r12_sq = osc.osc_quantized_constants(5.0, 3, 2, 1.0)
    err_osc = max(abs(m_sq - 4.0), abs(r12_sq - 9.0))
    p, _, c = worked_coul()
    period = cb.coul_period(p, c)
    err_coul = max(abs(period.quantized_m_sq - 1.0),
                   abs(period.quantized_geometry - 9.0 / 8.0))
    return [
        _check(5, "oscillator closed-orbit identities (m**2=4, rho1**2 rho2**2=9)",
               err_osc, 1e-14),
        _check(5, "coulomb closed-orbit identities (m**2=1, geometry=9/8)",
               err_coul, 1e-14),
    ]


def _osc_max_abs_torsion(p: OscParams, orbit: osc.OscOrbit, m_sign: float,
                         n: int = 1000, horizon: float = 4.0 * math.pi) -> float:
    c = osc.osc_constants_from_bounds(p, orbit, m_sign)
    worst = 0.0
    for t in np.linspace(0.0, horizon, n):
        num, den = osc.osc_torsion_terms(p, osc.osc_trajectory(p, orbit, m_sign, t), c.m_z)
        if den > 1e-30:
            worst = max(worst, abs(num / den))
    return worst


def _coul_max_abs_torsion(p: CoulParams, orbit: cb.CoulOrbit, m_sign: float,
                          n: int = 1000) -> float:
    c = cb.coul_constants_from_bounds(p, orbit, m_sign)
    horizon = 2.0 * cb.coul_period(p, c).t_c
    worst = 0.0
    for t in np.linspace(0.0, horizon, n):
        num, den = cb.coul_torsion_terms(p, cb.coul_trajectory(p, orbit, m_sign, t), c.m_z)
        if den > 1e-30:
            worst = max(worst, abs(num / den))
    return worst


def criterion_6() -> list[CheckResult]:
    """Planar classes have vanishing torsion; specialized formulas match the general one."""
    out = []
    # oscillator: q = 0; m = 0; E = K
    p0 = OscParams(1.0, 0.0)
    orbit = osc.osc_orbit_from_constants(p0, MotionConstants.from_m(3.0, 2.0, 1.0, 0.0))
    out.append(_check(6, "oscillator torsion, q=0 class",
                      _osc_max_abs_torsion(p0, orbit, 1.0), 1e-10))
    p = OscParams(1.0, 5.0)
    orbit = osc.osc_orbit_from_constants(p, MotionConstants.from_m(4.0, 3.0, 0.0, 5.0))
    out.append(_check(6, "oscillator torsion, m=0 class",
                      _osc_max_abs_torsion(p, orbit, 1.0), 1e-10))
    orbit = osc.osc_orbit_from_constants(p, MotionConstants.from_m(5.0, 5.0, 2.0, 5.0))
    out.append(_check(6, "oscillator torsion, E=K class",
                      _osc_max_abs_torsion(p, orbit, 1.0), 1e-10))
    # coulomb: q = 0; m = 0; M**2 = K
    pc0 = CoulParams(1.0, 0.0)
    orbit = cb.coul_orbit_from_constants(pc0, MotionConstants.from_m(-0.125, 3.0, math.sqrt(2.25), 0.0))
    out.append(_check(6, "coulomb torsion, q=0 class",
                      _coul_max_abs_torsion(pc0, orbit, 1.0), 1e-10))
    pc = CoulParams(1.0, 1.25)
    orbit = cb.coul_orbit_from_constants(pc, MotionConstants.from_m(-0.125, 2.0, 0.0, 1.25))
    out.append(_check(6, "coulomb torsion, m=0 class",
                      _coul_max_abs_torsion(pc, orbit, 1.0), 1e-10))
    orbit = cb.coul_orbit_from_constants(pc, MotionConstants.from_m(-0.125, 3.0, math.sqrt(1.75), 1.25))
    out.append(_check(6, "coulomb torsion, M**2=K class",
                      _coul_max_abs_torsion(pc, orbit, 1.0), 1e-10))

    # specialized torsion terms vs the general conservative formula
    p, orbit, c = worked_osc()
    model = osc.osc_potential_model(p)
    worst = 0.0
    for t in np.linspace(0.0, 4.0 * math.pi, 100):
        state = osc.osc_trajectory(p, orbit, 1.0, t)
        num_s, den_s = osc.osc_torsion_terms(p, state, c.m_z)
        num_g, den_g = torsion_terms_expanded(
            model.gradient(np.array(state.position)),
            model.hessian(np.array(state.position)),
            np.array(state.velocity))
        if den_g > 1e-8:
            worst = max(worst, abs(num_s - num_g) / max(abs(num_g), 1e-300),
                        abs(den_s - den_g) / den_g)
    out.append(_check(6, "oscillator torsion terms vs general formula", worst, 1e-9))

    p, orbit, c = worked_coul()
    model = cb.coul_potential_model(p)
    worst = 0.0
    for t in np.linspace(0.0, 32.0 * math.pi, 100):
        state = cb.coul_trajectory(p, orbit, 1.0, t)
        num_s, den_s = cb.coul_torsion_terms(p, state, c.m_z)
        num_g, den_g = torsion_terms_expanded(
            model.gradient(np.array(state.position)),
            model.hessian(np.array(state.position)),
            np.array(state.velocity))
        if den_g > 1e-8:
            worst = max(worst, abs(num_s - num_g) / max(abs(num_g), 1e-300),
                        abs(den_s - den_g) / den_g)
    out.append(_check(6, "coulomb torsion terms vs general formula", worst, 1e-9))
    return out


def criterion_7() -> list[CheckResult]:
    """Orbit-averaged potential: quadrature equals the closed forms."""
    out = []
    p, orbit, _ = worked_osc()
    t_o = 2.0 * math.pi / p.omega
    mean, _ = quad(lambda t: osc.osc_potential(p, osc.osc_trajectory(p, orbit, 1.0, t)),
                   0.0, t_o, limit=200, epsabs=1e-12, epsrel=1e-12)
    mean /= t_o
    closed = osc.osc_mean_potential(p, orbit)
    out.append(_check(7, "oscillator mean potential, quadrature vs closed form",
                      abs(mean - closed), 1e-8, detail=f"closed form {closed!r} (= 13/3)"))

    p, orbit, c = worked_coul()
    t_c = cb.coul_period(p, c).t_c
    mean, _ = quad(lambda t: cb.coul_potential(p, cb.coul_trajectory(p, orbit, 1.0, t)),
                   0.0, t_c, limit=400, epsabs=1e-10, epsrel=1e-10)
    mean /= t_c
    closed = cb.coul_virial(p, orbit, c)
    out.append(_check(7, "coulomb mean potential, quadrature vs closed form",
                      abs(mean - closed), 1e-6, detail=f"closed form {closed!r} (= -19/96)"))

    # q = 0 reductions are exact
    p0 = OscParams(1.0, 0.0)
    orbit0 = osc.OscOrbit(rho1=0.7, rho2=1.9, z0=1.2)
    e0 = osc.osc_constants_from_bounds(p0, orbit0).energy
    err = abs(osc.osc_mean_potential(p0, orbit0) - 0.5 * e0)
    pc0 = CoulParams(1.0, 0.0)
    orbitc0 = cb.CoulOrbit(r1=2.0, r2=6.0, theta0=math.pi / 3.0)
    cc0 = cb.coul_constants_from_bounds(pc0, orbitc0)
    err = max(err, abs(cb.coul_virial(pc0, orbitc0, cc0) - 2.0 * cc0.energy))
    out.append(_check(7, "virial reductions at q=0 (E/2 and 2E)", err, 1e-300,
                      op="<", detail="exact equality required"))
    return out


def criterion_8() -> list[CheckResult]:
    """Semiclassical spectra collapse to the pure oscillator/Coulomb ladders at q=0."""
    worst = 0.0
    for omega in (1.0, 2.0):
        p = OscParams(omega, 0.0)
        for m in range(-10, 11):
            for n_rho in range(0, 6):
                for n_z in range(0, 11):
                    if 2 * n_rho + n_z + abs(m) > 10:
                        continue
                    got = osc.osc_semiclassical(p, m, n_rho, n_z)
                    want = (2 * n_rho + n_z + abs(m) + 1.5) * omega
                    worst = max(worst, abs(got - want))
    for zs in (1.0, 2.0):
        p = CoulParams(zs, 0.0)
        for m in range(-9, 10):
            for n_r in range(0, 10):
                for n_t in range(0, 10):
                    n = abs(m) + n_r + n_t + 1
                    if n > 10:
                        continue
                    got = cb.coul_semiclassical(p, m, n_r, n_t)
                    want = -0.5 * zs * zs / (n * n)
                    worst = max(worst, abs(got - want))
    return [_check(8, "semiclassical q=0 reductions, all levels to n=10", worst, 1e-300,
                   detail="exact equality required")]


def criterion_9() -> list[CheckResult]:
    """Local degeneracy: the worked triple, its spurious partner, and the search."""
    out = []
    triple = cb.degeneracy_q(3, 0, 2)
    ok_value = triple is not None and abs(triple.q_value - 25.0 / 16.0) < 1e-15
    p = CoulParams(1.0, 25.0 / 16.0)
    e_gap = abs(cb.coul_semiclassical(p, 3, 0, 0) - cb.coul_semiclassical(p, 0, 2, 0))
    out.append(_check(9, "degeneracy triple (3, 0, 2) at q=25/16, energy gap",
                      e_gap if ok_value else math.inf, 1e-14))
    spurious = cb.degeneracy_q(0, 2, 3)
    out.append(_check(9, "spurious branch (0, 2, 3) rejected",
                      0.0 if spurious is None else 1.0, 0.5))
    hits = cb.degeneracy_search(25.0 / 16.0, 1e-9, 5, 5)
    found = any((t.m, t.m_prime, t.i_shift) == (3, 0, 2) for t in hits)
    out.append(_check(9, "search at q=25/16 recovers (3, 0, 2)",
                      0.0 if found else 1.0, 0.5))
    return out


def criterion_10() -> list[CheckResult]:
    """Separatrix cubic root: residuals across three decades of time offsets."""
    zs, k = 1.0, 12.0
    r_min = 0.5 * k / zs
    worst = 0.0
    for dt in np.linspace(0.0, 1e3, 2001):
        r = cb.separatrix_radius(zs, r_min, dt)
        residual = abs(math.fsum([r ** 3, 3.0 * r * r * r_min,
                                  -4.0 * r_min ** 3, -4.5 * zs * dt * dt]))
        worst = max(worst, residual)
    return [_check(10, "separatrix cubic residual across dt in [0, 1e3]",
                   worst, 1e-10 * r_min ** 3,
                   detail=f"closest approach r_min = K/(2Z) = {r_min}")]


def criterion_11() -> list[CheckResult]:
    """Zero ring strength reduces to closed Kepler/oscillator ellipses."""
    out = []
    p = OscParams(1.0, 0.0)
    orbit = osc.OscOrbit(rho1=0.9, rho2=1.7, z0=1.1, phi0=0.3, t0=0.2, t0p=-0.4)
    start = osc.osc_trajectory(p, orbit, 1.0, 0.0)
    out.append(_check(11, "q=0 oscillator orbit closes after 2 pi",
                      closure_test(osc.osc_potential_model(p), start, 2.0 * math.pi,
                                   1e-12).distance, 1e-8))
    out.append(_check(11, "q=0 oscillator torsion", _osc_max_abs_torsion(p, orbit, 1.0), 1e-10))
    l_vec = np.array(osc.osc_angmom_q0(orbit, p.omega, 1.0))
    worst = 0.0
    for t in np.linspace(0.0, 2.0 * math.pi, 200):
        s = osc.osc_trajectory(p, orbit, 1.0, t)
        pos = np.array(s.position)
        worst = max(worst, abs(l_vec @ pos) / (np.linalg.norm(l_vec) * np.linalg.norm(pos)))
    out.append(_check(11, "q=0 oscillator angular momentum perpendicular to orbit",
                      worst, 1e-8))

    p = CoulParams(1.0, 0.0)
    orbit = cb.CoulOrbit(r1=1.5, r2=4.0, theta0=1.1, phi0=0.2, beta0=0.7)
    c = cb.coul_constants_from_bounds(p, orbit)
    t_c = cb.coul_period(p, c).t_c
    start = cb.coul_trajectory(p, orbit, 1.0, 0.0)
    out.append(_check(11, "q=0 coulomb orbit closes after one radial period",
                      closure_test(cb.coul_potential_model(p), start, t_c, 1e-12).distance,
                      1e-8))
    out.append(_check(11, "q=0 coulomb torsion", _coul_max_abs_torsion(p, orbit, 1.0), 1e-10))
    return out


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
    9: criterion_9, 10: criterion_10, 11: criterion_11,
}


def run_acceptance() -> list[CheckResult]:
    out: list[CheckResult] = []
    for number in sorted(CRITERIA):
        out.extend(CRITERIA[number]())
    return out
