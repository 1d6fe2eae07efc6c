"""Command-line frontend with deterministic CSV/JSON emission.

Exit codes: 0 success, 2 domain error, 3 numeric failure, 64 usage error.
Every error path prints a single machine-parsable line on standard error.
All floating-point output carries 17 significant digits so identical
configurations produce bit-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

import numpy as np

from . import coulomb as cb
from . import oscillator as osc
from .core import CoulParams, DomainError, MotionConstants, NumericError, OscParams
from .oracle import drift_report
from .verify import run_acceptance

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_NUMERIC = 3
EXIT_USAGE = 64

TRAJ_COLUMNS = ["t", "x", "y", "z", "vx", "vy", "vz", "rho", "r", "theta",
                "phi_unwrapped", "H", "K_inv", "m_inv"]


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# deterministic emission
# ---------------------------------------------------------------------------

def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.16e" % value
    return str(value)


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def _flatten(prefix: str, obj, out: list[tuple[str, object]]) -> None:
    if isinstance(obj, dict):
        for key in obj:
            _flatten(f"{prefix}.{key}" if prefix else str(key), obj[key], out)
    else:
        out.append((prefix, obj))


def emit(payload: dict, fmt: str, path: Optional[str]) -> None:
    if fmt == "json":
        text = json.dumps(_json_safe(payload), sort_keys=True, indent=2) + "\n"
    else:
        lines = []
        flat: list[tuple[str, object]] = []
        _flatten("", payload["config"], flat)
        for key, value in flat:
            lines.append(f"# {key} = {_csv_cell(value)}")
        lines.append(",".join(payload["columns"]))
        for row in payload["rows"]:
            lines.append(",".join(_csv_cell(v) for v in row))
        text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as handle:
            handle.write(text)


def _drift_dict(drift) -> dict:
    return {name: {"max_abs": stat.max_abs, "max_rel": stat.max_rel}
            for name, stat in drift.items()}


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _add_output_flags(sp) -> None:
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--output", default=None, help="output path (default: stdout)")


def _add_sampling_flags(sp, t_end_required: bool = True) -> None:
    sp.add_argument("--t-start", type=float, default=0.0)
    sp.add_argument("--t-end", type=float, required=t_end_required, default=None)
    sp.add_argument("--samples", type=int, required=t_end_required, default=None)


def _sampling_times(args) -> np.ndarray:
    if args.samples is None or args.samples < 2:
        raise UsageError("--samples must be at least 2")
    if not args.t_end > args.t_start:
        raise UsageError("--t-end must exceed --t-start")
    return np.linspace(args.t_start, args.t_end, args.samples)


def _resolve_osc(args) -> tuple[OscParams, osc.OscOrbit, float, MotionConstants]:
    p = OscParams(omega=args.omega, q=args.q)
    has_const = any(v is not None for v in (args.e, args.k, args.m))
    has_geom = any(v is not None for v in (args.rho1, args.rho2, args.z0))
    if has_const == has_geom:
        raise UsageError("give either constants (--e --k --m) or geometry "
                         "(--rho1 --rho2 --z0), not both")
    if has_const:
        if None in (args.e, args.k, args.m):
            raise UsageError("constants specification needs all of --e --k --m")
        c = MotionConstants.from_m(args.e, args.k, args.m, args.q)
        orbit = osc.osc_orbit_from_constants(p, c, phi0=args.phi0, t0=args.t0, t0p=args.t0p)
        m_sign = 1.0 if args.m >= 0 else -1.0
    else:
        if None in (args.rho1, args.rho2, args.z0):
            raise UsageError("geometry specification needs all of --rho1 --rho2 --z0")
        orbit = osc.OscOrbit(rho1=args.rho1, rho2=args.rho2, z0=args.z0,
                             phi0=args.phi0, t0=args.t0, t0p=args.t0p)
        m_sign = args.m_sign
        c = osc.osc_constants_from_bounds(p, orbit, m_sign)
    return p, orbit, m_sign, c


def _resolve_coul(args) -> tuple[CoulParams, cb.CoulOrbit, float, MotionConstants]:
    p = CoulParams(z_strength=args.zed, q=args.q)
    has_const = any(v is not None for v in (args.e, args.k, args.m))
    has_geom = any(v is not None for v in (args.r1, args.r2, args.theta0))
    if has_const == has_geom:
        raise UsageError("give either constants (--e --k --m) or geometry "
                         "(--r1 --r2 --theta0), not both")
    if has_const:
        if None in (args.e, args.k, args.m):
            raise UsageError("constants specification needs all of --e --k --m")
        c = MotionConstants.from_m(args.e, args.k, args.m, args.q)
        orbit = cb.coul_orbit_from_constants(p, c, phi0=args.phi0, t0=args.t0,
                                             beta0=args.beta0)
        m_sign = 1.0 if args.m >= 0 else -1.0
    else:
        if None in (args.r1, args.r2, args.theta0):
            raise UsageError("geometry specification needs all of --r1 --r2 --theta0")
        orbit = cb.CoulOrbit(r1=args.r1, r2=args.r2, theta0=args.theta0,
                             phi0=args.phi0, t0=args.t0, beta0=args.beta0)
        m_sign = args.m_sign
        c = cb.coul_constants_from_bounds(p, orbit, m_sign)
    return p, orbit, m_sign, c


def _osc_config(args, p, orbit, c) -> dict:
    return {
        "command": args.command,
        "system": "osc",
        "omega": p.omega, "q": p.q,
        "constants": {"e": c.energy, "k": c.separation, "m": c.m_z, "m_eff": c.m_eff},
        "geometry": {"rho1": orbit.rho1, "rho2": orbit.rho2, "z0": orbit.z0},
        "phases": {"phi0": orbit.phi0, "t0": orbit.t0, "t0p": orbit.t0p},
    }


def _coul_config(args, p, orbit, c) -> dict:
    return {
        "command": args.command,
        "system": "coul",
        "zed": p.z_strength, "q": p.q,
        "constants": {"e": c.energy, "k": c.separation, "m": c.m_z, "m_eff": c.m_eff},
        "geometry": {"r1": orbit.r1, "r2": orbit.r2, "theta0": orbit.theta0},
        "phases": {"phi0": orbit.phi0, "t0": orbit.t0, "beta0": orbit.beta0},
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_osc_traj(args) -> int:
    p, orbit, m_sign, c = _resolve_osc(args)
    times = _sampling_times(args)
    rows, states = [], []
    for t in times:
        rho, phi, z, rd, phd, zd = osc.osc_trajectory_cyl(p, orbit, m_sign, float(t))
        state = osc.osc_trajectory(p, orbit, m_sign, float(t))
        inv = osc.osc_invariants(p, state)
        rows.append([state.t, state.x, state.y, state.z, state.vx, state.vy, state.vz,
                     rho, state.r, math.acos(max(-1.0, min(1.0, state.z / state.r))),
                     phi, inv.h, inv.h - inv.a2, inv.a3])
        states.append(state)
    drift = drift_report(states, osc.osc_invariant_functions(p))
    config = _osc_config(args, p, orbit, c)
    config["sampling"] = {"t_start": args.t_start, "t_end": args.t_end, "n": args.samples}
    emit({"config": config, "columns": TRAJ_COLUMNS, "rows": rows,
          "invariant_drift": _drift_dict(drift), "verdicts": None},
         args.format, args.output)
    return EXIT_OK


def cmd_coul_traj(args) -> int:
    p, orbit, m_sign, c = _resolve_coul(args)
    times = _sampling_times(args)
    rows, states = [], []
    for t in times:
        r, theta, phi, rd, thd, phd = cb.coul_trajectory_sph(p, orbit, m_sign, float(t))
        state = cb.coul_trajectory(p, orbit, m_sign, float(t))
        inv = cb.coul_invariants(p, state)
        rows.append([state.t, state.x, state.y, state.z, state.vx, state.vy, state.vz,
                     state.rho, r, theta, phi, inv.h, inv.b1, inv.b2])
        states.append(state)
    drift = drift_report(states, cb.coul_invariant_functions(p))
    config = _coul_config(args, p, orbit, c)
    config["sampling"] = {"t_start": args.t_start, "t_end": args.t_end, "n": args.samples}
    emit({"config": config, "columns": TRAJ_COLUMNS, "rows": rows,
          "invariant_drift": _drift_dict(drift), "verdicts": None},
         args.format, args.output)
    return EXIT_OK


def cmd_equipot(args) -> int:
    if args.samples is None or args.samples < 1:
        raise UsageError("--samples must be at least 1")
    if args.system == "osc":
        p = OscParams(omega=args.omega, q=args.q)
        curve = osc.osc_equipotential(p, args.level, args.samples)
        config = {"command": args.command, "system": "osc", "omega": p.omega,
                  "q": p.q, "level": args.level,
                  "rho_bounds": {"min": curve.rho_min, "max": curve.rho_max}}
        verdicts = {"degenerate": curve.degenerate}
    else:
        p = CoulParams(z_strength=args.zed, q=args.q)
        curve = cb.coul_equipotential(p, args.level, args.samples, rho_max=args.rho_max)
        config = {"command": args.command, "system": "coul", "zed": p.z_strength,
                  "q": p.q, "level": args.level,
                  "rho_bounds": {"min": curve.rho_min, "max": curve.rho_max}}
        verdicts = {"case": curve.case, "degenerate": curve.degenerate}
    rows = [[float(rho), float(z), -float(z)] for rho, z in zip(curve.rho, curve.z)]
    emit({"config": config, "columns": ["rho", "z_plus", "z_minus"], "rows": rows,
          "invariant_drift": None, "verdicts": verdicts}, args.format, args.output)
    return EXIT_OK


def cmd_planarity(args) -> int:
    if args.system == "osc":
        p, orbit, m_sign, c = _resolve_osc(args)
        if args.t_end is None:
            args.t_end = args.t_start + 2.0 * math.pi / p.omega
        trajectory = lambda t: osc.osc_trajectory(p, orbit, m_sign, t)
        classify = lambda s: osc.osc_planarity(p, s, c)
        config = _osc_config(args, p, orbit, c)
    else:
        p, orbit, m_sign, c = _resolve_coul(args)
        if args.t_end is None:
            args.t_end = args.t_start + cb.coul_period(p, c).t_c
        trajectory = lambda t: cb.coul_trajectory(p, orbit, m_sign, t)
        classify = lambda s: cb.coul_planarity(p, s, c)
        config = _coul_config(args, p, orbit, c)
    if args.samples is None:
        args.samples = 512
    times = _sampling_times(args)
    rows = []
    worst = 0.0
    verdict = None
    for t in times:
        report = classify(trajectory(float(t)))
        verdict = report.verdict
        tau = report.torsion
        rows.append([float(t), report.torsion_num, report.torsion_den, tau])
        if math.isfinite(tau):
            worst = max(worst, abs(tau))
    config["sampling"] = {"t_start": args.t_start, "t_end": args.t_end, "n": args.samples}
    emit({"config": config, "columns": ["t", "torsion_num", "torsion_den", "torsion"],
          "rows": rows, "invariant_drift": None,
          "verdicts": {"classification": verdict.value, "max_abs_torsion": worst}},
         args.format, args.output)
    return EXIT_OK


def cmd_period(args) -> int:
    if args.system == "osc":
        p = OscParams(omega=args.omega, q=args.q)
        m_eff = math.sqrt(args.m ** 2 + args.q)
        # E and K do not enter the frequency ratio; default to an admissible pair
        k = args.k if args.k is not None else (p.omega * m_eff if m_eff > 0.0 else 1.0)
        e = args.e if args.e is not None else k
        c = MotionConstants.from_m(e, k, args.m, args.q)
        result = osc.osc_periodicity(p, c, tol=args.tol, max_den=args.max_den)
        verdicts = {
            "kind": result.kind,
            "ratio": result.ratio,
            "k1": result.rational.k1 if result.rational else None,
            "k2": result.rational.k2 if result.rational else None,
            "period": result.period,
            "base_period": 2.0 * math.pi / p.omega,
        }
        config = {"command": args.command, "system": "osc", "omega": p.omega, "q": p.q,
                  "m": args.m, "tol": args.tol, "max_den": args.max_den}
        row = [result.kind, verdicts["k1"], verdicts["k2"], result.period]
    else:
        if args.e is None:
            raise UsageError("coulomb period needs --e (it sets the radial period)")
        p = CoulParams(z_strength=args.zed, q=args.q)
        m_eff = math.sqrt(args.m ** 2 + args.q)
        k = args.k if args.k is not None else max(m_eff * m_eff,
                                                  p.z_strength ** 2 / (-2.0 * args.e))
        c = MotionConstants.from_m(args.e, k, args.m, args.q)
        result = cb.coul_period(p, c, tol=args.tol, max_den=args.max_den)
        verdicts = {
            "kind": result.kind,
            "ratio": result.ratio,
            "k1": result.rational.k1 if result.rational else None,
            "k2": result.rational.k2 if result.rational else None,
            "radial_period": result.t_c,
            "period": result.global_period,
            "quantized_m_sq": result.quantized_m_sq,
            "quantized_geometry": result.quantized_geometry,
        }
        config = {"command": args.command, "system": "coul", "zed": p.z_strength,
                  "q": p.q, "m": args.m, "e": args.e, "tol": args.tol,
                  "max_den": args.max_den}
        row = [result.kind, verdicts["k1"], verdicts["k2"], result.global_period]
    emit({"config": config, "columns": ["kind", "k1", "k2", "period"], "rows": [row],
          "invariant_drift": None, "verdicts": verdicts}, args.format, args.output)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    if args.system == "osc":
        if args.nrho is None or args.nz is None:
            raise UsageError("oscillator spectrum needs --nrho and --nz")
        p = OscParams(omega=args.omega, q=args.q)
        energy = osc.osc_semiclassical(p, args.m, args.nrho, args.nz)
        config = {"command": args.command, "system": "osc", "omega": p.omega,
                  "q": p.q, "m": args.m, "nrho": args.nrho, "nz": args.nz}
    else:
        if args.nr is None or args.ntheta is None:
            raise UsageError("coulomb spectrum needs --nr and --ntheta")
        p = CoulParams(z_strength=args.zed, q=args.q)
        energy = cb.coul_semiclassical(p, args.m, args.nr, args.ntheta)
        config = {"command": args.command, "system": "coul", "zed": p.z_strength,
                  "q": p.q, "m": args.m, "nr": args.nr, "ntheta": args.ntheta}
    emit({"config": config, "columns": ["energy"], "rows": [[energy]],
          "invariant_drift": None, "verdicts": {"energy": energy}},
         args.format, args.output)
    return EXIT_OK


def cmd_degeneracy(args) -> int:
    triples = cb.degeneracy_search(args.q, args.tol, args.max_m, args.max_i)
    triples.sort(key=lambda t: (t.m, t.m_prime, t.i_shift))
    rows = [[t.m, t.m_prime, t.i_shift, t.q_value] for t in triples]
    config = {"command": args.command, "q": args.q, "tol": args.tol,
              "max_m": args.max_m, "max_i": args.max_i}
    emit({"config": config, "columns": ["m", "m_prime", "i_shift", "q_value"],
          "rows": rows, "invariant_drift": None,
          "verdicts": {"count": len(rows)}}, args.format, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_acceptance()
    rows = [[c.criterion, c.name, c.measured, c.threshold, c.op,
             "PASS" if c.passed else "FAIL"] for c in checks]
    n_failed = sum(1 for c in checks if not c.passed)
    emit({"config": {"command": args.command},
          "columns": ["criterion", "check", "measured", "threshold", "op", "status"],
          "rows": rows, "invariant_drift": None,
          "verdicts": {"checks": len(checks), "failed": n_failed,
                       "passed": n_failed == 0}},
         args.format, args.output)
    return EXIT_OK if n_failed == 0 else EXIT_NUMERIC


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_osc_orbit_flags(sp, require_params: bool = True) -> None:
    sp.add_argument("--omega", type=float, required=require_params, default=1.0)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--e", type=float, default=None)
    sp.add_argument("--k", type=float, default=None)
    sp.add_argument("--m", type=float, default=None)
    sp.add_argument("--rho1", type=float, default=None)
    sp.add_argument("--rho2", type=float, default=None)
    sp.add_argument("--z0", type=float, default=None)
    sp.add_argument("--m-sign", type=float, choices=(1.0, -1.0), default=1.0)
    sp.add_argument("--phi0", type=float, default=0.0)
    sp.add_argument("--t0", type=float, default=0.0)
    sp.add_argument("--t0p", type=float, default=0.0)


def _add_coul_orbit_flags(sp) -> None:
    sp.add_argument("--zed", type=float, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--e", type=float, default=None)
    sp.add_argument("--k", type=float, default=None)
    sp.add_argument("--m", type=float, default=None)
    sp.add_argument("--r1", type=float, default=None)
    sp.add_argument("--r2", type=float, default=None)
    sp.add_argument("--theta0", type=float, default=None)
    sp.add_argument("--m-sign", type=float, choices=(1.0, -1.0), default=1.0)
    sp.add_argument("--phi0", type=float, default=0.0)
    sp.add_argument("--t0", type=float, default=0.0)
    sp.add_argument("--beta0", type=float, default=0.0)


def build_parser() -> Parser:
    parser = Parser(prog="ringshape",
                    description="Classical mechanics of two ring-shaped potentials")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("osc-traj", help="closed-form oscillator trajectory table")
    _add_osc_orbit_flags(sp)
    _add_sampling_flags(sp)
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_osc_traj)

    sp = sub.add_parser("coul-traj", help="closed-form coulomb trajectory table")
    _add_coul_orbit_flags(sp)
    _add_sampling_flags(sp)
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_coul_traj)

    sp = sub.add_parser("equipot", help="equipotential curve samples")
    sp.add_argument("--system", choices=("osc", "coul"), required=True)
    sp.add_argument("--omega", type=float, default=1.0)
    sp.add_argument("--zed", type=float, default=1.0)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--level", type=float, required=True)
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--rho-max", type=float, default=None,
                    help="truncation radius for the unbounded zero-level case")
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_equipot)

    sp = sub.add_parser("planarity", help="torsion along an orbit plus classification")
    sp.add_argument("--system", choices=("osc", "coul"), required=True)
    _add_osc_orbit_flags(sp, require_params=False)
    _add_coul_orbit_flags_optional(sp)
    _add_sampling_flags(sp, t_end_required=False)
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_planarity)

    sp = sub.add_parser("period", help="(quasi-)periodicity analysis")
    sp.add_argument("--system", choices=("osc", "coul"), required=True)
    sp.add_argument("--omega", type=float, default=1.0)
    sp.add_argument("--zed", type=float, default=1.0)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--m", type=float, required=True)
    sp.add_argument("--e", type=float, default=None)
    sp.add_argument("--k", type=float, default=None)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--max-den", type=int, default=10 ** 6)
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_period)

    sp = sub.add_parser("spectrum", help="semiclassical energy level")
    sp.add_argument("--system", choices=("osc", "coul"), required=True)
    sp.add_argument("--omega", type=float, default=1.0)
    sp.add_argument("--zed", type=float, default=1.0)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--nrho", type=int, default=None)
    sp.add_argument("--nz", type=int, default=None)
    sp.add_argument("--nr", type=int, default=None)
    sp.add_argument("--ntheta", type=int, default=None)
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("degeneracy", help="ring strengths with coinciding levels")
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--max-m", type=int, required=True)
    sp.add_argument("--max-i", type=int, required=True)
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_degeneracy)

    sp = sub.add_parser("verify", help="run the closed-form vs oracle check suite")
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_verify)

    return parser


def _add_coul_orbit_flags_optional(sp) -> None:
    # planarity shares one subparser across systems; coulomb flags arrive
    # here with defaults so the oscillator path can ignore them
    sp.add_argument("--zed", type=float, default=1.0)
    sp.add_argument("--r1", type=float, default=None)
    sp.add_argument("--r2", type=float, default=None)
    sp.add_argument("--theta0", type=float, default=None)
    sp.add_argument("--beta0", type=float, default=0.0)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"ringshape: usage-error: {exc}\n")
        return EXIT_USAGE
    except DomainError as exc:
        sys.stderr.write(f"ringshape: domain-error: {exc}\n")
        return EXIT_DOMAIN
    except NumericError as exc:
        sys.stderr.write(f"ringshape: numeric-error: {exc}\n")
        return EXIT_NUMERIC


def entry() -> None:
    sys.exit(main())
