"""Command-line front end.

Subcommands: phase-diagram, qfi, fisher, fisher-vs-squeezing, validate.
Sweep ranges use min:max:steps with inclusive endpoints; lists are
comma-separated.  Every data file gets a JSON manifest sidecar
(<out>.manifest.json); CSV floats carry 17 significant digits so doubles
round-trip exactly.  Exit codes: 0 success, 1 validation failure, 2 usage
error, 3 partial numerical failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import logging
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, metrology, model, validate
from .errors import SqspinError
from .model import CRITICAL_TOL, Phase

logger = logging.getLogger("sqspin.cli")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_PARTIAL = 3

_TAIL_THRESHOLD = 1e-10


def _parse_range(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"range must be min:max:steps, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad range {text!r}: {exc}") from None
    if steps < 2:
        raise argparse.ArgumentTypeError(f"steps must be >= 2, got {steps}")
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"range needs min < max, got {text!r}")
    return np.linspace(lo, hi, steps)


def _parse_float_list(text: str) -> list[float]:
    try:
        values = [float(p) for p in text.split(",") if p.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad list {text!r}: {exc}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty value list")
    return values


def _fmt(value) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return _fmt(value)
    return value


def _write_rows(out: Path, header: list[str], rows: list[tuple], fmt: str) -> None:
    out.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        lines = [",".join(header)]
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        out.write_text("\n".join(lines) + "\n")
    else:
        payload = [{k: _json_safe(v) for k, v in zip(header, row)} for row in rows]
        out.write_text(json.dumps(payload, indent=1) + "\n")


def _write_manifest(out: Path, command: str, parameters: dict, tolerances: dict,
                    failures: int = 0) -> None:
    manifest = {
        "command": command,
        "parameters": {k: _json_safe(v) for k, v in parameters.items()},
        "version": __version__,
        "tolerances": tolerances,
        "failures": failures,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    Path(str(out) + ".manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")


def _plot_path(out: Path) -> Path:
    return out.with_suffix(".png") if out.suffix else Path(str(out) + ".png")


# --- phase-diagram -----------------------------------------------------------

def _ness_point(g: float, gamma: float, tol: float) -> model.NessSolution:
    try:
        return model.solve_ness(g, gamma, tol=tol)
    except SqspinError:
        # 4g <= gamma^2: deep disordered corner where the window formula
        # has no real frequency; the constraint solution omega = g/2 holds.
        return model.NessSolution(g=g, gamma=gamma, phase=Phase.DISORDERED,
                                  omega=0.5 * g, h=0.0, alpha=0.0)


def cmd_phase_diagram(args) -> int:
    axis2 = args.t if args.mode == "equilibrium" else args.gamma
    if axis2 is None:
        flag = "--t" if args.mode == "equilibrium" else "--gamma"
        print(f"error: {flag} is required for --mode {args.mode}", file=sys.stderr)
        return EXIT_USAGE

    rows = []
    failures = 0
    for g in args.g:
        for a2 in axis2:
            try:
                if args.mode == "equilibrium":
                    sol = model.solve_equilibrium(float(g), float(a2))
                else:
                    sol = _ness_point(float(g), float(a2), CRITICAL_TOL)
            except SqspinError as exc:
                failures += 1
                logger.error("point (g=%g, axis2=%g) failed: %s", g, a2, exc)
                continue
            rows.append((float(g), float(a2), str(sol.phase), sol.omega, sol.h, sol.alpha))

    grid = model.phase_diagram(args.mode, list(args.g), list(axis2),
                               tol=args.tol, include_records=False)
    crit_rows = [(cp.g, cp.axis2) for cp in grid.critical_points]

    out = Path(args.out)
    header = ["g", "axis2", "phase", "omega", "h", "alpha"]
    _write_rows(out, header, rows, args.format)
    crit_out = Path(str(out.with_suffix("")) + ".critical_line." + args.format)
    _write_rows(crit_out, ["g", "axis2"], crit_rows, args.format)
    _write_manifest(out, "phase-diagram", {
        "mode": args.mode,
        "g": args.raw_g, "t" if args.mode == "equilibrium" else "gamma": args.raw_axis2,
        "format": args.format, "jobs": args.jobs,
    }, {"tol": args.tol, "critical_tol": CRITICAL_TOL}, failures)

    if args.plot:
        from . import plotting
        fig = plotting.phase_diagram_figure(
            args.mode, [r[0] for r in rows], [r[1] for r in rows], [r[2] for r in rows],
            [c[0] for c in crit_rows], [c[1] for c in crit_rows])
        plotting.save_figure(fig, _plot_path(out))
    return EXIT_PARTIAL if failures else EXIT_OK


# --- qfi ----------------------------------------------------------------------

def _qfi_row_equilibrium(g: float, tol: float) -> tuple:
    if abs(g - 4.0) <= tol:
        term_s = 0.5 * (1.0 / g - 0.5 / g) ** 2
        return (g, math.inf, math.inf, term_s)
    if g > 4.0:
        return (g, 0.0, 0.0, 0.0)
    res = metrology.qfi_equilibrium(g)
    return (g, res.value, res.term_displacement, res.term_squeezing)


def _qfi_row_ness(g: float, gamma: float, tol: float) -> tuple:
    edges = model.ness_critical_gs(gamma) if gamma <= 2.0 else None
    if edges is not None and min(abs(g - edges[0]), abs(g - edges[1])) <= tol:
        omega = 0.5 * math.sqrt(4.0 * g - gamma * gamma)
        domega = 1.0 / math.sqrt(4.0 * g - gamma * gamma)
        term_s = 0.5 * (1.0 / g - domega / omega) ** 2
        return (g, math.inf, math.inf, term_s, gamma)
    if edges is None or not edges[0] < g < edges[1]:
        return (g, 0.0, 0.0, 0.0, gamma)
    res = metrology.qfi_ness(g, gamma)
    return (g, res.value, res.term_displacement, res.term_squeezing, gamma)


def cmd_qfi(args) -> int:
    if args.mode == "ness" and args.gamma is None:
        print("error: --gamma is required for --mode ness", file=sys.stderr)
        return EXIT_USAGE
    if args.mode == "equilibrium" and args.gamma is not None:
        print("error: --gamma only applies to --mode ness", file=sys.stderr)
        return EXIT_USAGE
    if float(args.g[0]) <= 0.0:
        print("error: g range must be positive", file=sys.stderr)
        return EXIT_USAGE

    if args.mode == "equilibrium":
        header = ["g", "qfi", "term_displacement", "term_squeezing"]
        rows = [_qfi_row_equilibrium(float(g), args.tol) for g in args.g]
    else:
        header = ["g", "qfi", "term_displacement", "term_squeezing", "gamma"]
        rows = [_qfi_row_ness(float(g), args.gamma, args.tol) for g in args.g]

    out = Path(args.out)
    _write_rows(out, header, rows, args.format)
    params = {"mode": args.mode, "g": args.raw_g, "format": args.format, "jobs": args.jobs}
    if args.gamma is not None:
        params["gamma"] = args.gamma
    _write_manifest(out, "qfi", params, {"tol": args.tol})

    if args.plot:
        from . import plotting
        fig = plotting.qfi_figure([r[0] for r in rows], [r[1] for r in rows],
                                  args.mode, args.gamma)
        plotting.save_figure(fig, _plot_path(out))
    return EXIT_OK


# --- fisher --------------------------------------------------------------------

def _fisher_point(task: tuple[float, float, float]) -> tuple:
    g, omega_meas, tol = task
    try:
        res = metrology.fisher_information(g, omega_meas, tail_threshold=tol)
        return (g, omega_meas, res.value, res.value / res.normalized, res.normalized, "")
    except SqspinError as exc:
        return (g, omega_meas, math.nan, math.nan, math.nan, type(exc).__name__)


def cmd_fisher(args) -> int:
    tasks = [(float(g), float(om), _TAIL_THRESHOLD) for g in args.g for om in args.omega]
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_fisher_point, tasks, chunksize=max(1, len(tasks) // (4 * args.jobs))))
    else:
        rows = [_fisher_point(t) for t in tasks]

    failures = sum(1 for row in rows if row[5])
    for row in rows:
        if row[5]:
            logger.error("fisher point (g=%g, Omega=%g) failed: %s", row[0], row[1], row[5])

    out = Path(args.out)
    header = ["g", "omega_meas", "fisher", "qfi", "normalized"]
    _write_rows(out, header, [row[:5] for row in rows], args.format)
    _write_manifest(out, "fisher", {
        "g": args.raw_g, "omega": args.omega, "format": args.format, "jobs": args.jobs,
    }, {"tol": args.tol, "tail_threshold": _TAIL_THRESHOLD}, failures)

    if args.plot:
        from . import plotting
        fig = plotting.fisher_figure([r[0] for r in rows], [r[1] for r in rows],
                                     [r[4] for r in rows])
        plotting.save_figure(fig, _plot_path(out))
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_fisher_vs_squeezing(args) -> int:
    if not 0.0 < args.gval < 4.0:
        print("error: --g must lie in (0, 4)", file=sys.stderr)
        return EXIT_USAGE
    try:
        curve = metrology.fisher_vs_squeezing(args.gval, list(args.r), branch=args.branch)
    except SqspinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARTIAL

    rows = [(r, res.value) for r, res in curve]
    out = Path(args.out)
    _write_rows(out, ["r", "fisher"], rows, args.format)
    _write_manifest(out, "fisher-vs-squeezing", {
        "g": args.gval, "r": args.raw_r, "branch": args.branch,
        "format": args.format, "jobs": args.jobs,
    }, {"tol": args.tol, "tail_threshold": 1e-13, "p_floor": 1e-15})

    if args.plot:
        from . import plotting
        fig = plotting.fisher_vs_squeezing_figure([r[0] for r in rows],
                                                  [r[1] for r in rows], args.gval)
        plotting.save_figure(fig, _plot_path(out))
    return EXIT_OK


# --- validate --------------------------------------------------------------------

def cmd_validate(args) -> int:
    results = validate.run_checks(args.level)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name:<{width}}  [{r.level}] ({r.seconds:6.2f}s)  {r.detail}")
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} checks passed at level {args.level!r}")

    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        payload = [{"name": r.name, "level": r.level, "passed": r.passed,
                    "detail": r.detail, "seconds": r.seconds} for r in results]
        out.write_text(json.dumps(payload, indent=1) + "\n")
        _write_manifest(out, "validate", {"level": args.level}, {},
                        failures=len(results) - passed)
    return EXIT_OK if passed == len(results) else EXIT_VALIDATION


# --- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqspin",
        description="Phase structure and Fisher-information metrology of the "
                    "single spherical quantum spin.")
    parser.add_argument("--version", action="version", version=f"sqspin {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", required=True, help="output data file")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers for sweeps")
    common.add_argument("--tol", type=float, default=1e-10,
                        help="boundary/critical-point tolerance")
    common.add_argument("--plot", action="store_true",
                        help="also render a PNG figure next to the data file")

    p = sub.add_parser("phase-diagram", parents=[common],
                       help="classify a (g, T) or (g, gamma) grid and refine the boundary")
    p.add_argument("--mode", choices=("equilibrium", "ness"), required=True)
    p.add_argument("--g", type=_parse_range, required=True, metavar="MIN:MAX:STEPS")
    p.add_argument("--t", type=_parse_range, metavar="MIN:MAX:STEPS")
    p.add_argument("--gamma", type=_parse_range, metavar="MIN:MAX:STEPS")
    p.set_defaults(func=cmd_phase_diagram)

    p = sub.add_parser("qfi", parents=[common],
                       help="quantum Fisher information sweep over g")
    p.add_argument("--mode", choices=("equilibrium", "ness"), default="equilibrium")
    p.add_argument("--g", type=_parse_range, required=True, metavar="MIN:MAX:STEPS")
    p.add_argument("--gamma", type=float, help="dissipation rate (ness mode)")
    p.set_defaults(func=cmd_qfi)

    p = sub.add_parser("fisher", parents=[common],
                       help="photon-counting Fisher information over g and Omega")
    p.add_argument("--g", type=_parse_range, required=True, metavar="MIN:MAX:STEPS")
    p.add_argument("--omega", type=_parse_float_list, required=True,
                   metavar="OM1[,OM2,...]", help="measurement basis frequencies")
    p.set_defaults(func=cmd_fisher)

    p = sub.add_parser("fisher-vs-squeezing", parents=[common],
                       help="Fisher information along a squeezing-indexed basis family")
    p.add_argument("--g", dest="gval", type=float, required=True)
    p.add_argument("--r", type=_parse_range, required=True, metavar="MIN:MAX:STEPS")
    p.add_argument("--branch", choices=("below", "above"), default="below")
    p.set_defaults(func=cmd_fisher_vs_squeezing)

    p = sub.add_parser("validate", help="run the analytic-vs-oracle check suite")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--out", help="optional JSON report path")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)

    # Keep the raw sweep strings for the manifest.
    raw = argv if argv is not None else sys.argv[1:]
    args.raw_g = _raw_flag(raw, "--g")
    args.raw_axis2 = _raw_flag(raw, "--t") or _raw_flag(raw, "--gamma")
    args.raw_r = _raw_flag(raw, "--r")

    try:
        return args.func(args)
    except SqspinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARTIAL


def _raw_flag(argv: list[str], flag: str) -> str | None:
    for i, token in enumerate(argv):
        if token == flag and i + 1 < len(argv):
            return argv[i + 1]
        if token.startswith(flag + "="):
            return token.split("=", 1)[1]
    return None


if __name__ == "__main__":
    sys.exit(main())
