"""
Command line entry point.

    nsexpander solve --case smooth --theta0 1e-3 --out profile.csv --summary summary.json
    nsexpander sweep --case smooth --theta0 1e-4,2e-4,4e-4 --out table.csv

Options may also come from a flat ``key=value`` file given with
``--config``; keys are the long option names (``theta0``, ``p-delta``,
...) and command line flags override the file.

Exit codes: 0 success, 2 invalid parameters, 3 solver failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .aux_fields import CharacteristicDegeneracy
from .core import (CAVITATING, SMOOTH, CavitatingBoundaryData, PhysicalParams,
                   SmoothBoundaryData, default_config, validate_config, validate_params)
from .output import atomic_write, emit_plots_svg, emit_profile_csv, emit_summary_json, summary_json_text
from .picard import AnchorMismatch, NonConvergence
from .pipeline import run

log = logging.getLogger("nsexpander")

EXIT_OK, EXIT_INVALID, EXIT_SOLVER, EXIT_IO = 0, 2, 3, 4

# option name -> (target, field, type)
NUMERIC = {
    "d": ("params", "d", int),
    "mu": ("params", "mu", float),
    "lambda": ("params", "lam", float),
    "cv": ("params", "C_V", float),
    "kappa": ("params", "kappa", float),
    "r-gas": ("params", "R", float),
    "p0": ("boundary", "P0", float),
    "p-delta": ("boundary", "P_delta", float),
    "delta": ("boundary", "delta", float),
    "theta0": ("boundary", "Theta0", float),
    "alpha": ("boundary", "alpha", float),
    "rmax": ("config", "r_max", float),
    "rmin": ("config", "r_min", float),
    "cells": ("config", "n_cells", int),
    "grading": ("config", "grading", float),
    "tol": ("config", "picard_tol", float),
    "max-iter": ("config", "max_iter", int),
    "damping": ("config", "damping", float),
}
TEXT = ("case", "out", "summary", "plots")
SMOOTH_ONLY = {"p0"}
CAV_ONLY = {"p-delta", "delta", "alpha", "rmin"}

SWEEP_COLUMNS = ("status", "iterations", "P_inf", "U_inf", "Theta_inf",
                 "residual_sup", "bootstrap_max_Z")


class UsageError(ValueError):
    pass


def _dest(name):
    return name.replace("-", "_")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value file; flags override it")
    common.add_argument("--case", choices=(SMOOTH, CAVITATING))
    for name in NUMERIC:
        common.add_argument(f"--{name}", dest=_dest(name), metavar="X")
    common.add_argument("--out", help="profile CSV (solve) or result table CSV (sweep)")
    common.add_argument("--summary", help="JSON summary path")
    common.add_argument("--plots", help="directory for SVG plots (solve only)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="nsexpander", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="solve one configuration")
    sw = sub.add_parser("sweep", parents=[common], help="solve a list or grid of configurations")
    sw.add_argument("--sweep", action="append", default=[], metavar="KEY=V1,V2,...",
                    help="values for one key; repeat for a Cartesian product")
    return parser


def read_config_file(path) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("_", "-")
            if key not in NUMERIC and key not in TEXT:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def collect_options(args) -> dict:
    """Merge the config file and the flags into ``{key: raw string}``."""
    opts = read_config_file(args.config) if args.config else {}
    for key in (*NUMERIC, *TEXT):
        value = getattr(args, _dest(key), None)
        if value is not None:
            opts[key] = value
    return opts


def _parse(key, raw):
    typ = NUMERIC[key][2]
    try:
        return typ(float(raw)) if typ is int and float(raw).is_integer() else typ(raw)
    except ValueError:
        raise UsageError(f"--{key}: cannot parse {raw!r}") from None


def expand_points(opts: dict, sweep_specs: list[str], allow_lists: bool) -> tuple[list, list[dict]]:
    """Split options into sweep axes and return (axes, list of scalar points)."""
    axes = {}
    for item in sweep_specs:
        if "=" not in item:
            raise UsageError(f"--sweep expects key=v1,v2,... (got {item!r})")
        key, values = item.split("=", 1)
        key = key.strip().replace("_", "-")
        if key not in NUMERIC:
            raise UsageError(f"--sweep: unknown key {key!r}")
        axes[key] = values
    for key in NUMERIC:
        if key in opts and "," in opts[key] and key not in axes:
            axes[key] = opts[key]
    if axes and not allow_lists:
        raise UsageError("comma-separated values are only allowed with 'sweep'")
    base = {k: _parse(k, v) for k, v in opts.items() if k in NUMERIC and k not in axes}
    lists = {k: [_parse(k, v) for v in vals.split(",") if v.strip()] for k, vals in axes.items()}
    points = []
    for combo in itertools.product(*lists.values()):
        points.append({**base, **dict(zip(lists, combo))})
    return list(lists), points


def build_inputs(case: str, values: dict):
    """Turn scalar option values into (params, boundary, config)."""
    wrong = (CAV_ONLY if case == SMOOTH else SMOOTH_ONLY) & values.keys()
    if wrong:
        raise UsageError(f"option(s) {', '.join(sorted(wrong))} do not apply to the {case} case")
    groups = {"params": {}, "boundary": {}, "config": {}}
    for key, value in values.items():
        target, name, _ = NUMERIC[key]
        groups[target][name] = value
    params = PhysicalParams(**groups["params"])
    b = (SmoothBoundaryData if case == SMOOTH else CavitatingBoundaryData)(**groups["boundary"])
    config = default_config(case, **groups["config"])
    return params, b, config


def check_inputs(params, b, config) -> list[str]:
    rep_p = validate_params(params, b)
    rep_c = validate_config(config, b)
    return rep_p.failures + rep_c.failures


def solve_point(case: str, values: dict) -> dict:
    """Validate and solve one point; return a JSON-ready record."""
    params, b, config = build_inputs(case, values)
    failures = check_inputs(params, b, config)
    if failures:
        return {"status": "invalid", "failures": failures}
    try:
        result = run(params, b, config)
    except (NonConvergence, CharacteristicDegeneracy, AnchorMismatch, FloatingPointError) as exc:
        return {"status": "solver_failure", "error": str(exc)}
    return {"status": "ok", "summary": result.summary()}


def _workers(n: int) -> int:
    env = os.environ.get("NSEXPANDER_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            cap = max(1, int(env))
        except ValueError:
            raise UsageError(f"NSEXPANDER_THREADS must be an integer (got {env!r})") from None
    return max(1, min(cap, n))


def sweep_table(keys: list, points: list[dict], records: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([*keys, *SWEEP_COLUMNS])
    for point, rec in zip(points, records):
        row = [repr(point[k]) for k in keys]
        s = rec.get("summary")
        if s is None:
            row += [rec["status"]] + [""] * (len(SWEEP_COLUMNS) - 1)
        else:
            a = s["asymptotics"]
            row += [rec["status"], s["iterations"], repr(a["P_inf"]), repr(a["U_inf"]),
                    repr(a["Theta_inf"]), repr(max(s["residual_norms"]["sup"].values())),
                    repr(s["bootstrap_max_Z"])]
        w.writerow(row)
    return buf.getvalue()


def cmd_solve(case, opts) -> int:
    _, points = expand_points(opts, [], allow_lists=False)
    params, b, config = build_inputs(case, points[0])
    failures = check_inputs(params, b, config)
    if failures:
        for f in failures:
            print(f"invalid parameters: {f}", file=sys.stderr)
        return EXIT_INVALID
    try:
        result = run(params, b, config)
    except (NonConvergence, CharacteristicDegeneracy, AnchorMismatch, FloatingPointError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    summary = result.summary()
    log.info("converged in %d iterations", result.trace.iterations)
    if opts.get("out"):
        emit_profile_csv(result.profile, opts["out"])
    if opts.get("summary"):
        emit_summary_json(summary, opts["summary"])
    if opts.get("plots"):
        emit_plots_svg(result.profile, opts["plots"], result.asymptotics)
    if not opts.get("out") and not opts.get("summary"):
        sys.stdout.write(summary_json_text(summary))
    return EXIT_OK


def cmd_sweep(case, opts, sweep_specs) -> int:
    keys, points = expand_points(opts, sweep_specs, allow_lists=True)
    if not keys:
        raise UsageError("sweep needs at least one key with several values")
    for point in points:
        build_inputs(case, point)  # usage errors surface before any solve
    n = _workers(len(points))
    if n == 1:
        records = [solve_point(case, p) for p in points]
    else:
        with ProcessPoolExecutor(max_workers=n) as pool:
            records = list(pool.map(solve_point, itertools.repeat(case), points))
    for point, rec in zip(points, records):
        if rec["status"] != "ok":
            print(f"{point}: {rec['status']}", file=sys.stderr)
    table = sweep_table(keys, points, records)
    if opts.get("out"):
        atomic_write(opts["out"], table)
    else:
        sys.stdout.write(table)
    if opts.get("summary"):
        doc = {"schema": 1, "case": case, "sweep_keys": keys,
               "runs": [{"point": p, **rec} for p, rec in zip(points, records)]}
        atomic_write(opts["summary"], summary_json_text(doc))
    statuses = {rec["status"] for rec in records}
    if statuses == {"ok"}:
        return EXIT_OK
    return EXIT_SOLVER if "solver_failure" in statuses else EXIT_INVALID


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        opts = collect_options(args)
        case = opts.get("case")
        if case not in (SMOOTH, CAVITATING):
            raise UsageError("--case smooth|cavitating is required")
        if args.command == "solve":
            return cmd_solve(case, opts)
        return cmd_sweep(case, opts, args.sweep)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TypeError as exc:
        # dataclass construction with a wrong key or type
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
