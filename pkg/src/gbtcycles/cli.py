"""Command-line front end: analysis reports, curvature grids, Hilbert tables.

Exit codes: 0 success, 1 usage, 2 parse or file errors, 3 numeric stage
failures. Reports are deterministic: rerunning the same invocation on the
same inputs yields byte-identical output.
"""

import argparse
import csv
import json
import math
import os
import re
import sys
from fractions import Fraction

from . import __version__
from .algebra import PoleError
from .equilibria import euler_characteristic, find_equilibria
from .oracle import compare, find_limit_cycles
from .riemann import curvature_pipeline, gbt_metric
from .sysdsl import SystemFormatError, parse_system_path
from .verdict import gbt_limit_cycle_verdict, growth_table, singular_locus

SCHEMA_ID = "gbtcycles/analysis-report/v1"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_NUMERIC = 3

# canonical stage order; values are the stages each one needs first
_STAGE_DEPS = {
    "metric": (),
    "curvature": ("metric",),
    "equilibria": (),
    "locus": ("curvature",),
    "verdict": ("equilibria", "locus"),
    "oracle": (),
    "compare": ("verdict", "oracle"),
}
_STAGE_ORDER = ("metric", "curvature", "equilibria", "locus", "verdict",
                "oracle", "compare")
# stages that evaluate the field numerically and need every parameter bound
_NUMERIC_STAGES = frozenset(("equilibria", "locus", "verdict", "oracle",
                             "compare"))


class UsageError(Exception):
    """Bad flag value; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here reserves 2 for
    parse failures, so remap to 1."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # accept --box -5:5,-5:5 style values that begin with a dash
        self._negative_number_matcher = re.compile(r"^-\d")

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


# -- flag value parsing -----------------------------------------------------------


def _parse_param_flags(items):
    bindings = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise UsageError(f"--param expects NAME=VALUE, got {item!r}")
        try:
            bindings[name] = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--param {name}: not a rational value: {value!r}")
    return bindings


def _parse_box(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"--box expects a:b,c:d, got {text!r}")
    box = []
    for part in parts:
        lo, sep, hi = part.partition(":")
        if not sep:
            raise UsageError(f"--box expects a:b,c:d, got {text!r}")
        try:
            lo, hi = Fraction(lo), Fraction(hi)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--box: not a rational interval: {part!r}")
        if not lo < hi:
            raise UsageError(f"--box: empty interval {part!r}")
        box.append((lo, hi))
    return tuple(box)


def _parse_stages(text):
    if text is None:
        return set(_STAGE_ORDER)
    requested = set()
    for name in text.split(","):
        name = name.strip()
        if name not in _STAGE_DEPS:
            known = ", ".join(_STAGE_ORDER)
            raise UsageError(f"unknown stage {name!r}; known stages: {known}")
        requested.add(name)
    # closure over dependencies so every requested stage can actually run
    changed = True
    while changed:
        changed = False
        for name in tuple(requested):
            for dep in _STAGE_DEPS[name]:
                if dep not in requested:
                    requested.add(dep)
                    changed = True
    return requested


# -- JSON plumbing ----------------------------------------------------------------


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "item"):
        return _jsonable(value.item())
    return str(value)


def _emit_report(report, path):
    text = json.dumps(_jsonable(report), sort_keys=True, indent=2,
                      allow_nan=False) + "\n"
    if path:
        with open(path, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# -- report sections --------------------------------------------------------------


def _system_section(vf, bindings, original_params):
    params = {}
    for name in original_params:
        value = bindings.get(name)
        params[name] = None if value is None else str(value)
    return {
        "name": vf.name,
        "states": list(vf.states),
        "params": params,
        "degree": vf.degree(),
        "components": [c.text() for c in vf.components],
    }


def _metric_section(metric):
    return {
        "coords": list(metric.coords),
        "components": [[e.text() for e in row] for row in metric.entries],
        "diagonal": metric.is_diagonal(),
    }


def _curvature_section(curv):
    expr = curv.expr
    return {
        "text": curv.text(),
        "convention": curv.convention,
        "numerator_degree": expr.numerator.total_degree(),
        "denominator_degree": expr.denominator.total_degree(),
        "numerator_terms": len(expr.numerator.terms),
        "denominator_terms": len(expr.denominator.terms),
    }


def _curvature_at(curv, eq, states):
    """Exact R at an exact equilibrium, float otherwise; None at poles."""
    try:
        if eq.is_exact():
            point = dict(zip(states, eq.exact_point))
            return float(curv.evaluate(point))
        point = dict(zip(states, eq.point))
        return curv.evaluate_float(point)
    except (PoleError, OverflowError, ZeroDivisionError):
        return None


def _topology_section(topo, curv, states):
    entries = []
    notes = list(topo.notes)
    for eq in topo.equilibria:
        entry = {
            "point": list(eq.point),
            "exact_point": [str(x) for x in eq.exact_point]
            if eq.is_exact() else None,
            "classification": eq.classification,
            "index": eq.index,
            "certified": eq.certified,
            "curvature": None,
            "note": eq.note or None,
        }
        if eq.trace is not None:
            entry["trace"] = str(eq.trace)
        if eq.det is not None:
            entry["det"] = str(eq.det)
        if curv is not None:
            value = _curvature_at(curv, eq, states)
            entry["curvature"] = value
            if value is not None and value < 0 and topo.gbt_sign == "positive":
                x, y = eq.point
                notes.append(
                    f"R({x:g}, {y:g}) = {value:g} is negative while the index "
                    f"sum is positive; the positivity rule counts locus "
                    f"components and does not constrain pointwise values of R"
                )
        entries.append(entry)
    return {
        "equilibria": entries,
        "chi": topo.chi,
        "gbt_sign": topo.gbt_sign,
        "notes": notes,
    }


def _locus_section(locus):
    examples = [list(p) for p in locus.indeterminate[:5]]
    return {
        "points": [list(p) for p in locus.points],
        "component_count": len(locus.components),
        "indeterminate": {
            "count": len(locus.indeterminate),
            "examples": examples,
        },
        "symmetric": bool(locus.symmetric),
        "grid": locus.grid,
        "notes": list(locus.notes),
    }


def _verdict_section(verd, topo):
    return {
        "sign": verd.sign,
        "chi": topo.chi,
        "locus": [list(p) for p in verd.locus.points],
        "symmetric": bool(verd.locus.symmetric),
        "count": verd.count,
        "periodic_only": verd.periodic_only,
        "notes": list(verd.notes),
    }


def _oracle_section(result):
    cycles = []
    for c in result.cycles:
        cycles.append({
            "radius": c.radius,
            "period": c.period,
            "stability": c.stability,
            "return_derivative": c.return_derivative,
            "point": list(c.point),
        })
    radial = None
    if result.radial is not None:
        radial = {
            "g": result.radial.g.text(),
            "radii": list(result.radial.radii),
            "stabilities": list(result.radial.stabilities),
        }
    return {
        "cycles": cycles,
        "center_detected": bool(result.center_detected),
        "radial": radial,
        "theta": result.theta,
        "tol": result.tol,
        "notes": list(result.notes),
    }


# -- grid CSV ---------------------------------------------------------------------


def _grid_values(lo, hi, n):
    if n < 2:
        return [float(lo + hi) / 2.0]
    lo, hi = float(lo), float(hi)
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def _write_grid_csv(path, states, curv, box, n):
    """Sample R on an n-by-n grid; poles become empty cells."""
    xs = _grid_values(box[0][0], box[0][1], n)
    ys = _grid_values(box[1][0], box[1][1], n)
    poles = 0
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(list(states) + ["R"])
        for x in xs:
            for y in ys:
                try:
                    value = curv.evaluate_float({states[0]: x, states[1]: y})
                    writer.writerow([x, y, value])
                except (PoleError, OverflowError, ZeroDivisionError):
                    poles += 1
                    writer.writerow([x, y, ""])
    total = len(xs) * len(ys)
    if 2 * poles > total:
        sys.stderr.write(
            f"warning: {poles} of {total} grid cells are poles of R\n")
    return poles, total


# -- analyze ----------------------------------------------------------------------


def _load_system(path, bindings):
    """Parse and bind; (vf, original_params) or raises for exit code 2/1."""
    if not os.path.isfile(path):
        raise FileNotFoundError(f"file not found: {path}")
    vf = parse_system_path(path)
    original = vf.params
    unknown = sorted(set(bindings) - set(original))
    if unknown:
        raise UsageError(f"unknown parameter(s): {', '.join(unknown)}")
    if bindings:
        vf = vf.specialize(bindings)
    return vf, original


def _tolerances(args):
    return {
        "equilibria": args.tol_equilibria,
        "locus": args.tol_locus,
        "ode": args.tol_ode,
        "center": args.tol_center,
        "cluster": args.cluster_tol,
        "symmetry": args.symmetry_tol,
    }


def cmd_analyze(args):
    try:
        bindings = _parse_param_flags(args.param)
        box = _parse_box(args.box)
        stages = _parse_stages(args.stages)
        if args.csv:
            stages |= _parse_stages("curvature")
        vf, original_params = _load_system(args.system, bindings)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (FileNotFoundError, OSError, SystemFormatError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        report = {"schema": SCHEMA_ID,
                  "errors": [{"stage": "parse",
                              "type": type(exc).__name__,
                              "message": str(exc)}]}
        _emit_report(report, args.report)
        return EXIT_PARSE

    if vf.params and stages & _NUMERIC_STAGES:
        names = ", ".join(vf.params)
        sys.stderr.write(
            f"error: unbound parameter(s) {names}; numeric stages need "
            f"--param NAME=VALUE for each\n")
        return EXIT_USAGE

    errors = []
    failed = set()
    results = {}

    def run(stage, thunk):
        if stage not in stages:
            return
        missing = [d for d in _STAGE_DEPS[stage] if d in failed]
        if missing:
            failed.add(stage)
            errors.append({"stage": stage, "type": "SkippedStage",
                           "message": f"dependency failed: {missing[0]}"})
            return
        try:
            results[stage] = thunk()
        except Exception as exc:
            failed.add(stage)
            errors.append({"stage": stage, "type": type(exc).__name__,
                           "message": str(exc)})

    float_box = tuple((float(lo), float(hi)) for lo, hi in box)
    run("metric", lambda: gbt_metric(vf))
    run("curvature", lambda: curvature_pipeline(vf, convention=args.convention))
    run("equilibria", lambda: euler_characteristic(
        find_equilibria(vf, box, tol=args.tol_equilibria)))
    run("locus", lambda: singular_locus(
        results["curvature"], box=float_box, tol=args.tol_locus,
        grid=args.grid, cluster_tol=args.cluster_tol,
        symmetry_tol=args.symmetry_tol))
    run("verdict", lambda: gbt_limit_cycle_verdict(
        results["equilibria"], results["locus"]))
    run("oracle", lambda: find_limit_cycles(
        vf, r_max=args.rmax, theta=args.theta, tol=args.tol_ode,
        n_seeds=args.seeds, center_tol=args.tol_center))
    run("compare", lambda: compare(results["verdict"], results["oracle"]))

    report = {
        "schema": SCHEMA_ID,
        "system": _system_section(vf, bindings, original_params),
        "provenance": {
            "tool": "gbtcycles",
            "version": __version__,
            "convention": args.convention,
            "box": [[str(lo), str(hi)] for lo, hi in box],
            "grid": args.grid,
            "stages": [s for s in _STAGE_ORDER if s in stages],
            "tolerances": _tolerances(args),
            "oracle": {"rmax": args.rmax, "theta": args.theta,
                       "seeds": args.seeds},
        },
        "errors": errors,
    }
    if "metric" in results:
        report["metric"] = _metric_section(results["metric"])
    if "curvature" in results:
        report["curvature"] = _curvature_section(results["curvature"])
    if "equilibria" in results:
        report["topology"] = _topology_section(
            results["equilibria"], results.get("curvature"), vf.states)
    if "locus" in results:
        report["locus"] = _locus_section(results["locus"])
    if "verdict" in results:
        report["verdict"] = _verdict_section(
            results["verdict"], results["equilibria"])
    if "oracle" in results:
        report["oracle"] = _oracle_section(results["oracle"])
    if "compare" in results:
        report["agreement"] = {"status": results["compare"].status,
                               "notes": list(results["compare"].notes)}

    _emit_report(report, args.report)

    if args.csv and "curvature" in results:
        _write_grid_csv(args.csv, vf.states, results["curvature"],
                        float_box, args.grid)

    return EXIT_NUMERIC if errors else EXIT_OK


# -- curvature --------------------------------------------------------------------


def cmd_curvature(args):
    try:
        bindings = _parse_param_flags(args.param)
        box = _parse_box(args.box)
        vf, _ = _load_system(args.system, bindings)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (FileNotFoundError, OSError, SystemFormatError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE

    try:
        curv = curvature_pipeline(vf, convention=args.convention)
    except Exception as exc:
        sys.stderr.write(f"error: curvature stage failed: {exc}\n")
        return EXIT_NUMERIC

    sys.stdout.write(curv.text() + "\n")

    if args.csv:
        if vf.params:
            sys.stderr.write(
                "error: the grid needs every parameter bound via --param\n")
            return EXIT_USAGE
        if len(vf.states) != 2:
            sys.stderr.write("error: the CSV grid is for planar systems\n")
            return EXIT_NUMERIC
        float_box = tuple((float(lo), float(hi)) for lo, hi in box)
        _write_grid_csv(args.csv, vf.states, curv, float_box, args.grid)
    return EXIT_OK


# -- hilbert-table ----------------------------------------------------------------


def cmd_hilbert(args):
    try:
        table = growth_table(args.nmax, k_max=args.k if args.bounds else 0)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE

    lines = [f"{'n':>6} {'H(n)':>16} {'n^2':>12} {'n^2 ln n':>16} {'H/n^2':>10}"]
    for n, h, n2, n2ln, ratio in table.rows:
        lines.append(f"{n:>6} {h:>16} {n2:>12} {n2ln:>16.4f} {ratio:>10.6f}")
    if table.cl_rows:
        lines.append("")
        lines.append(f"{'k':>6} {'degree n=2k+1':>14} {'lower bound':>16}")
        for k, bound in table.cl_rows:
            lines.append(f"{k:>6} {2 * k + 1:>14} {str(bound):>16}")
    sys.stdout.write("\n".join(lines) + "\n")

    if args.csv:
        with open(args.csv, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["n", "hilbert", "n_squared", "n_squared_log_n",
                             "ratio"])
            for n, h, n2, n2ln, ratio in table.rows:
                writer.writerow([n, h, n2, n2ln, ratio])
    return EXIT_OK


# -- entry point ------------------------------------------------------------------


def _add_system_flags(sub):
    sub.add_argument("system", help="system definition file")
    sub.add_argument("--param", action="append", metavar="NAME=VALUE",
                     help="bind a parameter to an exact rational value")
    sub.add_argument("--box", default="-5:5,-5:5", metavar="a:b,c:d",
                     help="search box (default -5:5,-5:5)")
    sub.add_argument("--grid", type=int, default=128,
                     help="grid resolution (default 128)")
    sub.add_argument("--convention", choices=("gbt", "standard"),
                     default="gbt", help="curvature sign convention")
    sub.add_argument("--csv", metavar="FILE",
                     help="write an R sample grid as CSV")


def build_parser():
    parser = _Parser(prog="gbtcycles",
                     description="curvature-based limit-cycle analysis of "
                                 "planar polynomial systems")
    subs = parser.add_subparsers(dest="command", required=True)

    ana = subs.add_parser("analyze", help="run the full pipeline on a system")
    _add_system_flags(ana)
    ana.add_argument("--stages", metavar="LIST",
                     help="comma-separated subset of: " + ",".join(_STAGE_ORDER))
    ana.add_argument("--report", metavar="FILE",
                     help="write the JSON report here instead of stdout")
    ana.add_argument("--tol-equilibria", type=float, default=1e-10)
    ana.add_argument("--tol-locus", type=float, default=1e-8)
    ana.add_argument("--tol-ode", type=float, default=1e-9)
    ana.add_argument("--tol-center", type=float, default=1e-6)
    ana.add_argument("--cluster-tol", type=float, default=1e-4)
    ana.add_argument("--symmetry-tol", type=float, default=1e-3)
    ana.add_argument("--rmax", type=float, default=2.8,
                     help="largest seed radius for the oracle scan")
    ana.add_argument("--theta", type=float, default=0.0,
                     help="section ray angle for the return map")
    ana.add_argument("--seeds", type=int, default=40,
                     help="number of seed radii for the oracle scan")
    ana.set_defaults(func=cmd_analyze)

    cur = subs.add_parser("curvature",
                          help="print canonical R, optionally a CSV grid")
    _add_system_flags(cur)
    cur.set_defaults(func=cmd_curvature)

    hil = subs.add_parser("hilbert-table",
                          help="print the H(n) growth table")
    hil.add_argument("--nmax", type=int, required=True,
                     help="largest degree n (must be >= 2)")
    hil.add_argument("--bounds", action="store_true",
                     help="append exact lower-bound rows")
    hil.add_argument("--k", type=int, default=3,
                     help="largest k for the lower-bound rows (default 3)")
    hil.add_argument("--csv", metavar="FILE", help="also write the table as CSV")
    hil.set_defaults(func=cmd_hilbert)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return EXIT_OK
        if isinstance(code, int):
            return code
        sys.stderr.write(f"{parser.prog}: error: {code}\n")
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
