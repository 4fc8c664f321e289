"""Command-line surface: evaluate distances, run property suites, demos.

Subcommands:

  eval   distance of a bundle in a direction for a technology JSON file
  check  seeded property suites (D1..D6 and the structural F/T checks)
  demo   built-in walkthroughs and CSV figure data

Exit codes are a stable scripting contract: 0 success, 1 a property check
failed, 2 input or validation problems, 3 dimension mismatches.  Reports
are deterministic for fixed inputs and seed (timing fields excepted); the
environment variable DDFKIT_SEED supplies the default seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .core import Bundle, DimensionError, Direction, is_neg_inf
from .ddf import D_PROPERTY_NAMES, check_property, solve_ddf, unsymmetric_t
from .oracle import GridSpec, grid_ddf_report, jpf_existence_check
from .quad_translation import (
    HOMOGENEITY_SCALES,
    homogeneity_deviation,
    restrict_parameters,
    sample_free_params,
    translation_residual,
)
from .technology import (
    F_PROPERTY_NAMES,
    REFERENCE_QUADRATIC,
    PolyhedralA,
    PolyhedralB,
    QuadraticSeparable,
    QuadraticSeparableParams,
    Staircase,
    check_f_property,
    frontier_member,
    load_technology,
)

EXIT_OK = 0
EXIT_PROPERTY_FAIL = 1
EXIT_INVALID = 2
EXIT_DIMENSION = 3

DEMO_NAMES = (
    "quadratic-homogeneity",
    "example-2-1-6",
    "example-2-1-9",
    "staircase",
    "figure-data",
)


def _default_seed() -> int:
    return int(os.environ.get("DDFKIT_SEED", "0"))


def _parse_vector(text: str, flag: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"could not parse {flag} {text!r}: {exc}") from None


def _sanitize(obj):
    """JSON has no infinity literal; render -inf as the string '-inf'."""
    if isinstance(obj, float):
        if is_neg_inf(obj):
            return "-inf"
        if math.isinf(obj):
            return "+inf"
        return obj
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _sanitize(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        return _sanitize(float(obj))
    return obj


def _format_value(value: float) -> str:
    if is_neg_inf(value):
        return "-inf"
    return f"{value:.12g}"


def _emit(report: dict, lines: list[str], as_json: bool):
    if as_json:
        print(json.dumps(_sanitize(report), indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _load_tech_checked(path):
    tech = load_technology(path)
    if isinstance(tech, QuadraticSeparable) and tech.validation_report:
        raise ValueError(
            "invalid technology parameters: " + "; ".join(tech.validation_report)
        )
    return tech


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

def _cmd_eval(args) -> int:
    tech = _load_tech_checked(args.tech)
    bundle = Bundle(_parse_vector(args.y, "--y"), _parse_vector(args.x, "--x"))
    direction = Direction(_parse_vector(args.gy, "--gy"), _parse_vector(args.gx, "--gx"))
    start = time.perf_counter()
    results: dict = {"step": None, "iterations": None, "truncated": None}
    if args.method == "grid":
        rep = grid_ddf_report(tech, bundle, direction, args.step)
        results.update(
            value=rep.value,
            method="grid",
            step=args.step,
            truncated=bool(rep.truncated_below or rep.truncated_above),
        )
    else:
        sol = solve_ddf(tech, bundle, direction, method=args.method)
        results.update(value=sol.value, method=sol.method, case=sol.case)
        if sol.method == "bisect":
            results["iterations"] = sol.iterations
            if sol.bracket_exhausted:
                results["bracket_exhausted"] = True
    elapsed = time.perf_counter() - start
    report = {
        "command": "eval",
        "inputs": {
            "tech": str(args.tech),
            "y": _parse_vector(args.y, "--y"),
            "x": _parse_vector(args.x, "--x"),
            "gy": _parse_vector(args.gy, "--gy"),
            "gx": _parse_vector(args.gx, "--gx"),
            "method": args.method,
            "step": args.step,
        },
        "seed": None,
        "results": results,
        "timing_s": elapsed,
    }
    lines = [f"value: {_format_value(results['value'])}", f"method: {results['method']}"]
    if results.get("case"):
        lines.append(f"case: {results['case']}")
    if results.get("iterations") is not None:
        lines.append(f"iterations: {results['iterations']}")
    if results.get("truncated"):
        lines.append("truncated: true")
    _emit(report, lines, args.json)
    return EXIT_OK


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

def _cmd_check(args) -> int:
    tech = _load_tech_checked(args.tech)
    if not isinstance(tech, QuadraticSeparable):
        raise ValueError(
            "property suites run on quadratic_separable technologies; "
            f"got kind {tech.kind!r}"
        )
    props = [tok.strip().upper() for tok in args.props.split(",") if tok.strip()]
    known = set(D_PROPERTY_NAMES) | set(F_PROPERTY_NAMES)
    unknown = [p for p in props if p not in known]
    if unknown:
        raise ValueError(f"unknown properties {unknown}; choose from {sorted(known)}")
    start = time.perf_counter()
    reports = []
    for prop in props:
        if prop in D_PROPERTY_NAMES:
            reports.append(check_property(tech, prop, samples=args.samples, seed=args.seed))
        else:
            reports.append(check_f_property(tech, prop, samples=args.samples, seed=args.seed))
    elapsed = time.perf_counter() - start
    all_passed = all(r.passed for r in reports)
    report = {
        "command": "check",
        "inputs": {
            "tech": str(args.tech),
            "props": props,
            "samples": args.samples,
        },
        "seed": args.seed,
        "results": {
            "passed": all_passed,
            "properties": [
                {
                    "prop": r.prop,
                    "passed": r.passed,
                    "samples": r.samples,
                    "worst_violation": r.worst_violation,
                    "tolerance": r.tolerance,
                    "witness": r.witness,
                }
                for r in reports
            ],
        },
        "timing_s": elapsed,
    }
    lines = [r.summary() for r in reports]
    lines.append(f"overall: {'PASS' if all_passed else 'FAIL'}")
    _emit(report, lines, args.json)
    return EXIT_OK if all_passed else EXIT_PROPERTY_FAIL


# ---------------------------------------------------------------------------
# demo
# ---------------------------------------------------------------------------

def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{v:.12g}" for v in row])


def _demo_quadratic_homogeneity(seed: int, out_dir: str):
    rng = np.random.default_rng(seed)
    free = sample_free_params(rng, 2, 2)
    bundle = Bundle([1.0, 1.0], [1.0, 1.0])
    direction = Direction([1.0, 1.0], [1.0, 1.0])
    devs = {
        psi: homogeneity_deviation(free, bundle, direction, psi)
        for psi in HOMOGENEITY_SCALES
    }
    best_psi = max(devs, key=devs.get)
    restricted = restrict_parameters(free, direction)
    residual = max(
        translation_residual(restricted, bundle, alpha) for alpha in (-0.5, 0.3, 0.9)
    )
    results = {
        "free_params": {
            "alpha0": free.alpha0,
            "alpha": free.alpha.tolist(),
            "beta": free.beta.tolist(),
            "alpha_mat": free.alpha_mat.tolist(),
            "beta_mat": free.beta_mat.tolist(),
            "gamma": free.gamma.tolist(),
        },
        "bundle": [bundle.y.tolist(), bundle.x.tolist()],
        "direction": [direction.g_y.tolist(), direction.g_x.tolist()],
        "deviations": {str(psi): dev for psi, dev in devs.items()},
        "witness_psi": best_psi,
        "max_deviation": devs[best_psi],
        "deviation_exceeds_1e-3": devs[best_psi] > 1e-3,
        "translation_residual": residual,
        "translation_residual_below_1e-10": residual <= 1e-10,
    }
    lines = [
        "restricted quadratic: translation holds, direction homogeneity fails",
        *(f"deviation at psi={psi}: {dev:.6g}" for psi, dev in devs.items()),
        f"max deviation {devs[best_psi]:.6g} at psi={best_psi} > 1e-3: "
        f"{str(devs[best_psi] > 1e-3).lower()}",
        f"translation residual {residual:.3e} <= 1e-10: {str(residual <= 1e-10).lower()}",
    ]
    return results, lines, []


def _demo_example_2_1_6(seed: int, out_dir: str):
    tech = PolyhedralA()
    y_w = [0.5, 1.0]
    in_weff = frontier_member(tech, "output", [1.0], y_w, "weff")
    in_eff = frontier_member(tech, "output", [1.0], y_w, "eff")
    x_in_eff = frontier_member(tech, "input", y_w, [1.0], "eff")
    grid = GridSpec(0.25, ((0.0, 3.0), (0.0, 3.0), (0.0, 3.0)))
    isoq_rep = jpf_existence_check(tech, grid, "isoquant")
    eff_rep = jpf_existence_check(tech, grid, "efficient")
    t_val = unsymmetric_t(tech, 1, Bundle([0.0, 1.0], [1.0]))
    results = {
        "weff_member": in_weff,
        "eff_member": in_eff,
        "input_eff_member": x_in_eff,
        "isoquant_jpf_holds_on_grid": isoq_rep.holds,
        "efficient_jpf_holds_on_grid": eff_rep.holds,
        "efficient_jpf_counterexample": eff_rep.counterexample,
        "witness_pair_violates": ((0.5, 1.0), (1.0,)) in eff_rep.violations,
        "max_output1_at_witness": t_val,
    }
    lines = [
        "two outputs, one input: y2 <= x and y1 + y2 <= 2x",
        f"(0.5,1) ∈ WEff P(1): {str(in_weff).lower()}",
        f"(0.5,1) ∉ Eff P(1): {str(not in_eff).lower()}",
        f"1 ∈ Eff L(0.5,1): {str(x_in_eff).lower()}",
        f"isoquant JPF on grid: {'holds' if isoq_rep.holds else 'does not hold'}",
        f"efficient JPF on grid: {'holds' if eff_rep.holds else 'does not hold'}",
        f"first counterexample (y, x): {eff_rep.counterexample}",
        f"max output 1 given y2=1, x=1: {t_val:g} > 0.5, so the weakly "
        "efficient point (0.5,1) is not traced by maximizing output 1",
    ]
    return results, lines, []


def _demo_example_2_1_9(seed: int, out_dir: str):
    tech = PolyhedralB()
    x0 = [1.0, 1.0]
    y_w = [0.5, 1.0]
    in_weff = frontier_member(tech, "output", x0, y_w, "weff")
    in_eff = frontier_member(tech, "output", x0, y_w, "eff")
    t_val = unsymmetric_t(tech, 2, Bundle([0.5, 0.0], x0))
    results = {
        "weff_member": in_weff,
        "eff_member": in_eff,
        "weff_differs_from_eff": in_weff and not in_eff,
        "max_output2_at_witness": t_val,
        "t_equals_y2": abs(t_val - 1.0) <= 1e-12,
    }
    lines = [
        "two outputs, two inputs: y2 <= x2 and y1 + y2 <= x1 + x2",
        f"(0.5,1) ∈ WEff P(1,1): {str(in_weff).lower()}",
        f"(0.5,1) ∈ Eff P(1,1): {str(in_eff).lower()}",
        f"max output 2 given y1=0.5, x=(1,1): {t_val:g} = y2, so maximizing "
        "output 2 reproduces a point outside the efficient subset",
    ]
    return results, lines, []


def _demo_staircase(seed: int, out_dir: str):
    tech = Staircase()
    isoq_out = frontier_member(tech, "output", [2.0], [1.0], "isoq")
    isoq_in = frontier_member(tech, "input", [1.0], [2.0], "isoq")
    grid = GridSpec(0.25, ((0.0, 3.0), (0.0, 3.0)))
    rep = jpf_existence_check(tech, grid, "isoquant")
    results = {
        "output_isoq_member": isoq_out,
        "input_isoq_member": isoq_in,
        "isoquant_jpf_holds_on_grid": rep.holds,
        "counterexample": rep.counterexample,
        "witness_pair_violates": ((1.0,), (2.0,)) in rep.violations,
    }
    lines = [
        "one output, one input: capacity h(x) = x below one, then flat",
        f"1 ∈ Isoq P(2): {str(isoq_out).lower()}",
        f"2 ∈ Isoq L(1): {str(isoq_in).lower()}",
        f"isoquant JPF on grid: {'holds' if rep.holds else 'does not hold'}",
        f"first counterexample (y, x): {rep.counterexample}",
    ]
    return results, lines, []


def _demo_figure_data(seed: int, out_dir: str):
    files = []

    def trace(points):
        return [(float(p[0]), float(p[1])) for p in points]

    # Boundary of the two-output one-input technology at x = 1.
    ts = np.linspace(0.0, 1.0, 51)
    fig1 = [(t, 1.0) for t in ts] + [(1.0 + t, 1.0 - t) for t in ts]
    path1 = os.path.join(out_dir, "figure-data_fig1_boundary.csv")
    _write_csv(path1, ("y1", "y2"), fig1)
    files.append(path1)

    # Boundary of the two-output two-input technology at x = (1, 1).
    fig2 = [(t, 1.0) for t in ts] + [(1.0 + t, 1.0 - t) for t in ts]
    path2 = os.path.join(out_dir, "figure-data_fig2_boundary.csv")
    _write_csv(path2, ("y1", "y2"), fig2)
    files.append(path2)

    # Input-space projections for two pure input directions: one lands on
    # the zero level set of F, the other on the input axis.
    proj = QuadraticSeparable(
        QuadraticSeparableParams(b=(1.0,), a=(1.0, 1.0), B=((1.0,),))
    )
    bundle = Bundle([1.0], [2.0, 1.0])
    frontier_pts = [(x1, 1.5 - x1) for x1 in np.linspace(0.0, 1.5, 61)]
    path3f = os.path.join(out_dir, "figure-data_fig3_frontier.csv")
    _write_csv(path3f, ("x1", "x2"), frontier_pts)
    files.append(path3f)
    projections = {}
    for label, g_x in (("direction1", [1.0, 1.0]), ("direction2", [0.0, 1.0])):
        direction = Direction([0.0], g_x)
        sol = solve_ddf(proj, bundle, direction)
        betas = np.linspace(0.0, sol.value, 41)
        rows = [tuple(bundle.x - bb * np.asarray(g_x)) for bb in betas]
        path = os.path.join(out_dir, f"figure-data_fig3_{label}.csv")
        _write_csv(path, ("x1", "x2"), trace(rows))
        files.append(path)
        projections[label] = {"value": sol.value, "case": sol.case}

    # Restriction of F to the search line for the reference instance,
    # sampled on [-1, 3] with the exact root included.
    quad = QuadraticSeparable(REFERENCE_QUADRATIC)
    bundle4 = Bundle([0.5, 0.5], [1.0, 1.0])
    direction4 = Direction([0.5, 0.5], [0.0, 0.0])
    f = quad.line_restriction(bundle4.y, bundle4.x, direction4.g_y, direction4.g_x)
    root = solve_ddf(quad, bundle4, direction4).value
    betas = np.unique(np.concatenate([np.linspace(-1.0, 3.0, 401), [root]]))
    rows = [(float(bb), float(f(bb))) for bb in betas]
    path4 = os.path.join(out_dir, "figure-data_fig4_line_restriction.csv")
    _write_csv(path4, ("beta", "value"), rows)
    files.append(path4)

    results = {
        "files": [os.path.basename(p) for p in files],
        "projections": projections,
        "line_restriction_root": root,
    }
    lines = ["wrote " + p for p in files]
    lines.append(f"line restriction vanishes at beta = {root:.9f}")
    return results, lines, files


_DEMOS = {
    "quadratic-homogeneity": _demo_quadratic_homogeneity,
    "example-2-1-6": _demo_example_2_1_6,
    "example-2-1-9": _demo_example_2_1_9,
    "staircase": _demo_staircase,
    "figure-data": _demo_figure_data,
}


def _cmd_demo(args) -> int:
    if args.name not in _DEMOS:
        raise ValueError(f"unknown demo {args.name!r}; choose from {DEMO_NAMES}")
    os.makedirs(args.out_dir, exist_ok=True)
    start = time.perf_counter()
    results, lines, files = _DEMOS[args.name](args.seed, args.out_dir)
    elapsed = time.perf_counter() - start
    report = {
        "command": "demo",
        "inputs": {"name": args.name, "out_dir": str(args.out_dir)},
        "seed": args.seed,
        "results": results,
        "files": [os.path.basename(p) for p in files],
        "timing_s": elapsed,
    }
    _emit(report, lines, args.json)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser / entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddfkit",
        description="Directional distance functions for multi-output technologies.",
    )
    parser.add_argument("--version", action="version", version=f"ddfkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate the directional distance")
    p_eval.add_argument("tech", help="technology JSON file")
    p_eval.add_argument("--y", required=True, help="output vector, comma separated")
    p_eval.add_argument("--x", required=True, help="input vector, comma separated")
    p_eval.add_argument("--gy", required=True, help="output direction, comma separated")
    p_eval.add_argument("--gx", required=True, help="input direction, comma separated")
    p_eval.add_argument(
        "--method",
        choices=("auto", "closed", "bisect", "grid"),
        default="auto",
        help="evaluation route (default: closed form when available)",
    )
    p_eval.add_argument("--step", type=float, default=1e-4, help="grid step for --method grid")
    p_eval.add_argument("--json", action="store_true", help="machine-readable report")
    p_eval.set_defaults(handler=_cmd_eval)

    p_check = sub.add_parser("check", help="run seeded property suites")
    p_check.add_argument("tech", help="technology JSON file (quadratic_separable)")
    p_check.add_argument(
        "--props",
        default=",".join(D_PROPERTY_NAMES),
        help="comma list from D1..D6 and F1,F3,F4,T1,T4,T5",
    )
    p_check.add_argument("--samples", type=int, default=200)
    p_check.add_argument("--seed", type=int, default=None)
    p_check.add_argument("--json", action="store_true")
    p_check.set_defaults(handler=_cmd_check)

    p_demo = sub.add_parser("demo", help="built-in walkthroughs and figure data")
    p_demo.add_argument("name", help="one of: " + ", ".join(DEMO_NAMES))
    p_demo.add_argument("--out-dir", default=".", help="directory for CSV output")
    p_demo.add_argument("--seed", type=int, default=None)
    p_demo.add_argument("--json", action="store_true")
    p_demo.set_defaults(handler=_cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None and hasattr(args, "seed"):
        args.seed = _default_seed()
    try:
        return args.handler(args)
    except DimensionError as exc:
        print(f"dimension error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
