"""Command-line front end: ``wishful analyze|sweep|verify <problem.json>``.

Exit status: 0 success, 1 a verify comparison failed, 2 bad input,
3 solver failure.  Command-line flags override values in the problem file,
which override the built-in defaults (divergence kl, delta 1, tol 1e-10).
Relative CSV paths are resolved against ``$WISHFUL_OUTPUT_DIR`` when set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from .decision import analyze, sweep_prior
from .divergence import BUILTIN_NAMES
from .errors import EnumerationBoundError, InputError, SolverError
from .oracle import MAX_RESOLUTION, MAX_STATES, GridSpec, primal_grid_max, refine_local
from .problem_file import load_problem_file

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3
OUTPUT_DIR_ENV = "WISHFUL_OUTPUT_DIR"
SWEEP_HEADER = ["divergence", "q", "lambda_star", "p_star", "censored", "emergent"]


def fmt(x) -> str:
    """12 significant digits, round-half-even on the binary value."""
    if x is None:
        return "n/a"
    x = float(x)
    if math.isnan(x):
        return "n/a"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    out = format(x, ".12g")
    return "0" if out == "-0" else out


def _jnum(x):
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None if math.isnan(x) else fmt(x)
    return float(fmt(x))


def _vec(xs) -> str:
    return "(" + ", ".join(fmt(x) for x in xs) + ")"


def _labels(labels, idx) -> str:
    return ", ".join(labels[i] for i in sorted(idx)) or "-"


def _resolve_output(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


# --- analyze ----------------------------------------------------------------


def analysis_to_dict(result) -> dict:
    pr = result.problem
    actions = []
    for a, (dual, prof) in enumerate(result.per_action):
        actions.append(
            {
                "action": pr.action_labels[a],
                "lambda_star": _jnum(dual.lambda_star),
                "value": _jnum(dual.value),
                "expected_utility": _jnum(result.expected_utilities[a]),
                "transformed_utility": _jnum(result.transformed_utilities[a]),
                "bracket": [_jnum(v) for v in dual.bracket],
                "foc_residual": _jnum(dual.foc_residual),
                "constrained_at_emergence": dual.constrained_at_emergence,
                "iterations": dual.iterations,
                "weights": [_jnum(w) for w in prof.weights],
                "beliefs": [_jnum(p) for p in prof.beliefs],
                "censored": [pr.state_labels[i] for i in sorted(prof.censored)],
                "emergent": [pr.state_labels[i] for i in sorted(prof.emergent)],
                "overprecise": [pr.state_labels[i] for i in sorted(prof.overprecise)],
                "residual_mass": _jnum(prof.residual_mass),
            }
        )
    return {
        "divergence": pr.spec.name,
        "delta": _jnum(pr.delta),
        "state_labels": list(pr.state_labels),
        "prior": [_jnum(v) for v in pr.prior],
        "actions": actions,
        "wt_optimal": [pr.action_labels[i] for i in result.wt_optimal],
        "eu_optimal": [pr.action_labels[i] for i in result.eu_optimal],
        "value_gap": _jnum(result.value_gap),
    }


def format_analysis(result) -> str:
    pr = result.problem
    out = io.StringIO()
    out.write(f"divergence: {pr.spec.name}  delta: {fmt(pr.delta)}\n")
    out.write(f"states: {', '.join(pr.state_labels)}  prior: {_vec(pr.prior)}\n\n")
    for a, (dual, prof) in enumerate(result.per_action):
        out.write(f"action {pr.action_labels[a]}\n")
        out.write(f"  lambda*      {fmt(dual.lambda_star)}")
        if dual.constrained_at_emergence:
            out.write("  (pinned by emergence bound)")
        out.write("\n")
        out.write(f"  V            {fmt(dual.value)}\n")
        out.write(f"  E_q[u]       {fmt(result.expected_utilities[a])}\n")
        out.write(f"  beliefs      {_vec(prof.beliefs)}\n")
        out.write(f"  weights      {_vec(prof.weights)}\n")
        out.write(f"  censored     {_labels(pr.state_labels, prof.censored)}\n")
        out.write(f"  emergent     {_labels(pr.state_labels, prof.emergent)}\n")
        out.write(f"  overprecise  {_labels(pr.state_labels, prof.overprecise)}\n")
    out.write("\n")
    out.write(f"WT-optimal: {_labels(pr.action_labels, result.wt_optimal)}\n")
    out.write(f"EU-optimal: {_labels(pr.action_labels, result.eu_optimal)}\n")
    if set(result.wt_optimal) != set(result.eu_optimal):
        out.write("note: wishful-thinking and expected-utility choices differ\n")
    out.write(f"value gap (max V - max E_q[u]): {fmt(result.value_gap)}\n")
    return out.getvalue()


def cmd_analyze(args) -> int:
    pf = load_problem_file(args.file)
    problem = pf.to_problem(divergence=args.divergence, delta=args.delta)
    tol = args.tol if args.tol is not None else pf.tol
    result = analyze(problem, tol=tol)
    if args.format == "json":
        sys.stdout.write(json.dumps(analysis_to_dict(result), indent=2) + "\n")
    else:
        sys.stdout.write(format_analysis(result))
    return EXIT_OK


# --- sweep ------------------------------------------------------------------


def sweep_rows(problem, state, n_points, divergences, action=0, tol=None):
    """CSV rows for the prior sweep on grid {0, 1/N, ..., 1}."""
    grid = [k / n_points for k in range(n_points + 1)]
    kwargs = {} if tol is None else {"tol": tol}
    rows = []
    for name in divergences:
        sub = problem.replace(divergence=name)
        for r in sweep_prior(sub, state, grid, action=action, **kwargs):
            rows.append(
                [
                    name,
                    fmt(r.q),
                    fmt(r.lambda_star),
                    fmt(r.p_star),
                    "true" if r.censored else "false",
                    "true" if r.emergent else "false",
                ]
            )
    return rows


def cmd_sweep(args) -> int:
    pf = load_problem_file(args.file)
    problem = pf.to_problem(delta=args.delta)
    if problem.n_states != 2:
        raise InputError(f"sweep needs a two-state problem, {args.file} has {problem.n_states} states")
    section = pf.sweep
    state = args.state if args.state is not None else section.get("state", 0)
    if isinstance(state, str):
        if state not in problem.state_labels:
            raise InputError(f"unknown state {state!r}")
        state = problem.state_labels.index(state)
    n_points = args.grid_points or section.get("grid_points", 100)
    if int(n_points) != n_points or n_points < 1:
        raise InputError(f"grid points must be a positive integer, got {n_points!r}")
    divergences = args.divergences or section.get("divergences") or [pf.divergence]
    if isinstance(divergences, str):
        divergences = divergences.split(",")
    for name in divergences:
        if name not in BUILTIN_NAMES:
            raise InputError(f"unknown divergence {name!r}")
    action = section.get("action", 0)
    if isinstance(action, str):
        if action not in problem.action_labels:
            raise InputError(f"field sweep.action: unknown action {action!r}")
        action = problem.action_labels.index(action)
    rows = sweep_rows(problem, int(state), int(n_points), divergences, action=action, tol=pf.tol)

    csv_path = args.csv or section.get("csv")
    if csv_path:
        with open(_resolve_output(csv_path), "w", newline="") as fh:
            _write_csv(fh, rows)
    else:
        _write_csv(sys.stdout, rows)
    return EXIT_OK


def _write_csv(fh, rows):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    writer.writerows(rows)


# --- verify -----------------------------------------------------------------


def cmd_verify(args) -> int:
    pf = load_problem_file(args.file)
    problem = pf.to_problem(divergence=args.divergence, delta=args.delta)
    n = problem.n_states
    if n > MAX_STATES:
        raise EnumerationBoundError(f"verify enumerates at most {MAX_STATES} states, problem has {n}")
    resolution = args.resolution or pf.verify.get("resolution") or MAX_RESOLUTION[n]
    iterations = args.refine_iterations
    if iterations is None:
        iterations = pf.verify.get("refine_iterations", 50)
    result = analyze(problem, tol=pf.tol)

    header = f"{'action':<12}{'dual':>20}{'oracle':>20}{'|gap|':>20}{'bound':>20}  status\n"
    sys.stdout.write(f"divergence: {problem.spec.name}  delta: {fmt(problem.delta)}  grid: {resolution}\n")
    sys.stdout.write(header)
    all_pass = True
    for a, (dual, _) in enumerate(result.per_action):
        u = problem.utilities[a]
        grid = primal_grid_max(problem.spec, u, problem.prior, problem.delta, GridSpec(int(resolution)))
        polished = refine_local(problem.spec, u, problem.prior, problem.delta, grid.argmax_p, iterations)
        gap = abs(polished.value - dual.value)
        ok = grid.value <= dual.value + grid.error_bound and gap <= grid.error_bound
        all_pass &= ok
        sys.stdout.write(
            f"{problem.action_labels[a]:<12}{fmt(dual.value):>20}{fmt(polished.value):>20}"
            f"{fmt(gap):>20}{fmt(grid.error_bound):>20}  {'PASS' if ok else 'FAIL'}\n"
        )
    return EXIT_OK if all_pass else EXIT_FAIL


# --- entry point ------------------------------------------------------------


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wishful",
        description="Optimal wishful-thinking beliefs and choices under phi-divergence costs.",
        epilog="Flags override problem-file values; file values override defaults "
        "(divergence kl, delta 1, tol 1e-10). Relative CSV paths are placed under "
        f"${OUTPUT_DIR_ENV} when it is set.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="solve every action and report beliefs and choices")
    p.add_argument("file")
    p.add_argument("--divergence", choices=BUILTIN_NAMES)
    p.add_argument("--delta", type=_positive_float)
    p.add_argument("--tol", type=_positive_float)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="CSV of optimal belief vs prior for a two-state problem")
    p.add_argument("file")
    p.add_argument("--state", type=int, help="index of the swept state (default 0)")
    p.add_argument("--grid-points", type=int, help="N; grid is 0, 1/N, ..., 1 (default 100)")
    p.add_argument("--divergences", help="comma-separated list, e.g. kl,mod_chi2,burg")
    p.add_argument("--csv", help="output path (default stdout)")
    p.add_argument("--delta", type=_positive_float)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="cross-check dual values against brute-force enumeration")
    p.add_argument("file")
    p.add_argument("--resolution", type=int, help="lattice subdivisions per simplex edge")
    p.add_argument("--refine-iterations", type=int)
    p.add_argument("--divergence", choices=BUILTIN_NAMES)
    p.add_argument("--delta", type=_positive_float)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
