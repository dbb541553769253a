"""Command line interface.

Subcommands: ``check`` (verify a property on a stored hypergraph),
``build`` (seeded constructions), ``search-max`` (exact maxima, single or
table mode), ``fit`` (exponent fits), and ``report`` (run a config of
items).  Every command writes byte-identical output for identical inputs;
wall-clock fields are reported as 0.0 unless ``--timings`` is given.

Exit codes: 0 success (``check``: property holds), 1 violation found or a
report item failed, 2 usage errors, malformed input, or exceeded budgets.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .checkers import (
    BudgetExceededError,
    check_cancellative,
    check_cover_free,
    check_sparse,
    check_union_free,
)
from .constructors import ConstructionError
from .core import FormatError, HypergraphError, SparsityConstraint, read_hypergraph, write_hypergraph
from .exact import SearchProblem, exact_max
from .experiments import (
    ConfigError,
    build_report_dict,
    fit_as_dict,
    fit_exponent,
    fit_samples_csv,
    run_build,
    run_report,
    search_table_rows,
    table_csv,
)


def _json_dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _parse_constraint(text: str) -> tuple[int, int]:
    try:
        v, e = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"constraint must look like 'v,e', got {text!r}"
        ) from None
    return v, e


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from None


def _parse_range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like 'a..b', got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freefam",
        description="Construct and exactly verify constrained uniform hypergraphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="verify a property on a hypergraph file")
    p_check.add_argument(
        "--property",
        required=True,
        choices=("cancellative", "union-free", "cover-free", "sparse"),
    )
    p_check.add_argument("--t", type=int, help="strength for the three family properties")
    p_check.add_argument("--v", type=int, help="sparse: minimum span is v+1")
    p_check.add_argument("--e", type=int, help="sparse: subset size")
    p_check.add_argument("--in", dest="path", required=True, help="hypergraph file")
    p_check.add_argument("--json", action="store_true", help="machine-readable verdict")
    p_check.add_argument(
        "--budget-evals",
        type=int,
        default=None,
        help="union-free subfamily evaluation cap (default 10^9)",
    )

    p_build = sub.add_parser("build", help="run a seeded construction")
    p_build.add_argument(
        "--kind",
        required=True,
        choices=("sparse", "cancellative", "cancellative2-odd", "union-free"),
    )
    p_build.add_argument("--n", type=int, required=True)
    p_build.add_argument("--r", type=int)
    p_build.add_argument("--t", type=int)
    p_build.add_argument("--k", type=int, help="cancellative2-odd: uniformity is 2k+1")
    p_build.add_argument(
        "--constraint",
        action="append",
        type=_parse_constraint,
        default=[],
        metavar="V,E",
        help="sparse kind: repeatable v,e pairs (none gives a plain random r-graph)",
    )
    p_build.add_argument("--c", type=float, default=0.5, help="density constant")
    p_build.add_argument("--seed", type=int, required=True)
    p_build.add_argument("--out", required=True, help="output hypergraph file")
    p_build.add_argument("--report", help="also write a JSON build report here")
    p_build.add_argument("--timings", action="store_true", help="report real wall time")

    p_search = sub.add_parser("search-max", help="exact maximum family size")
    p_search.add_argument(
        "--property",
        required=True,
        choices=("cancellative", "union-free", "cover-free", "sparse"),
    )
    p_search.add_argument("--n", type=int, help="single vertex count")
    p_search.add_argument("--n-range", type=_parse_range, help="table mode: a..b")
    p_search.add_argument("--r", type=int, required=True)
    p_search.add_argument("--t", type=int)
    p_search.add_argument("--v", type=int)
    p_search.add_argument("--e", type=int)
    p_search.add_argument("--budget", type=float, default=60.0, help="seconds per search")
    p_search.add_argument(
        "--no-symmetry",
        action="store_true",
        help="disable the fixed-first-edge reduction (paranoia runs)",
    )
    p_search.add_argument("--out", required=True, help="witness file, or CSV in table mode")
    p_search.add_argument("--timings", action="store_true")

    p_fit = sub.add_parser("fit", help="fit a growth exponent for a builder")
    p_fit.add_argument("--kind", required=True, choices=("cancellative", "union-free"))
    p_fit.add_argument("--r", type=int, required=True)
    p_fit.add_argument("--t", type=int, required=True)
    p_fit.add_argument("--n-list", type=_parse_int_list, required=True, metavar="N1,N2,...")
    p_fit.add_argument("--reps", type=int, required=True)
    p_fit.add_argument("--seed", type=int, required=True)
    p_fit.add_argument("--c", type=float, help="density constant (default: coarse sweep)")
    p_fit.add_argument("--out", required=True, help="output directory")
    p_fit.add_argument("--threads", type=int, default=1)
    p_fit.add_argument("--timings", action="store_true")

    p_report = sub.add_parser("report", help="run a config of experiment items")
    p_report.add_argument("--config", required=True)
    p_report.add_argument("--out", help="output directory (default <config stem>_report)")
    p_report.add_argument("--threads", type=int, default=1)
    p_report.add_argument("--timings", action="store_true")

    return parser


def _cmd_check(args) -> int:
    with open(args.path, "r", encoding="utf-8") as fh:
        h = read_hypergraph(fh)
    if args.property == "sparse":
        if args.v is None or args.e is None:
            print("error: sparse check needs --v and --e", file=sys.stderr)
            return 2
        verdict = check_sparse(h, SparsityConstraint(args.v, args.e))
        label = f"sparse({args.v},{args.e})"
    else:
        if args.t is None:
            print("error: --t is required", file=sys.stderr)
            return 2
        if args.property == "cancellative":
            verdict = check_cancellative(h, args.t)
        elif args.property == "cover-free":
            verdict = check_cover_free(h, args.t)
        else:
            kwargs = {}
            if args.budget_evals is not None:
                kwargs["budget"] = args.budget_evals
            verdict = check_union_free(h, args.t, **kwargs)
        label = f"{args.property}({args.t})"
    if args.json:
        payload = {"property": label, "holds": verdict.holds}
        if verdict.certificate is not None:
            payload["certificate"] = verdict.certificate.as_dict()
        sys.stdout.write(_json_dumps(payload))
    else:
        if verdict.holds:
            print(f"{label}: holds")
        else:
            print(f"{label}: violated")
            cert = verdict.certificate
            if cert.kind == "union_free":
                fam_a = " ".join("{" + ",".join(map(str, e)) + "}" for e in cert.family_a)
                fam_b = " ".join("{" + ",".join(map(str, e)) + "}" for e in cert.family_b)
                print(f"certificate family A: {fam_a}")
                print(f"certificate family B: {fam_b}")
            else:
                edges = " ".join("{" + ",".join(map(str, e)) + "}" for e in cert.edges)
                print(f"certificate: {edges}")
    return 0 if verdict.holds else 1


def _cmd_build(args) -> int:
    started = time.perf_counter()
    outcome = run_build(
        build_kind=args.kind,
        n=args.n,
        r=args.r,
        t=args.t,
        k=args.k,
        constraints=args.constraint,
        density_constant=args.c,
        seed=args.seed,
    )
    wall = time.perf_counter() - started if args.timings else 0.0
    Path(args.out).write_text(write_hypergraph(outcome.hypergraph), encoding="utf-8")
    report = build_report_dict(outcome, wall)
    report["kind"] = args.kind
    report["out"] = Path(args.out).name
    if args.report:
        Path(args.report).write_text(_json_dumps(report), encoding="utf-8")
    checks = " ".join(f"{name}={'ok' if ok else 'FAIL'}" for name, ok in sorted(outcome.checks.items()))
    print(
        f"built {args.kind}: n={args.n} sampled={outcome.sampled} "
        f"deleted={outcome.edges_deleted} final={len(outcome.hypergraph)} {checks}"
    )
    return 0


def _cmd_search(args) -> int:
    if (args.n is None) == (args.n_range is None):
        print("error: give exactly one of --n or --n-range", file=sys.stderr)
        return 2
    symmetry = "none" if args.no_symmetry else "fix_first_edge"
    if args.n_range is not None:
        rows = search_table_rows(
            property_name=args.property.replace("-", "_"),
            r=args.r,
            n_range=args.n_range,
            t=args.t,
            v=args.v,
            e=args.e,
            budget=args.budget,
            symmetry_mode=symmetry,
            timings=args.timings,
        )
        Path(args.out).write_text(table_csv(rows), encoding="utf-8")
        for row in rows:
            flag = "" if row["optimal"] else " (budget exhausted; lower bound)"
            print(f"n={row['n']}: max={row['max_size']} nodes={row['nodes']}{flag}")
        return 0
    problem = SearchProblem(
        n=args.n,
        r=args.r,
        property_name=args.property.replace("-", "_"),
        t=args.t,
        v=args.v,
        e=args.e,
        time_budget=args.budget,
        symmetry_mode=symmetry,
    )
    result = exact_max(problem)
    Path(args.out).write_text(write_hypergraph(result.witness), encoding="utf-8")
    status = "optimal" if result.optimal else "lower bound (budget exhausted)"
    print(
        f"{problem.label()} on n={args.n}: max_size={result.max_size} "
        f"({status}, nodes={result.nodes})"
    )
    return 0


def _cmd_fit(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    fit = fit_exponent(
        args.kind,
        args.n_list,
        args.reps,
        args.seed,
        r=args.r,
        t=args.t,
        density_constant=args.c,
        workers=args.threads,
    )
    wall = time.perf_counter() - started if args.timings else 0.0
    payload = fit_as_dict(fit)
    payload["wall_time"] = wall
    (out / "fit.json").write_text(_json_dumps(payload), encoding="utf-8")
    (out / "samples.csv").write_text(fit_samples_csv(fit), encoding="utf-8")
    from . import plots

    plots.save_fit_figure(fit, out / "fit.png")
    print(
        f"fit {args.kind} r={args.r} t={args.t}: slope={fit.slope:.4f} "
        f"predicted={fit.predicted} residual={fit.residual:+.4f} c={fit.density_constant}"
    )
    return 0


def _cmd_report(args) -> int:
    config_path = Path(args.config)
    with open(config_path, "r", encoding="utf-8") as fh:
        config = json.load(fh)
    out_dir = Path(args.out) if args.out else config_path.parent / f"{config_path.stem}_report"
    report, ok = run_report(
        config,
        out_dir,
        base_dir=config_path.parent,
        workers=args.threads,
        timings=args.timings,
    )
    for entry in report["items"]:
        status = entry["status"]
        suffix = "" if status == "ok" else f": {entry['error']}"
        print(f"item {entry['id']}: {status}{suffix}")
    print(f"report written to {out_dir}")
    return 0 if ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "check": _cmd_check,
        "build": _cmd_build,
        "search-max": _cmd_search,
        "fit": _cmd_fit,
        "report": _cmd_report,
    }
    try:
        return handlers[args.command](args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    except (HypergraphError, FormatError, ConfigError, ConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
