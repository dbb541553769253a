"""Exponent-fit harness and reproducible experiment reports.

A fit runs one of the composed builders over a grid of vertex counts,
repeats each point with derived seeds (``seed + rep``), and fits the
least-squares slope of log(mean size) against log n.  The report runner
executes a declarative list of check/build/search/fit items from a config
file and emits one JSON report plus per-item CSV files (and figures)
whose bytes depend only on the config and the seeds.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import log
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .checkers import (
    check_cancellative,
    check_cover_free,
    check_sparse,
    check_union_free,
)
from .constructors import (
    BuildOutcome,
    ConstructionParams,
    alteration_outcome,
    build_cancellative,
    build_union_free,
    cancellative_outcome,
    predicted_exponents,
    two_cancellative_odd_outcome,
    union_free_outcome,
)
from .core import (
    Hypergraph,
    HypergraphError,
    SparsityConstraint,
    read_hypergraph,
    write_hypergraph,
)
from .exact import SearchProblem, exact_max

CONFIG_SCHEMA = "v1"
DENSITY_SWEEP = (0.25, 0.5, 1.0)

FIT_KINDS = ("cancellative", "union-free")
BuilderFn = Callable[[int, int], Hypergraph]


class ConfigError(ValueError):
    """Experiment config does not conform to the v1 schema."""


@dataclass(frozen=True)
class FitSample:
    n: int
    sizes: tuple[int, ...]
    mean_size: float
    log_mean: float


@dataclass
class ExponentFit:
    kind: str
    r: int | None
    t: int | None
    density_constant: float | None
    seed: int
    reps: int
    samples: list[FitSample]
    slope: float
    predicted: Fraction | None
    residual: float | None


def fit_loglog(ns: Sequence[int], means: Sequence[float]) -> float:
    """Least-squares slope of log(mean) against log(n)."""
    xs = np.log([float(n) for n in ns])
    ys = np.log([float(m) for m in means])
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def _builder_for(kind: str, r: int, t: int, density_constant: float) -> BuilderFn:
    if kind == "cancellative":
        return lambda n, seed: build_cancellative(n, r, t, seed, density_constant)
    if kind == "union-free":
        return lambda n, seed: build_union_free(n, r, t, seed, density_constant)
    raise HypergraphError(f"unknown fit kind {kind!r}; expected one of {FIT_KINDS}")


def sweep_density(
    kind: str, r: int, t: int, n: int, reps: int, seed: int
) -> float:
    """Pick the density constant from a coarse sweep at the smallest n.

    Builds ``reps`` structures per candidate and keeps the constant with
    the largest mean size (first candidate wins ties), which is then
    frozen for the whole grid so per-n tuning cannot bias the slope.
    """
    best_c = DENSITY_SWEEP[0]
    best_mean = -1.0
    for c in DENSITY_SWEEP:
        builder = _builder_for(kind, r, t, c)
        sizes = [len(builder(n, seed + i)) for i in range(reps)]
        mean = sum(sizes) / len(sizes)
        if mean > best_mean:
            best_mean = mean
            best_c = c
    return best_c


def fit_exponent(
    builder: str | BuilderFn,
    n_values: Sequence[int],
    reps: int,
    seed: int,
    r: int | None = None,
    t: int | None = None,
    density_constant: float | None = None,
    workers: int = 1,
) -> ExponentFit:
    """Run a builder over a vertex-count grid and fit the growth exponent.

    ``builder`` is either one of the named kinds (requires ``r`` and
    ``t``; the predicted exponent is attached automatically) or a callable
    ``(n, seed) -> Hypergraph`` for ad-hoc experiments.  Repetition i of
    any grid point uses seed ``seed + i``.  Zero-size grid points would
    make the log fit blow up and abort the run, as does any builder
    verification failure.
    """
    ns = sorted(set(int(n) for n in n_values))
    if len(ns) < 4:
        raise HypergraphError(f"need at least 4 distinct n values, got {len(ns)}")
    if reps < 3:
        raise HypergraphError(f"need at least 3 repetitions, got {reps}")
    predicted: Fraction | None = None
    if isinstance(builder, str):
        kind = builder
        if r is None or t is None:
            raise HypergraphError("named fit kinds need r and t")
        prediction = predicted_exponents(r, t)
        predicted = (
            prediction.lower_cancellative
            if kind == "cancellative"
            else prediction.lower_union_free
        )
        c = density_constant
        if c is None:
            c = sweep_density(kind, r, t, ns[0], reps, seed)
        build = _builder_for(kind, r, t, c)
    else:
        kind = getattr(builder, "__name__", "custom")
        build = builder
        c = density_constant

    jobs = [(n, i) for n in ns for i in range(reps)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sizes = list(pool.map(lambda job: len(build(job[0], seed + job[1])), jobs))
    else:
        sizes = [len(build(n, seed + i)) for n, i in jobs]
    by_n: dict[int, list[int]] = {n: [] for n in ns}
    for (n, _i), size in zip(jobs, sizes):
        by_n[n].append(size)

    samples = []
    for n in ns:
        mean = sum(by_n[n]) / len(by_n[n])
        if mean <= 0:
            raise HypergraphError(
                f"builder produced only empty hypergraphs at n={n}; cannot fit a slope"
            )
        samples.append(
            FitSample(n=n, sizes=tuple(by_n[n]), mean_size=mean, log_mean=log(mean))
        )
    slope = fit_loglog(ns, [s.mean_size for s in samples])
    residual = None if predicted is None else slope - float(predicted)
    return ExponentFit(
        kind=kind,
        r=r,
        t=t,
        density_constant=c,
        seed=seed,
        reps=reps,
        samples=samples,
        slope=slope,
        predicted=predicted,
        residual=residual,
    )


def fit_as_dict(fit: ExponentFit) -> dict:
    return {
        "kind": fit.kind,
        "r": fit.r,
        "t": fit.t,
        "density_constant": fit.density_constant,
        "seed": fit.seed,
        "reps": fit.reps,
        "slope": fit.slope,
        "predicted": None if fit.predicted is None else str(fit.predicted),
        "predicted_float": None if fit.predicted is None else float(fit.predicted),
        "residual": fit.residual,
        "samples": [
            {
                "n": s.n,
                "sizes": list(s.sizes),
                "mean_size": s.mean_size,
                "log_mean": s.log_mean,
            }
            for s in fit.samples
        ],
    }


def fit_samples_csv(fit: ExponentFit) -> str:
    lines = ["n,rep,seed,size"]
    for sample in fit.samples:
        for i, size in enumerate(sample.sizes):
            lines.append(f"{sample.n},{i},{fit.seed + i},{size}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# report runner


def _require(item: dict, key: str, item_id: str):
    if key not in item:
        raise ConfigError(f"item {item_id!r} is missing required key {key!r}")
    return item[key]


def _run_check_item(item: dict, base_dir: Path) -> dict:
    path = base_dir / _require(item, "path", item["id"])
    with open(path, "r", encoding="utf-8") as fh:
        h = read_hypergraph(fh)
    prop = _require(item, "property", item["id"])
    if prop == "sparse":
        verdict = check_sparse(h, SparsityConstraint(item["v"], item["e"]))
    elif prop == "cancellative":
        verdict = check_cancellative(h, item["t"])
    elif prop == "cover-free":
        verdict = check_cover_free(h, item["t"])
    elif prop == "union-free":
        verdict = check_union_free(h, item["t"])
    else:
        raise ConfigError(f"item {item['id']!r}: unknown property {prop!r}")
    result: dict = {"holds": verdict.holds}
    if verdict.certificate is not None:
        result["certificate"] = verdict.certificate.as_dict()
    return result


def run_build(
    build_kind: str,
    n: int,
    r: int | None = None,
    t: int | None = None,
    k: int | None = None,
    constraints: Sequence[tuple[int, int]] = (),
    density_constant: float = 0.5,
    seed: int = 0,
) -> BuildOutcome:
    """Dispatch one named construction; shared by the CLI and the report runner."""
    if build_kind == "sparse":
        if r is None:
            raise HypergraphError("sparse build needs r")
        params = ConstructionParams(
            n=n,
            r=r,
            constraints=tuple(SparsityConstraint(v, e) for v, e in constraints),
            density_constant=density_constant,
            seed=seed,
        )
        return alteration_outcome(params)
    if build_kind == "cancellative":
        if r is None or t is None:
            raise HypergraphError("cancellative build needs r and t")
        return cancellative_outcome(n, r, t, seed, density_constant)
    if build_kind == "cancellative2-odd":
        if k is None:
            raise HypergraphError("cancellative2-odd build needs k")
        return two_cancellative_odd_outcome(n, k, seed, density_constant)
    if build_kind == "union-free":
        if r is None or t is None:
            raise HypergraphError("union-free build needs r and t")
        return union_free_outcome(n, r, t, seed, density_constant)
    raise HypergraphError(f"unknown build kind {build_kind!r}")


def build_report_dict(outcome: BuildOutcome, wall_time: float) -> dict:
    params = outcome.params
    report = {
        "n": params.n,
        "r": params.r,
        "constraints": [[c.v, c.e] for c in params.constraints],
        "density_constant": params.density_constant,
        "seed": params.seed,
        "sample_probability": params.sample_probability,
        "sampled": outcome.sampled,
        "bad_configs": list(outcome.bad_configs),
        "edges_deleted": outcome.edges_deleted,
        "final_size": len(outcome.hypergraph),
        "checks": dict(sorted(outcome.checks.items())),
        "wall_time": wall_time,
    }
    if outcome.partition is not None:
        report["partition"] = [list(p) for p in outcome.partition.part_vertices()]
    return report


def search_table_rows(
    property_name: str,
    r: int,
    n_range: tuple[int, int],
    t: int | None = None,
    v: int | None = None,
    e: int | None = None,
    budget: float = 60.0,
    symmetry_mode: str = "fix_first_edge",
    timings: bool = False,
) -> list[dict]:
    rows = []
    for n in range(n_range[0], n_range[1] + 1):
        problem = SearchProblem(
            n=n,
            r=r,
            property_name=property_name,
            t=t,
            v=v,
            e=e,
            time_budget=budget,
            symmetry_mode=symmetry_mode,
        )
        started = time.perf_counter()
        result = exact_max(problem)
        seconds = time.perf_counter() - started if timings else 0.0
        rows.append(
            {
                "n": n,
                "max_size": result.max_size,
                "optimal": result.optimal,
                "nodes": result.nodes,
                "seconds": seconds,
            }
        )
    return rows


def table_csv(rows: list[dict]) -> str:
    lines = ["n,max_size,optimal,nodes,seconds"]
    for row in rows:
        optimal = "true" if row["optimal"] else "false"
        lines.append(
            f"{row['n']},{row['max_size']},{optimal},{row['nodes']},{row['seconds']:.3f}"
        )
    return "\n".join(lines) + "\n"


def validate_config(config: dict) -> list[dict]:
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    if config.get("schema") != CONFIG_SCHEMA:
        raise ConfigError(f"config schema must be {CONFIG_SCHEMA!r}")
    items = config.get("items")
    if not isinstance(items, list) or not items:
        raise ConfigError("config has nothing to run: items must be a non-empty list")
    ids = []
    for item in items:
        if not isinstance(item, dict) or "id" not in item or "kind" not in item:
            raise ConfigError("every item needs an id and a kind")
        ids.append(item["id"])
    if len(set(ids)) != len(ids):
        raise ConfigError("item ids must be unique")
    return items


def run_report(
    config: dict,
    out_dir: str | Path,
    base_dir: str | Path = ".",
    workers: int = 1,
    timings: bool = False,
) -> tuple[dict, bool]:
    """Execute every config item and write report.json, CSVs, and figures.

    Items run independently (optionally across threads); per-item errors
    are recorded in the report rather than raised.  The report lists items
    sorted by id, so the output does not depend on the execution schedule.
    Returns the report dict and whether all items succeeded.
    """
    items = validate_config(config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    base = Path(base_dir)

    def execute(item: dict) -> dict:
        entry: dict = {"id": item["id"], "kind": item["kind"]}
        started = time.perf_counter()
        try:
            kind = item["kind"]
            if kind == "check":
                entry["result"] = _run_check_item(item, base)
            elif kind == "build":
                outcome = run_build(
                    build_kind=_require(item, "build_kind", item["id"]),
                    n=_require(item, "n", item["id"]),
                    r=item.get("r"),
                    t=item.get("t"),
                    k=item.get("k"),
                    constraints=[tuple(c) for c in item.get("constraints", [])],
                    density_constant=item.get("c", 0.5),
                    seed=item.get("seed", 0),
                )
                wall = time.perf_counter() - started if timings else 0.0
                entry["result"] = build_report_dict(outcome, wall)
                entry["hypergraph"] = outcome.hypergraph
            elif kind == "search_table":
                rows = search_table_rows(
                    property_name=_require(item, "property", item["id"]),
                    r=_require(item, "r", item["id"]),
                    n_range=tuple(_require(item, "n_range", item["id"])),
                    t=item.get("t"),
                    v=item.get("v"),
                    e=item.get("e"),
                    budget=item.get("budget", 60.0),
                    timings=timings,
                )
                entry["result"] = {"rows": rows}
            elif kind == "fit":
                fit = fit_exponent(
                    _require(item, "fit_kind", item["id"]),
                    _require(item, "n_list", item["id"]),
                    _require(item, "reps", item["id"]),
                    item.get("seed", 0),
                    r=_require(item, "r", item["id"]),
                    t=_require(item, "t", item["id"]),
                    density_constant=item.get("c"),
                )
                wall = time.perf_counter() - started if timings else 0.0
                fit_dict = fit_as_dict(fit)
                fit_dict["wall_time"] = wall
                entry["result"] = fit_dict
                entry["fit"] = fit
            else:
                raise ConfigError(f"item {item['id']!r}: unknown kind {kind!r}")
            entry["status"] = "ok"
        except Exception as exc:  # per-item failures land in the report
            entry["status"] = "error"
            entry["error"] = f"{type(exc).__name__}: {exc}"
        return entry

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(execute, items))
    else:
        entries = [execute(item) for item in items]
    entries.sort(key=lambda e: str(e["id"]))

    # all file output happens sequentially after the compute phase
    report_items = []
    for entry in entries:
        item_id = entry["id"]
        if entry["status"] == "ok":
            if entry["kind"] == "build":
                path = out / f"{item_id}.txt"
                path.write_text(write_hypergraph(entry.pop("hypergraph")), encoding="utf-8")
                entry["result"]["out"] = path.name
            elif entry["kind"] == "search_table":
                rows = entry["result"]["rows"]
                csv_path = out / f"{item_id}.csv"
                csv_path.write_text(table_csv(rows), encoding="utf-8")
                entry["result"]["csv"] = csv_path.name
                from . import plots

                png_path = out / f"{item_id}.png"
                plots.save_table_figure(rows, str(item_id), png_path)
                entry["result"]["png"] = png_path.name
            elif entry["kind"] == "fit":
                fit = entry.pop("fit")
                csv_path = out / f"{item_id}.csv"
                csv_path.write_text(fit_samples_csv(fit), encoding="utf-8")
                entry["result"]["csv"] = csv_path.name
                from . import plots

                png_path = out / f"{item_id}.png"
                plots.save_fit_figure(fit, png_path)
                entry["result"]["png"] = png_path.name
        report_items.append(entry)

    report = {"schema": CONFIG_SCHEMA, "items": report_items}
    (out / "report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    ok = all(entry["status"] == "ok" for entry in report_items)
    return report, ok
