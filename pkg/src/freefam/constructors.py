"""Randomized and deterministic constructions of constrained hypergraphs.

The central routine samples a binomial random r-graph at a density tuned
to the sparsity constraints, then deletes edges until no constrained
configuration survives (the alteration method).  Composed builders wrap it
with the constraint recipes that force cancellative or union-free
families, verify the result, and hand back the verified hypergraph.

All randomness flows from a single 64-bit seed through a Mersenne Twister
bit stream; identical parameters give bit-identical hypergraphs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Iterator

from .checkers import check_cancellative, check_union_free
from .core import (
    Hypergraph,
    HypergraphError,
    Partition,
    SparsityConstraint,
    bounded_edge_subsets,
    combination_from_rank,
    connected_bounded_edge_subsets,
    mask_of,
    vertices_of,
)

MAX_EXPECTED_SAMPLE = 5_000_000


class ConstructionError(RuntimeError):
    """A construction postcondition failed; indicates an implementation bug."""


class WitnessError(HypergraphError):
    """Witness extraction could not complete; the message names the failing step."""


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class ConstructionParams:
    """Inputs for one alteration run.

    ``constraints`` may be empty, in which case the sample is a plain
    binomial random r-graph with inclusion probability ``density_constant``
    and nothing is deleted.
    """

    n: int
    r: int
    constraints: tuple[SparsityConstraint, ...] = ()
    density_constant: float = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        if not 1 <= self.r <= self.n:
            raise HypergraphError(f"need 1 <= r <= n, got r={self.r}, n={self.n}")
        if self.density_constant <= 0:
            raise HypergraphError("density constant must be positive")
        if not 0 <= self.seed < 2**64:
            raise HypergraphError("seed must be an unsigned 64-bit integer")
        for c in self.constraints:
            c.validate_for(self.r)
        h = self.exponent
        if not 0 < h <= self.r:
            raise HypergraphError(
                f"constraint set gives target exponent {h}, outside (0, r]"
            )

    @property
    def exponent(self) -> Fraction:
        """Target growth exponent min (e_i r - v_i) / (e_i - 1); r when unconstrained."""
        if not self.constraints:
            return Fraction(self.r)
        return min(Fraction(c.e * self.r - c.v, c.e - 1) for c in self.constraints)

    @property
    def sample_probability(self) -> float:
        h = self.exponent
        return min(1.0, self.density_constant * float(self.n) ** (float(h) - self.r))


@dataclass(frozen=True)
class PeelParams:
    """Codegree peeling thresholds: k-subset size and minimum surviving codegree s+1."""

    k: int
    s: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise HypergraphError(f"k must be positive, got {self.k}")
        if self.s < 1:
            raise HypergraphError(f"s must be at least 1, got {self.s}")


@dataclass(frozen=True)
class ExponentPrediction:
    """Growth exponents for the two family sizes at fixed (r, t).

    Lower/upper pairs are exact rationals; ``x`` is the split parameter of
    the cancellative constraint recipe.  The ``log_boost_*`` flags report
    the coprimality conditions under which the lower-bound order gains a
    logarithmic factor; the factor itself is not modelled.  Cancellative
    fields are None for t == 2.
    """

    r: int
    t: int
    lower_cancellative: Fraction | None
    upper_cancellative: int | None
    lower_union_free: Fraction
    upper_union_free: int
    log_boost_cancellative: bool | None
    log_boost_union_free: bool
    x: int | None


def predicted_exponents(r: int, t: int) -> ExponentPrediction:
    """Exponent formulas at (r, t); requires r >= 3 and t >= 3 (t = 2 gives
    only the union-free fields)."""
    if r < 3:
        raise HypergraphError(f"uniformity r must be at least 3, got {r}")
    if t < 2:
        raise HypergraphError(f"t must be at least 2, got {t}")
    lower_uf = Fraction(r, t - 1)
    upper_uf = -(-r // (t - 1))
    if t == 2:
        return ExponentPrediction(
            r=r,
            t=t,
            lower_cancellative=None,
            upper_cancellative=None,
            lower_union_free=lower_uf,
            upper_union_free=upper_uf,
            log_boost_cancellative=None,
            log_boost_union_free=gcd(r, t - 1) == 1,
            x=None,
        )
    x = max(0, -(-(2 * r - t - 1) // (t + 2)))
    lower_canc = (2 * r) // (t + 2) + Fraction((2 * r) % (t + 2), t + 1)
    upper_canc = -(-r // (t // 2 + 1))
    return ExponentPrediction(
        r=r,
        t=t,
        lower_cancellative=lower_canc,
        upper_cancellative=upper_canc,
        lower_union_free=lower_uf,
        upper_union_free=upper_uf,
        log_boost_cancellative=gcd(2 * r - x, t + 1) == 1,
        log_boost_union_free=gcd(r, t - 1) == 1,
        x=x,
    )


# ---------------------------------------------------------------------------
# seeded sampling

# Only Random.getrandbits / Random.random are used, keeping the stream
# stable across interpreter versions.


def _binomial(rng: random.Random, trials: int, p: float) -> int:
    """Inverse-CDF binomial sample; cost is linear in the result."""
    if p >= 1.0:
        return trials
    if p <= 0.0 or trials == 0:
        return 0
    expected = trials * p
    if expected > MAX_EXPECTED_SAMPLE:
        raise HypergraphError(
            f"expected sample of {expected:.3g} edges is beyond desk scale"
        )
    u = rng.random()
    ratio = p / (1.0 - p)
    try:
        pmf = (1.0 - p) ** trials
    except OverflowError:  # pragma: no cover
        pmf = 0.0
    if pmf == 0.0:
        pmf = math.exp(trials * math.log1p(-p))
    cdf = pmf
    k = 0
    while u > cdf and k < trials:
        k += 1
        pmf *= (trials - k + 1) / k * ratio
        cdf += pmf
    return k


def _rand_below(rng: random.Random, bound: int) -> int:
    bits = bound.bit_length()
    while True:
        value = rng.getrandbits(bits)
        if value < bound:
            return value


def _sample_distinct_ranks(rng: random.Random, count: int, universe: int) -> list[int]:
    """``count`` distinct uniform values below ``universe``, sorted ascending."""
    if count >= universe:
        return list(range(universe))
    if count > universe // 2:
        # sample the complement instead; rejection would crawl
        excluded = set(_sample_distinct_ranks(rng, universe - count, universe))
        return [x for x in range(universe) if x not in excluded]
    chosen: set[int] = set()
    while len(chosen) < count:
        chosen.add(_rand_below(rng, universe))
    return sorted(chosen)


def _sample_binomial_hypergraph(params: ConstructionParams) -> Hypergraph:
    n, r = params.n, params.r
    total = comb(n, r)
    rng = random.Random(params.seed)
    count = _binomial(rng, total, params.sample_probability)
    ranks = _sample_distinct_ranks(rng, count, total)
    masks = tuple(
        mask_of(combination_from_rank(rank, n, r), n) for rank in ranks
    )
    # lexicographic ranks unrank to lexicographically ordered edges
    return Hypergraph(n=n, r=r, edges=masks)


# ---------------------------------------------------------------------------
# alteration


@dataclass
class BuildOutcome:
    """A constructed hypergraph plus the diagnostics of how it was built."""

    hypergraph: Hypergraph
    params: ConstructionParams
    sampled: int
    bad_configs: tuple[int, ...]
    edges_deleted: int
    checks: dict[str, bool] = field(default_factory=dict)
    partition: Partition | None = None


def _always_connected(c: SparsityConstraint, r: int) -> bool:
    """Whether every (v, e) configuration is connected in the edge-intersection
    graph: a disconnected one would span at least 2r (e = 2) or 2r + 1
    (e >= 3) vertices."""
    return c.v < 2 * r if c.e == 2 else c.v <= 2 * r


def _connected_scan_ok(
    c: SparsityConstraint, family: tuple[SparsityConstraint, ...], r: int
) -> bool:
    """Whether scanning only connected configurations of ``c`` cannot miss one.

    True when configurations of ``c`` are connected outright, or when a
    disconnected one would contain a configuration of an always-connected
    partner constraint: splitting off the smallest component leaves at
    least ceil(e/2) edges spanning at most v - r vertices, so a partner
    with e' <= ceil(e/2) and v' >= v - r catches it (the partner's
    configurations all get found and destroyed, taking the disconnected
    host configurations down with them).
    """
    if _always_connected(c, r):
        return True
    return any(
        p is not c
        and _always_connected(p, r)
        and p.e <= (c.e + 1) // 2
        and p.v >= c.v - r
        for p in family
    )


def _scan_constraint(
    masks: list[int], r: int, n: int, c: SparsityConstraint, connected_ok: bool
) -> list[tuple[int, ...]]:
    if connected_ok:
        found = sorted(connected_bounded_edge_subsets(masks, r, c.e, c.v, n=n))
    else:
        found = list(bounded_edge_subsets(masks, r, c.e, c.v, n=n))
    return found


def verify_sparse_family(
    h: Hypergraph, constraints: tuple[SparsityConstraint, ...]
) -> dict[str, bool]:
    """Exact verification of a whole constraint family.

    Equivalent to running :func:`~freefam.checkers.check_sparse` per
    constraint, but once the small always-connected members are confirmed
    to hold, the larger partnered members only need their connected
    configurations enumerated.
    """
    results: dict[str, bool] = {}
    held: list[SparsityConstraint] = []
    for c in sorted(constraints, key=lambda c: (c.e, c.v)):
        connected_ok = _connected_scan_ok(c, tuple(held), h.r)
        enum = (
            connected_bounded_edge_subsets(list(h.edges), h.r, c.e, c.v, n=h.n)
            if connected_ok
            else bounded_edge_subsets(h.edges, h.r, c.e, c.v, n=h.n)
        )
        holds = next(iter(enum), None) is None
        results[f"sparse({c.v},{c.e})"] = holds
        if holds:
            held.append(c)
    return results


def _destroy_bad_configs(
    masks: list[int], params: ConstructionParams
) -> tuple[list[int], tuple[int, ...], int]:
    """Greedy hitting-set deletion until no constrained configuration survives.

    Returns surviving masks, per-constraint configuration counts from the
    first scan, and the number of deleted edges.  Deleting edges never
    creates configurations, but a fresh scan after each deletion batch
    confirms the list is empty before returning.
    """
    n, r = params.n, params.r
    per_constraint = [0] * len(params.constraints)
    deleted_total = 0
    first_scan = True
    scan_modes = [
        _connected_scan_ok(c, params.constraints, r) for c in params.constraints
    ]
    while True:
        configs: list[tuple[int, ...]] = []
        for ci, c in enumerate(params.constraints):
            found = _scan_constraint(masks, r, n, c, scan_modes[ci])
            if first_scan:
                per_constraint[ci] = len(found)
            configs.extend(found)
        first_scan = False
        if not configs:
            break
        alive = [True] * len(configs)
        occurrences: dict[int, int] = {}
        for cfg in configs:
            for idx in cfg:
                occurrences[idx] = occurrences.get(idx, 0) + 1
        doomed: set[int] = set()
        remaining = len(configs)
        while remaining:
            victim = max(occurrences, key=lambda idx: (occurrences[idx], -idx))
            doomed.add(victim)
            for pos, cfg in enumerate(configs):
                if alive[pos] and victim in cfg:
                    alive[pos] = False
                    remaining -= 1
                    for idx in cfg:
                        occurrences[idx] -= 1
            del occurrences[victim]
        deleted_total += len(doomed)
        masks = [mask for idx, mask in enumerate(masks) if idx not in doomed]
    return masks, tuple(per_constraint), deleted_total


def alteration_outcome(params: ConstructionParams) -> BuildOutcome:
    """Sample, delete all constrained configurations, verify, and report."""
    sampled = _sample_binomial_hypergraph(params)
    masks, per_constraint, deleted = _destroy_bad_configs(list(sampled.edges), params)
    result = Hypergraph(n=params.n, r=params.r, edges=tuple(masks))
    checks = verify_sparse_family(result, params.constraints)
    for name, holds in checks.items():
        if not holds:
            raise ConstructionError(f"alteration left a {name} configuration behind")
    return BuildOutcome(
        hypergraph=result,
        params=params,
        sampled=len(sampled),
        bad_configs=per_constraint,
        edges_deleted=deleted,
        checks=checks,
    )


def alteration_construct(params: ConstructionParams) -> Hypergraph:
    """The alteration-method construction; see :func:`alteration_outcome`.

    The result is simultaneously free of every constrained configuration,
    verified before return.  An empty result is valid output, not an
    error.
    """
    return alteration_outcome(params).hypergraph


# ---------------------------------------------------------------------------
# composed builders


def cancellative_recipe(r: int, t: int) -> tuple[SparsityConstraint, SparsityConstraint]:
    """The two sparsity constraints that together force t-cancellativity."""
    if r < 3 or t < 3:
        raise HypergraphError(f"builder needs r >= 3 and t >= 3, got r={r}, t={t}")
    x = max(0, -(-(2 * r - t - 1) // (t + 2)))
    return (
        SparsityConstraint(v=t * r + x, e=t + 2),
        SparsityConstraint(v=2 * r - x - 1, e=2),
    )


def cancellative_outcome(
    n: int, r: int, t: int, seed: int, density_constant: float = 0.5
) -> BuildOutcome:
    params = ConstructionParams(
        n=n,
        r=r,
        constraints=cancellative_recipe(r, t),
        density_constant=density_constant,
        seed=seed,
    )
    outcome = alteration_outcome(params)
    verdict = check_cancellative(outcome.hypergraph, t)
    outcome.checks[f"cancellative({t})"] = verdict.holds
    if not verdict.holds:
        raise ConstructionError(
            "constraint-free hypergraph failed the cancellative check; "
            "this contradicts the construction guarantee"
        )
    return outcome


def build_cancellative(
    n: int, r: int, t: int, seed: int, density_constant: float = 0.5
) -> Hypergraph:
    """A verified t-cancellative r-graph on n vertices (r >= 3, t >= 3)."""
    return cancellative_outcome(n, r, t, seed, density_constant).hypergraph


def two_cancellative_odd_outcome(
    n: int, k: int, seed: int, density_constant: float = 0.5
) -> BuildOutcome:
    if k < 1:
        raise HypergraphError(f"k must be positive, got {k}")
    r = 2 * k + 1
    params = ConstructionParams(
        n=n,
        r=r,
        constraints=(SparsityConstraint(v=4 * k + 2, e=3),),
        density_constant=density_constant,
        seed=seed,
    )
    outcome = alteration_outcome(params)
    verdict = check_cancellative(outcome.hypergraph, 2)
    outcome.checks["cancellative(2)"] = verdict.holds
    if not verdict.holds:
        raise ConstructionError("odd-uniformity construction failed the 2-cancellative check")
    return outcome


def build_2_cancellative_odd(
    n: int, k: int, seed: int, density_constant: float = 0.5
) -> Hypergraph:
    """A verified 2-cancellative (2k+1)-graph, built from a single triple constraint."""
    return two_cancellative_odd_outcome(n, k, seed, density_constant).hypergraph


def union_free_recipe(r: int, t: int) -> tuple[SparsityConstraint, SparsityConstraint]:
    if r < 3 or t < 3:
        raise HypergraphError(f"builder needs r >= 3 and t >= 3, got r={r}, t={t}")
    return (
        SparsityConstraint(v=t * r - r, e=t),
        SparsityConstraint(v=t * r, e=2 * t),
    )


def union_free_outcome(
    n: int, r: int, t: int, seed: int, density_constant: float = 0.5
) -> BuildOutcome:
    params = ConstructionParams(
        n=n,
        r=r,
        constraints=union_free_recipe(r, t),
        density_constant=density_constant,
        seed=seed,
    )
    outcome = alteration_outcome(params)
    base = outcome.hypergraph
    if len(base) == 0:
        partition = Partition(parts=_even_partition_masks(n, r))
        extracted = base
    else:
        partition, extracted = partite_extract(base)
    # deleting edges cannot destroy sparsity, but re-verify anyway
    for name, holds in verify_sparse_family(extracted, params.constraints).items():
        outcome.checks[f"partite {name}"] = holds
        if not holds:
            raise ConstructionError("sparsity was lost while extracting the partite part")
    uf = check_union_free(extracted, t)
    while not uf.holds and len(extracted) < t:
        # with fewer than t edges the sparsity recipe does not force
        # union-freeness yet; destroy the collision directly (one more
        # alteration step, deleting the lexicographically last edge of it)
        involved = {mask_of(e, n) for e in uf.certificate.family_a + uf.certificate.family_b}
        victim = max(i for i in range(len(extracted)) if extracted.edges[i] in involved)
        kept = tuple(e for i, e in enumerate(extracted.edges) if i != victim)
        extracted = Hypergraph(n=n, r=r, edges=kept)
        outcome.edges_deleted += 1
        uf = check_union_free(extracted, t)
    outcome.checks[f"union_free({t})"] = uf.holds
    if not uf.holds:
        raise ConstructionError(
            "partite constrained hypergraph failed the union-free check; "
            "this contradicts the construction guarantee"
        )
    outcome.hypergraph = extracted
    outcome.partition = partition
    return outcome


def build_union_free(
    n: int, r: int, t: int, seed: int, density_constant: float = 0.5
) -> Hypergraph:
    """A verified t-union-free r-partite r-graph on n vertices (r >= 3, t >= 3)."""
    return union_free_outcome(n, r, t, seed, density_constant).hypergraph


# ---------------------------------------------------------------------------
# partite extraction


def _even_partition_masks(n: int, r: int) -> tuple[int, ...]:
    parts = [0] * r
    for v in range(1, n + 1):
        parts[(v - 1) % r] |= 1 << (v - 1)
    return tuple(parts)


def _falling(a: int, length: int) -> int:
    out = 1
    for i in range(length):
        out *= a - i
    return out


def partite_extract(
    h: Hypergraph,
    hint: Partition | None = None,
    method: str = "greedy",
    seed: int | None = None,
) -> tuple[Partition, Hypergraph]:
    """Split the vertices into r parts and keep the crossing edges.

    The default greedy mode assigns vertices one at a time to the part
    that maximizes the conditional expected number of crossing edges
    (computed in exact integer arithmetic), which guarantees at least
    ``ceil(r!/r^r * |H|)`` survivors.  ``method="random"`` draws a seeded
    uniform partition instead and guarantees nothing.  A ``hint``
    partition is used as-is; if ``h`` is already partite with respect to
    it, the hypergraph comes back unchanged.
    """
    if len(h) < 1:
        raise HypergraphError("partite extraction needs at least one edge")
    r, n = h.r, h.n
    if hint is not None:
        if len(hint.parts) != r:
            raise HypergraphError(f"hint must have exactly {r} parts")
        crossing = tuple(e for e in h.edges if hint.is_crossing(e))
        return hint, Hypergraph(n=n, r=r, edges=crossing)
    if method == "random":
        rng = random.Random(seed if seed is not None else 0)
        parts = [0] * r
        for v in range(1, n + 1):
            parts[_rand_below(rng, r)] |= 1 << (v - 1)
        partition = Partition(parts=tuple(parts))
        crossing = tuple(e for e in h.edges if partition.is_crossing(e))
        return partition, Hypergraph(n=n, r=r, edges=crossing)
    if method != "greedy":
        raise HypergraphError(f"unknown partite extraction method {method!r}")

    # scores are crossing probabilities scaled by r^r, so everything stays
    # in exact integers and ties break on the lowest part index
    edges_at = [[] for _ in range(n)]
    for j, mask in enumerate(h.edges):
        for v in vertices_of(mask):
            edges_at[v - 1].append(j)
    alive = [True] * len(h.edges)
    hit_parts = [0] * len(h.edges)
    unassigned = [r] * len(h.edges)
    parts = [0] * r
    for v in range(1, n + 1):
        best_part = 0
        best_score = -1
        for p in range(r):
            score = 0
            pbit = 1 << p
            for j in edges_at[v - 1]:
                if not alive[j] or hit_parts[j] & pbit:
                    continue
                d = r - unassigned[j]  # parts already hit, all distinct
                u = unassigned[j] - 1
                score += _falling(r - d - 1, u) * r ** (r - u)
            if score > best_score:
                best_score = score
                best_part = p
        pbit = 1 << best_part
        parts[best_part] |= 1 << (v - 1)
        for j in edges_at[v - 1]:
            if hit_parts[j] & pbit:
                alive[j] = False
            hit_parts[j] |= pbit
            unassigned[j] -= 1
    partition = Partition(parts=tuple(parts))
    crossing = tuple(
        mask for j, mask in enumerate(h.edges) if alive[j] and unassigned[j] == 0
    )
    return partition, Hypergraph(n=n, r=r, edges=crossing)


# ---------------------------------------------------------------------------
# codegree peeling


def codegree_peel(h: Hypergraph, p: PeelParams) -> Hypergraph:
    """Largest prefix-stable subhypergraph where every k-subset has codegree
    zero or at least s+1.

    Repeatedly removes the lexicographically first edge containing a
    k-subset of codegree at most s.  Each k-subset accounts for at most s
    removals, so the result keeps at least ``max(|H| - s*C(n,k), 0)``
    edges.
    """
    if not 1 <= p.k <= h.r:
        raise HypergraphError(f"need 1 <= k <= r, got k={p.k}, r={h.r}")
    degree: dict[tuple[int, ...], int] = {}
    edge_subsets: list[list[tuple[int, ...]]] = []
    for mask in h.edges:
        subs = list(combinations(vertices_of(mask), p.k))
        edge_subsets.append(subs)
        for sub in subs:
            degree[sub] = degree.get(sub, 0) + 1
    alive = [True] * len(h.edges)
    while True:
        victim = -1
        for j in range(len(h.edges)):
            if alive[j] and any(degree[sub] <= p.s for sub in edge_subsets[j]):
                victim = j
                break
        if victim < 0:
            break
        alive[victim] = False
        for sub in edge_subsets[victim]:
            degree[sub] -= 1
    kept = tuple(mask for j, mask in enumerate(h.edges) if alive[j])
    return Hypergraph(n=h.n, r=h.r, edges=kept)


# ---------------------------------------------------------------------------
# witness extraction


@dataclass(frozen=True)
class CancellativityWitness:
    """Edges (A_1..A_t, B_1..B_t, C, D) whose two augmented unions coincide.

    ``(∪A_i) ∪ (∪B_i) ∪ C = (∪A_i) ∪ (∪B_i) ∪ D`` with C != D certifies
    that the host hypergraph is not 2t-cancellative (t = ``t_half``).
    Edges are stored as sorted vertex tuples.
    """

    t_half: int
    k: int
    a_edges: tuple[tuple[int, ...], ...]
    b_edges: tuple[tuple[int, ...], ...]
    c_edge: tuple[int, ...]
    d_edge: tuple[int, ...]


def _equal_block_partitions(
    vertices: tuple[int, ...], k: int
) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Partitions into k-blocks, blocks ordered by least element, lexicographic."""
    if not vertices:
        yield ()
        return
    head, rest = vertices[0], vertices[1:]
    for tail_of_block in combinations(rest, k - 1):
        block = (head,) + tail_of_block
        remaining = tuple(v for v in rest if v not in tail_of_block)
        for tail in _equal_block_partitions(remaining, k):
            yield (block,) + tail


def cancellativity_witness(h: Hypergraph, t_half: int, k: int) -> CancellativityWitness:
    """Extract a tuple certifying failure of 2*t_half-cancellativity.

    Requires a ((t_half+1)*k)-uniform hypergraph with at least
    2*t_half + 2 edges in which every k-subset of vertices has codegree
    zero or at least 3.  Walks candidate base edges C, k-subsets X of C,
    and partner edges D containing X in lexicographic order, backtracking
    across the equal-block partitions of C\\X and D\\X; covering edges are
    the lexicographically first containing each block, preferring edges
    not chosen yet.  Raises :class:`WitnessError` naming the first step
    that cannot be completed.
    """
    if t_half < 1 or k < 1:
        raise WitnessError(f"need t_half >= 1 and k >= 1, got {t_half}, {k}")
    r = (t_half + 1) * k
    if h.r != r:
        raise WitnessError(
            f"hypergraph is {h.r}-uniform but t_half={t_half}, k={k} needs uniformity {r}"
        )
    if len(h) < 2 * t_half + 2:
        raise WitnessError(
            f"need at least {2 * t_half + 2} edges, hypergraph has {len(h)}"
        )
    degree: dict[tuple[int, ...], list[int]] = {}
    for j, mask in enumerate(h.edges):
        for sub in combinations(vertices_of(mask), k):
            degree.setdefault(sub, []).append(j)
    for sub, holders in degree.items():
        if len(holders) < 3:
            raise WitnessError(
                f"codegree precondition fails: {sub} has codegree {len(holders)}"
            )

    def cover_blocks(
        blocks: tuple[tuple[int, ...], ...], banned: tuple[int, int], chosen: list[int]
    ) -> list[int] | None:
        picks: list[int] = []
        for block in blocks:
            holders = [j for j in degree[block] if j not in banned]
            if not holders:
                return None
            fresh = [j for j in holders if j not in chosen and j not in picks]
            picks.append(fresh[0] if fresh else holders[0])
        return picks

    masks = h.edges
    for ci, cmask in enumerate(masks):
        cverts = vertices_of(cmask)
        for x_sub in combinations(cverts, k):
            for di in degree[x_sub]:
                if di == ci:
                    continue
                c_rest = tuple(v for v in cverts if v not in x_sub)
                d_rest = tuple(
                    v for v in vertices_of(masks[di]) if v not in x_sub
                )
                for c_blocks in _equal_block_partitions(c_rest, k):
                    a_picks = cover_blocks(c_blocks, (ci, di), [])
                    if a_picks is None:
                        continue
                    for d_blocks in _equal_block_partitions(d_rest, k):
                        b_picks = cover_blocks(d_blocks, (ci, di), a_picks)
                        if b_picks is None:
                            continue
                        return CancellativityWitness(
                            t_half=t_half,
                            k=k,
                            a_edges=tuple(h.vertex_list(j) for j in a_picks),
                            b_edges=tuple(h.vertex_list(j) for j in b_picks),
                            c_edge=cverts,
                            d_edge=h.vertex_list(di),
                        )
    raise WitnessError(
        "no base edge admits covered partitions; covering edges kept colliding with C or D"
    )


def replay_witness(h: Hypergraph, w: CancellativityWitness) -> bool:
    """Check a witness directly: all edges present, C != D, equal unions."""
    try:
        a_masks = [mask_of(e, h.n) for e in w.a_edges]
        b_masks = [mask_of(e, h.n) for e in w.b_edges]
        c_mask = mask_of(w.c_edge, h.n)
        d_mask = mask_of(w.d_edge, h.n)
    except HypergraphError:
        return False
    edge_set = set(h.edges)
    if any(mask not in edge_set for mask in a_masks + b_masks + [c_mask, d_mask]):
        return False
    if c_mask == d_mask:
        return False
    if len(a_masks) != w.t_half or len(b_masks) != w.t_half:
        return False
    if c_mask in a_masks + b_masks or d_mask in a_masks + b_masks:
        return False
    union = 0
    for mask in a_masks + b_masks:
        union |= mask
    return (union | c_mask) == (union | d_mask)
