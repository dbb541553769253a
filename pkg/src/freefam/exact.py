"""Exact maximization of family size under a property, for small parameters.

``exact_max`` runs a depth-first branch and bound over the candidate
edges in lexicographic order, maintaining the property incrementally (a
new edge only needs checks for violations it participates in, since all
four properties are closed under edge deletion).  ``naive_max``
re-derives the same maxima by enumerating families outright and
re-checking each one with the brute-force definition checkers; it is the
ground truth ``exact_max`` is tested against.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations
from math import comb

from . import checkers
from .core import Hypergraph, HypergraphError, SparsityConstraint, all_edge_masks

EXACT_CANDIDATE_GUARD = 10**6
NAIVE_CANDIDATE_GUARD = 24

PROPERTY_NAMES = ("cancellative", "union_free", "cover_free", "sparse")


@dataclass(frozen=True)
class SearchProblem:
    """What to maximize: r-graphs on n vertices under one property.

    ``t`` is required for cancellative/union_free/cover_free, ``v``/``e``
    for sparse.  ``symmetry_mode`` is ``fix_first_edge`` (default) or
    ``none``; fixing the first edge to {1..r} is sound because vertex
    relabeling preserves every property, and the lexicographically least
    maximum family always contains that edge.
    """

    n: int
    r: int
    property_name: str
    t: int | None = None
    v: int | None = None
    e: int | None = None
    time_budget: float = 60.0
    symmetry_mode: str = "fix_first_edge"

    def __post_init__(self) -> None:
        if self.property_name not in PROPERTY_NAMES:
            raise HypergraphError(f"unknown property {self.property_name!r}")
        if self.n < 1 or self.r < 1 or self.r > self.n:
            raise HypergraphError(f"need 1 <= r <= n, got r={self.r}, n={self.n}")
        if self.property_name == "sparse":
            if self.v is None or self.e is None:
                raise HypergraphError("sparse search needs v and e")
            if self.v < self.r + 1 or self.e < 2:
                raise HypergraphError(f"invalid sparse parameters v={self.v}, e={self.e}")
        else:
            if self.t is None or self.t < 1:
                raise HypergraphError(f"{self.property_name} search needs t >= 1")
        if self.symmetry_mode not in ("none", "fix_first_edge"):
            raise HypergraphError(f"unknown symmetry mode {self.symmetry_mode!r}")

    def label(self) -> str:
        if self.property_name == "sparse":
            return f"sparse({self.v},{self.e})"
        return f"{self.property_name}({self.t})"


@dataclass
class SearchResult:
    max_size: int
    witness: Hypergraph
    optimal: bool
    nodes: int


class _TimeUp(Exception):
    pass


# ---------------------------------------------------------------------------
# incremental property maintenance
#
# Each state object accepts/rejects one more edge given that the current
# family satisfies the property; try_push returns False without mutating
# on rejection.


def _cover_exists(target: int, pool: list[int], limit: int) -> bool:
    if target == 0:
        return True
    if limit == 0 or not pool:
        return False
    low = target & -target
    for idx, mask in enumerate(pool):
        if mask & low:
            rest = pool[:idx] + pool[idx + 1 :]
            if _cover_exists(target & ~mask, rest, limit - 1):
                return True
    return False


class _SparseState:
    def __init__(self, v: int, e: int):
        self.v = v
        self.e = e
        self.family: list[int] = []

    def try_push(self, mask: int) -> bool:
        # any e-subset through the new edge with a small union?
        def dig(start: int, union: int, depth: int) -> bool:
            if depth == self.e:
                return True
            for i in range(start, len(self.family)):
                nu = union | self.family[i]
                if nu.bit_count() <= self.v and dig(i + 1, nu, depth + 1):
                    return True
            return False

        if mask.bit_count() <= self.v and dig(0, mask, 1):
            return False
        self.family.append(mask)
        return True

    def pop(self) -> None:
        self.family.pop()


class _CoverFreeState:
    def __init__(self, t: int):
        self.t = t
        self.family: list[int] = []

    def try_push(self, mask: int) -> bool:
        t = self.t
        fam = self.family
        if len(fam) >= t:
            if _cover_exists(mask, fam, t):
                return False
            for i, b in enumerate(fam):
                others = fam[:i] + fam[i + 1 :]
                if _cover_exists(b & ~mask, others, t - 1):
                    return False
        fam.append(mask)
        return True

    def pop(self) -> None:
        self.family.pop()


class _CancellativeState:
    def __init__(self, t: int):
        self.t = t
        self.family: list[int] = []

    def try_push(self, mask: int) -> bool:
        t = self.t
        fam = self.family
        if len(fam) + 1 >= t + 2:
            # new edge as one of B, C
            for i, c in enumerate(fam):
                others = fam[:i] + fam[i + 1 :]
                if _cover_exists(mask ^ c, others, t):
                    return False
            # new edge covering part of an old pair's difference, or merely
            # padding the tuple up to t cover edges
            for i, j in combinations(range(len(fam)), 2):
                diff = fam[i] ^ fam[j]
                others = [fam[x] for x in range(len(fam)) if x != i and x != j]
                if _cover_exists(diff & ~mask, others, t - 1):
                    return False
        fam.append(mask)
        return True

    def pop(self) -> None:
        self.family.pop()


class _UnionFreeState:
    def __init__(self, t: int):
        self.t = t
        self.family: list[int] = []
        self.seen: set[int] = set()
        self.undo: list[list[int]] = []

    def try_push(self, mask: int) -> bool:
        fam = self.family
        fresh: list[int] = []
        fresh_set: set[int] = set()

        def extend(start: int, union: int, size: int) -> bool:
            if union in self.seen or union in fresh_set:
                return False
            fresh.append(union)
            fresh_set.add(union)
            if size == self.t:
                return True
            for i in range(start, len(fam)):
                if not extend(i + 1, union | fam[i], size + 1):
                    return False
            return True

        if not extend(0, mask, 1):
            return False
        self.seen.update(fresh)
        self.undo.append(fresh)
        fam.append(mask)
        return True

    def pop(self) -> None:
        self.family.pop()
        for union in self.undo.pop():
            self.seen.discard(union)


def _make_state(p: SearchProblem):
    if p.property_name == "sparse":
        return _SparseState(p.v, p.e)
    if p.property_name == "cover_free":
        return _CoverFreeState(p.t)
    if p.property_name == "cancellative":
        return _CancellativeState(p.t)
    return _UnionFreeState(p.t)


# ---------------------------------------------------------------------------
# searches


def exact_max(p: SearchProblem) -> SearchResult:
    """Branch-and-bound maximum family size, with the lexicographically
    least maximum family as witness.

    The result is a proven maximum when ``optimal`` is true; when the time
    budget runs out the value is a lower bound.  Guarded to candidate
    spaces of at most 10^6 edges.
    """
    total = comb(p.n, p.r)
    if total > EXACT_CANDIDATE_GUARD:
        raise HypergraphError(
            f"candidate space C({p.n},{p.r}) = {total} exceeds the search guard"
        )
    candidates = all_edge_masks(p.n, p.r)
    m = len(candidates)
    state = _make_state(p)
    best_size = 0
    best_family: list[int] = []
    nodes = 0
    deadline = time.perf_counter() + p.time_budget
    family: list[int] = []

    def walk(last: int) -> None:
        nonlocal best_size, best_family, nodes
        nodes += 1
        if nodes % 4096 == 0 and time.perf_counter() > deadline:
            raise _TimeUp
        if last == -1 and p.symmetry_mode == "fix_first_edge":
            span = range(0, min(1, m))
        else:
            span = range(last + 1, m)
        for j in span:
            if len(family) + (m - j) <= best_size:
                break
            if state.try_push(candidates[j]):
                family.append(j)
                if len(family) > best_size:
                    best_size = len(family)
                    best_family = family.copy()
                walk(j)
                family.pop()
                state.pop()

    optimal = True
    try:
        walk(-1)
    except _TimeUp:
        optimal = False
    witness = Hypergraph(
        n=p.n, r=p.r, edges=tuple(candidates[j] for j in best_family)
    )
    return SearchResult(max_size=best_size, witness=witness, optimal=optimal, nodes=nodes)


def _brute_holds(p: SearchProblem, h: Hypergraph) -> bool:
    if p.property_name == "sparse":
        return checkers.brute_force_sparse(h, SparsityConstraint(p.v, p.e)).holds
    if p.property_name == "cancellative":
        return checkers.brute_force_cancellative(h, p.t).holds
    if p.property_name == "cover_free":
        return checkers.brute_force_cover_free(h, p.t).holds
    return checkers.brute_force_union_free(h, p.t).holds


def naive_max(p: SearchProblem) -> SearchResult:
    """Ground-truth maximum by family enumeration with from-scratch checks.

    Explores every family all of whose prefixes pass the brute-force
    definition check; since the properties are closed under edge deletion
    this visits exactly the valid families.  No symmetry reduction, no
    bounding, no time budget.  Guarded to at most 24 candidate edges.
    """
    total = comb(p.n, p.r)
    if total > NAIVE_CANDIDATE_GUARD:
        raise HypergraphError(
            f"candidate space C({p.n},{p.r}) = {total} exceeds the naive guard"
        )
    candidates = all_edge_masks(p.n, p.r)
    m = len(candidates)
    best_size = 0
    best_family: list[int] = []
    nodes = 0
    family: list[int] = []

    def walk(last: int) -> None:
        nonlocal best_size, best_family, nodes
        nodes += 1
        for j in range(last + 1, m):
            family.append(j)
            h = Hypergraph(
                n=p.n, r=p.r, edges=tuple(candidates[i] for i in family)
            )
            if _brute_holds(p, h):
                if len(family) > best_size:
                    best_size = len(family)
                    best_family = family.copy()
                walk(j)
            family.pop()

    walk(-1)
    witness = Hypergraph(
        n=p.n, r=p.r, edges=tuple(candidates[j] for j in best_family)
    )
    return SearchResult(max_size=best_size, witness=witness, optimal=True, nodes=nodes)
