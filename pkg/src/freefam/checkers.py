"""Exact decision procedures for the four family properties.

Each checker returns a :class:`PropertyVerdict`; on failure the verdict
carries a replayable :class:`~freefam.core.Certificate` that is
lexicographically minimal when the certificate is an edge-index tuple
(role order: covering edges first), and first-in-enumeration-order for the
union collision search (subfamilies ordered by size, then index tuple).

The ``brute_force_*`` functions re-evaluate the property definitions by
direct quantifier enumeration.  They are exponential and intended as
independent oracles for small instances; the fast checkers must agree
with them verdict-for-verdict and certificate-for-certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

from .core import (
    Certificate,
    CertificateError,
    Hypergraph,
    HypergraphError,
    SparsityConstraint,
    bounded_edge_subsets,
    edge_index_by_vertex,
)

DEFAULT_UNION_BUDGET = 10**9


class BudgetExceededError(RuntimeError):
    """Raised instead of silently running an oversized subfamily enumeration."""


@dataclass(frozen=True)
class PropertyVerdict:
    """Pass/fail outcome; ``certificate`` is present exactly when ``holds`` is false."""

    holds: bool
    certificate: Certificate | None = None


def _role_edges(h: Hypergraph, indices: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    return tuple(h.vertex_list(i) for i in indices)


# ---------------------------------------------------------------------------
# cover search kernel


def _coverable(
    target: int,
    pool: int,
    limit: int,
    masks: Sequence[int],
    vertex_index: list[int],
    memo: dict,
) -> bool:
    """Can ``target`` be covered by at most ``limit`` edges drawn from ``pool``?

    ``pool`` is a bitmask over edge positions.  Branches on the edges
    containing the lowest uncovered vertex; memoizes (target, limit) pairs
    for the fixed pool of one query.
    """
    if target == 0:
        return True
    if limit == 0:
        return False
    key = (target, limit)
    cached = memo.get(key)
    if cached is not None:
        return cached
    low = target & -target
    cands = vertex_index[low.bit_length() - 1] & pool
    ok = False
    while cands:
        lowb = cands & -cands
        j = lowb.bit_length() - 1
        cands ^= lowb
        if _coverable(target & ~masks[j], pool, limit - 1, masks, vertex_index, memo):
            ok = True
            break
    memo[key] = ok
    return ok


# ---------------------------------------------------------------------------
# sparse


def check_sparse(h: Hypergraph, c: SparsityConstraint) -> PropertyVerdict:
    """Does every set of ``c.e`` distinct edges span at least ``c.v + 1`` vertices?

    Vacuously true when there are fewer than ``c.e`` edges.  The
    certificate is the lexicographically first e-subset of edge indices
    whose union has at most ``c.v`` vertices.
    """
    c.validate_for(h.r)
    if len(h.edges) < c.e:
        return PropertyVerdict(True)
    for subset in bounded_edge_subsets(h.edges, h.r, c.e, c.v, n=h.n):
        cert = Certificate("sparse", (c.v, c.e), edges=_role_edges(h, subset))
        return PropertyVerdict(False, cert)
    return PropertyVerdict(True)


def brute_force_sparse(h: Hypergraph, c: SparsityConstraint) -> PropertyVerdict:
    """Flat enumeration of all e-subsets; oracle for :func:`check_sparse`."""
    c.validate_for(h.r)
    masks = h.edges
    for subset in combinations(range(len(masks)), c.e):
        union = 0
        for i in subset:
            union |= masks[i]
        if union.bit_count() <= c.v:
            cert = Certificate("sparse", (c.v, c.e), edges=_role_edges(h, subset))
            return PropertyVerdict(False, cert)
    return PropertyVerdict(True)


# ---------------------------------------------------------------------------
# cancellative


def check_cancellative(h: Hypergraph, t: int) -> PropertyVerdict:
    """Is there no choice of t+2 distinct edges A_1..A_t, B, C with
    ``(∪A_i) ∪ B = (∪A_i) ∪ C``?

    The equation holds iff the symmetric difference B△C is contained in
    ∪A_i, so the search enumerates pairs (B, C) and runs a depth-limited
    cover search for B△C over the other edges.  Vacuously true with fewer
    than t+2 edges.
    """
    if t < 1:
        raise HypergraphError(f"t must be positive, got {t}")
    m = len(h.edges)
    if m < t + 2:
        return PropertyVerdict(True)
    masks = h.edges
    vertex_index = edge_index_by_vertex(masks, h.n)
    full = (1 << m) - 1
    violated = False
    for b in range(m):
        mb = masks[b]
        for c in range(b + 1, m):
            diff = mb ^ masks[c]
            pool = full & ~(1 << b) & ~(1 << c)
            if _coverable(diff, pool, t, masks, vertex_index, {}):
                violated = True
                break
        if violated:
            break
    if not violated:
        return PropertyVerdict(True)
    indices = _lexmin_cancellative(masks, vertex_index, t)
    cert = Certificate("cancellative", (t,), edges=_role_edges(h, indices))
    return PropertyVerdict(False, cert)


def _lexmin_cancellative(
    masks: Sequence[int], vertex_index: list[int], t: int
) -> tuple[int, ...]:
    """Lexicographically least violating tuple (a_1 < .. < a_t, b, c), b < c.

    Builds the A-prefix greedily; a prefix is kept only if some pair (b, c)
    outside it admits a completion from higher indices, which makes the
    first full tuple found the global minimum.
    """
    m = len(masks)
    pairs = []
    full = (1 << m) - 1
    for b in range(m):
        for c in range(b + 1, m):
            pool = full & ~(1 << b) & ~(1 << c)
            if _coverable(masks[b] ^ masks[c], pool, t, masks, vertex_index, {}):
                pairs.append((b, c, masks[b] ^ masks[c]))

    def feasible(union: int, used: int, last: int, slots: int) -> bool:
        high = full & (-1 << (last + 1))
        for b, c, diff in pairs:
            bc = (1 << b) | (1 << c)
            if bc & used:
                continue
            pool = high & ~bc
            if pool.bit_count() < slots:
                continue
            if _coverable(diff & ~union, pool, slots, masks, vertex_index, {}):
                return True
        return False

    prefix: list[int] = []
    union = 0
    used = 0
    last = -1
    while len(prefix) < t:
        slots = t - len(prefix) - 1
        for j in range(last + 1, m):
            if feasible(union | masks[j], used | (1 << j), j, slots):
                prefix.append(j)
                union |= masks[j]
                used |= 1 << j
                last = j
                break
        else:  # pragma: no cover - guarded by the violation existence check
            raise RuntimeError("certificate reconstruction lost the violation")
    for b in range(m):
        if used >> b & 1:
            continue
        for c in range(b + 1, m):
            if used >> c & 1:
                continue
            if (masks[b] ^ masks[c]) & ~union == 0:
                return tuple(prefix) + (b, c)
    raise RuntimeError("certificate reconstruction lost the violation")  # pragma: no cover


def brute_force_cancellative(h: Hypergraph, t: int) -> PropertyVerdict:
    """Direct enumeration of all (t+2)-tuples; oracle for :func:`check_cancellative`."""
    if t < 1:
        raise HypergraphError(f"t must be positive, got {t}")
    masks = h.edges
    m = len(masks)
    if m < t + 2:
        return PropertyVerdict(True)
    for a_set in combinations(range(m), t):
        union = 0
        for i in a_set:
            union |= masks[i]
        rest = [j for j in range(m) if j not in a_set]
        for b, c in combinations(rest, 2):
            if (masks[b] ^ masks[c]) & ~union == 0:
                cert = Certificate("cancellative", (t,), edges=_role_edges(h, a_set + (b, c)))
                return PropertyVerdict(False, cert)
    return PropertyVerdict(True)


# ---------------------------------------------------------------------------
# cover-free


def check_cover_free(h: Hypergraph, t: int) -> PropertyVerdict:
    """Is no edge contained in the union of t other edges?

    Vacuously true with at most t edges.  Certificate role order is
    (A_1..A_t, B) with B the covered edge.
    """
    if t < 1:
        raise HypergraphError(f"t must be positive, got {t}")
    m = len(h.edges)
    if m < t + 1:
        return PropertyVerdict(True)
    masks = h.edges
    vertex_index = edge_index_by_vertex(masks, h.n)
    full = (1 << m) - 1
    violated = False
    for b in range(m):
        pool = full & ~(1 << b)
        if _coverable(masks[b], pool, t, masks, vertex_index, {}):
            violated = True
            break
    if not violated:
        return PropertyVerdict(True)
    indices = _lexmin_cover_free(masks, vertex_index, t)
    cert = Certificate("cover_free", (t,), edges=_role_edges(h, indices))
    return PropertyVerdict(False, cert)


def _lexmin_cover_free(
    masks: Sequence[int], vertex_index: list[int], t: int
) -> tuple[int, ...]:
    m = len(masks)
    full = (1 << m) - 1
    targets = []
    for b in range(m):
        pool = full & ~(1 << b)
        if _coverable(masks[b], pool, t, masks, vertex_index, {}):
            targets.append(b)

    def feasible(union: int, used: int, last: int, slots: int) -> bool:
        high = full & (-1 << (last + 1))
        for b in targets:
            if used >> b & 1:
                continue
            pool = high & ~(1 << b)
            if pool.bit_count() < slots:
                continue
            if _coverable(masks[b] & ~union, pool, slots, masks, vertex_index, {}):
                return True
        return False

    prefix: list[int] = []
    union = 0
    used = 0
    last = -1
    while len(prefix) < t:
        slots = t - len(prefix) - 1
        for j in range(last + 1, m):
            if feasible(union | masks[j], used | (1 << j), j, slots):
                prefix.append(j)
                union |= masks[j]
                used |= 1 << j
                last = j
                break
        else:  # pragma: no cover
            raise RuntimeError("certificate reconstruction lost the violation")
    for b in range(m):
        if not used >> b & 1 and masks[b] & ~union == 0:
            return tuple(prefix) + (b,)
    raise RuntimeError("certificate reconstruction lost the violation")  # pragma: no cover


def brute_force_cover_free(h: Hypergraph, t: int) -> PropertyVerdict:
    """Direct enumeration of all (t+1)-tuples; oracle for :func:`check_cover_free`."""
    if t < 1:
        raise HypergraphError(f"t must be positive, got {t}")
    masks = h.edges
    m = len(masks)
    if m < t + 1:
        return PropertyVerdict(True)
    for a_set in combinations(range(m), t):
        union = 0
        for i in a_set:
            union |= masks[i]
        for b in range(m):
            if b in a_set:
                continue
            if masks[b] & ~union == 0:
                cert = Certificate("cover_free", (t,), edges=_role_edges(h, a_set + (b,)))
                return PropertyVerdict(False, cert)
    return PropertyVerdict(True)


# ---------------------------------------------------------------------------
# union-free


def _subfamily_count(m: int, t: int) -> int:
    return sum(comb(m, a) for a in range(1, min(t, m) + 1))


def _iter_subfamilies(masks: Sequence[int], max_size: int):
    """(index tuple, union mask) for all subfamilies of size 1..max_size.

    Ordered by size, then lexicographically by index tuple; partial unions
    are shared along prefixes.
    """
    m = len(masks)
    prefix: list[int] = []

    def rec(union: int, last: int, size: int):
        for j in range(last + 1, m):
            nu = union | masks[j]
            prefix.append(j)
            if len(prefix) == size:
                yield tuple(prefix), nu
            else:
                yield from rec(nu, j, size)
            prefix.pop()

    for size in range(1, min(max_size, m) + 1):
        yield from rec(0, -1, size)


def check_union_free(
    h: Hypergraph, t: int, budget: int = DEFAULT_UNION_BUDGET
) -> PropertyVerdict:
    """Do no two distinct subfamilies of at most t edges have equal unions?

    Subfamily sizes are capped at ``min(t, |H|)``.  Enumeration inserts
    union masks into a hash set in (size, lex) order; the first collision
    yields the certificate, with ``family_a`` the earlier subfamily.
    Raises :class:`BudgetExceededError` when the total number of
    subfamilies exceeds ``budget``.
    """
    if t < 1:
        raise HypergraphError(f"t must be positive, got {t}")
    m = len(h.edges)
    if m <= 1:
        return PropertyVerdict(True)
    total = _subfamily_count(m, t)
    if total > budget:
        raise BudgetExceededError(
            f"union-free check needs {total} subfamily evaluations, over the budget of {budget}"
        )
    seen: set[int] = set()
    collision: tuple[tuple[int, ...], int] | None = None
    for tup, union in _iter_subfamilies(h.edges, t):
        if union in seen:
            collision = (tup, union)
            break
        seen.add(union)
    if collision is None:
        return PropertyVerdict(True)
    later, target = collision
    for tup, union in _iter_subfamilies(h.edges, t):
        if union == target:
            cert = Certificate(
                "union_free",
                (t,),
                family_a=_role_edges(h, tup),
                family_b=_role_edges(h, later),
            )
            return PropertyVerdict(False, cert)
    raise RuntimeError("union collision vanished on replay")  # pragma: no cover


def brute_force_union_free(h: Hypergraph, t: int) -> PropertyVerdict:
    """Pairwise comparison of all subfamilies; oracle for :func:`check_union_free`."""
    if t < 1:
        raise HypergraphError(f"t must be positive, got {t}")
    fams = list(_iter_subfamilies(h.edges, t))
    for i, (tup_b, union_b) in enumerate(fams):
        for tup_a, union_a in fams[:i]:
            if union_a == union_b:
                cert = Certificate(
                    "union_free",
                    (t,),
                    family_a=_role_edges(h, tup_a),
                    family_b=_role_edges(h, tup_b),
                )
                return PropertyVerdict(False, cert)
    return PropertyVerdict(True)


# ---------------------------------------------------------------------------
# replay


def replay_certificate(h: Hypergraph, cert: Certificate) -> bool:
    """Re-evaluate the violation a certificate claims, directly from definitions.

    Returns True iff the certificate exhibits the claimed violation against
    ``h``.  Raises :class:`~freefam.core.CertificateError` when a
    referenced edge is not an edge of ``h``; returns False (rather than
    raising) when the tuple is structurally wrong, e.g. repeated edges
    where distinct ones are required.
    """
    def lookup(vertex_tuple: tuple[int, ...]) -> int:
        bad = CertificateError(
            f"certificate edge {tuple(vertex_tuple)} is not an edge of the hypergraph"
        )
        mask = 0
        for v in vertex_tuple:
            if not (isinstance(v, int) and 1 <= v <= h.n):
                raise bad
            mask |= 1 << (v - 1)
        if mask not in h.edges:
            raise bad
        return mask

    if cert.kind == "sparse":
        v, e = cert.params
        masks = [lookup(ed) for ed in cert.edges]
        if len(masks) != e or len(set(masks)) != e:
            return False
        union = 0
        for mask in masks:
            union |= mask
        return union.bit_count() <= v

    if cert.kind == "cancellative":
        (t,) = cert.params
        masks = [lookup(ed) for ed in cert.edges]
        if len(masks) != t + 2 or len(set(masks)) != t + 2:
            return False
        union = 0
        for mask in masks[:t]:
            union |= mask
        b, c = masks[t], masks[t + 1]
        return (union | b) == (union | c)

    if cert.kind == "cover_free":
        (t,) = cert.params
        masks = [lookup(ed) for ed in cert.edges]
        if len(masks) != t + 1 or len(set(masks)) != t + 1:
            return False
        union = 0
        for mask in masks[:t]:
            union |= mask
        return masks[t] & ~union == 0

    if cert.kind == "union_free":
        (t,) = cert.params
        fam_a = [lookup(ed) for ed in cert.family_a]
        fam_b = [lookup(ed) for ed in cert.family_b]
        if not (1 <= len(fam_a) <= t and 1 <= len(fam_b) <= t):
            return False
        if len(set(fam_a)) != len(fam_a) or len(set(fam_b)) != len(fam_b):
            return False
        if set(fam_a) == set(fam_b):
            return False
        union_a = 0
        for mask in fam_a:
            union_a |= mask
        union_b = 0
        for mask in fam_b:
            union_b |= mask
        return union_a == union_b

    raise HypergraphError(f"unknown certificate kind {cert.kind!r}")
