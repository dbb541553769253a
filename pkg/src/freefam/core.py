"""Bitmask hypergraphs, canonical text I/O, and bounded-union enumeration.

Vertices are numbered 1..n in every public interface.  Internally an edge
is a single int bitmask with bit v-1 set for vertex v, so set algebra on
edges reduces to and/or/xor/popcount on machine words.  ``Hypergraph``
values are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import IO, Iterable, Iterator, Sequence

MAX_VERTICES = 4096

HEADER_LINE = "# hypergraph v1"
_HEADER_RE = re.compile(r"^n=(\d+) r=(\d+) m=(\d+)$")


class HypergraphError(ValueError):
    """Invalid hypergraph construction or use."""


class FormatError(HypergraphError):
    """Malformed hypergraph text."""


class CertificateError(HypergraphError):
    """Certificate refers to edges that are not part of the hypergraph."""


def vertices_of(mask: int) -> tuple[int, ...]:
    """Set bits of ``mask`` as increasing 1-based vertex ids."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return tuple(out)


def mask_of(vertices: Iterable[int], n: int) -> int:
    """Bitmask for a collection of vertex ids, validated against 1..n."""
    mask = 0
    for v in vertices:
        if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= n:
            raise HypergraphError(f"vertex {v!r} out of range 1..{n}")
        mask |= 1 << (v - 1)
    return mask


@dataclass(frozen=True)
class Hypergraph:
    """An r-uniform hypergraph on vertices 1..n with edges in canonical order.

    Canonical order is lexicographic on the sorted vertex lists of the
    edges; all operations in this package preserve it.  ``edges`` holds the
    bitmasks.  Use :func:`make_hypergraph` instead of constructing directly
    unless the input is already validated and ordered.
    """

    n: int
    r: int
    edges: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.edges)

    def vertex_list(self, index: int) -> tuple[int, ...]:
        """Vertices of the edge at ``index``."""
        return vertices_of(self.edges[index])

    def vertex_lists(self) -> list[tuple[int, ...]]:
        return [vertices_of(e) for e in self.edges]

    def index_of(self, mask: int) -> int:
        """Position of an edge bitmask, or raise ``CertificateError``."""
        try:
            return self.edges.index(mask)
        except ValueError:
            raise CertificateError(
                f"edge {vertices_of(mask)} is not an edge of the hypergraph"
            ) from None


@dataclass(frozen=True)
class Partition:
    """A split of (a subset of) the vertices into r pairwise disjoint parts.

    An edge is *crossing* when it meets every part in exactly one vertex.
    Parts are stored as bitmasks.
    """

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        seen = 0
        for p in self.parts:
            if p & seen:
                raise HypergraphError("partition parts are not pairwise disjoint")
            seen |= p

    def part_vertices(self) -> list[tuple[int, ...]]:
        return [vertices_of(p) for p in self.parts]

    def is_crossing(self, edge_mask: int) -> bool:
        return all((edge_mask & p).bit_count() == 1 for p in self.parts)


@dataclass(frozen=True)
class SparsityConstraint:
    """Demands that every ``e`` distinct edges span at least ``v + 1`` vertices.

    Validity relative to a uniformity r (``v >= r + 1``) is checked where a
    hypergraph is available; ``e >= 2`` and ``v >= 1`` always hold.
    """

    v: int
    e: int

    def __post_init__(self) -> None:
        if self.v < 1:
            raise HypergraphError(f"constraint needs v >= 1, got v={self.v}")
        if self.e < 2:
            raise HypergraphError(f"constraint needs e >= 2, got e={self.e}")

    def validate_for(self, r: int) -> None:
        if self.v < r + 1:
            raise HypergraphError(
                f"constraint (v={self.v}, e={self.e}) invalid for uniformity r={r}: "
                f"needs v >= r + 1"
            )


@dataclass(frozen=True)
class Certificate:
    """An explicit violating edge tuple for one of the four properties.

    ``kind`` is one of ``cancellative``, ``union_free``, ``cover_free``,
    ``sparse``.  Edges are recorded as sorted vertex tuples in role order:

    - cancellative(t): ``edges = (A_1, .., A_t, B, C)``
    - cover_free(t):   ``edges = (A_1, .., A_t, B)``
    - sparse(v, e):    ``edges`` is the violating e-subset
    - union_free(t):   ``family_a`` and ``family_b`` carry the two
      subfamilies with equal unions; ``edges`` is empty.
    """

    kind: str
    params: tuple[int, ...]
    edges: tuple[tuple[int, ...], ...] = ()
    family_a: tuple[tuple[int, ...], ...] = ()
    family_b: tuple[tuple[int, ...], ...] = ()

    def as_dict(self) -> dict:
        out: dict = {"kind": self.kind, "params": list(self.params)}
        if self.kind == "union_free":
            out["family_a"] = [list(e) for e in self.family_a]
            out["family_b"] = [list(e) for e in self.family_b]
        else:
            out["edges"] = [list(e) for e in self.edges]
        return out


def make_hypergraph(n: int, r: int, edges: Iterable[Iterable[int]]) -> Hypergraph:
    """Validate and canonicalize an edge list into a :class:`Hypergraph`.

    Rejects edges of the wrong size, vertices outside 1..n, and duplicate
    edges.  The result stores edges sorted lexicographically by their
    vertex lists.
    """
    if not 1 <= n <= MAX_VERTICES:
        raise HypergraphError(f"vertex count must be in 1..{MAX_VERTICES}, got {n}")
    if not 1 <= r <= n:
        raise HypergraphError(f"uniformity must satisfy 1 <= r <= n, got r={r}, n={n}")
    masks = []
    for ed in edges:
        vs = tuple(ed)
        mask = mask_of(vs, n)
        if mask.bit_count() != r or len(set(vs)) != r:
            raise HypergraphError(f"edge {sorted(set(vs))} does not have exactly {r} vertices")
        masks.append(mask)
    if len(set(masks)) != len(masks):
        seen: set[int] = set()
        for mask in masks:
            if mask in seen:
                raise HypergraphError(f"duplicate edge {vertices_of(mask)}")
            seen.add(mask)
    masks.sort(key=vertices_of)
    return Hypergraph(n=n, r=r, edges=tuple(masks))


def write_hypergraph(h: Hypergraph) -> str:
    """Render the canonical text form (LF line endings, trailing newline)."""
    lines = [HEADER_LINE, f"n={h.n} r={h.r} m={len(h.edges)}"]
    for mask in h.edges:
        lines.append(" ".join(str(v) for v in vertices_of(mask)))
    return "\n".join(lines) + "\n"


def read_hypergraph(source: str | IO[str]) -> Hypergraph:
    """Parse the text form produced by :func:`write_hypergraph`.

    ``read(write(h))`` returns a hypergraph equal to ``h`` bit for bit.
    Edge lines may appear in any order; the result is canonicalized.
    """
    text = source.read() if hasattr(source, "read") else source
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines or lines[0].strip() != HEADER_LINE:
        raise FormatError(f"missing header line {HEADER_LINE!r}")
    if len(lines) < 2:
        raise FormatError("missing size line 'n=<n> r=<r> m=<m>'")
    m_header = _HEADER_RE.match(lines[1].strip())
    if not m_header:
        raise FormatError(f"malformed size line: {lines[1]!r}")
    n, r, m = (int(g) for g in m_header.groups())
    edge_lines = lines[2:]
    if len(edge_lines) != m:
        raise FormatError(f"header claims m={m} edges but found {len(edge_lines)} edge lines")
    rows = []
    for i, line in enumerate(edge_lines):
        tokens = line.split()
        if len(tokens) != r:
            raise FormatError(f"edge line {i + 1}: expected {r} vertices, got {len(tokens)}")
        try:
            verts = [int(tok) for tok in tokens]
        except ValueError:
            raise FormatError(f"edge line {i + 1}: non-integer vertex in {line!r}") from None
        if any(b <= a for a, b in zip(verts, verts[1:])):
            raise FormatError(f"edge line {i + 1}: vertices must be strictly increasing")
        rows.append(verts)
    return make_hypergraph(n, r, rows)


def enumerate_extensions(
    h: Hypergraph, prefix: Sequence[int], bound: int
) -> Iterator[int]:
    """Yield edge indices that extend ``prefix`` without the union exceeding ``bound``.

    ``prefix`` is a strictly increasing list of edge indices whose union
    has at most ``bound`` vertices; yields every j greater than the last
    prefix index with ``|union(prefix) ∪ edge_j| <= bound``.
    """
    union = 0
    last = -1
    for idx in prefix:
        if not 0 <= idx < len(h.edges):
            raise HypergraphError(f"prefix index {idx} out of range")
        if idx <= last:
            raise HypergraphError("prefix indices must be strictly increasing")
        union |= h.edges[idx]
        last = idx
    if union.bit_count() > bound:
        raise HypergraphError("prefix union already exceeds the bound")
    for j in range(last + 1, len(h.edges)):
        if (union | h.edges[j]).bit_count() <= bound:
            yield j


def edge_index_by_vertex(masks: Sequence[int], n: int) -> list[int]:
    """Per-vertex bitmask over edge positions: bit j set iff edge j contains the vertex."""
    index = [0] * n
    for j, mask in enumerate(masks):
        mm = mask
        while mm:
            low = mm & -mm
            index[low.bit_length() - 1] |= 1 << j
            mm ^= low
    return index


def bounded_edge_subsets(
    masks: Sequence[int],
    r: int,
    size: int,
    bound: int,
    vertex_index: list[int] | None = None,
    n: int | None = None,
) -> Iterator[tuple[int, ...]]:
    """All ``size``-subsets of edges whose union has at most ``bound`` vertices.

    Yields index tuples in lexicographic order.  Extending a prefix can
    only grow its union, so the search prunes any prefix already over the
    bound; when the bound still leaves room for a disjoint edge the fan-out
    is unrestricted, otherwise candidates come from an inverted
    vertex-to-edges index.
    """
    m = len(masks)
    if size <= 0 or m < size or bound < r:
        return
    if vertex_index is None:
        if n is None:
            n = max(mask.bit_length() for mask in masks)
        vertex_index = edge_index_by_vertex(masks, n)
    prefix: list[int] = []

    def extend(union: int, ucount: int, last: int) -> Iterator[tuple[int, ...]]:
        depth = len(prefix)
        overlap_needed = r - (bound - ucount)
        if overlap_needed <= 0:
            for j in range(last + 1, m):
                nu = union | masks[j]
                prefix.append(j)
                if depth + 1 == size:
                    yield tuple(prefix)
                else:
                    yield from extend(nu, nu.bit_count(), j)
                prefix.pop()
            return
        cands = 0
        mm = union
        while mm:
            low = mm & -mm
            cands |= vertex_index[low.bit_length() - 1]
            mm ^= low
        cands &= -1 << (last + 1)
        while cands:
            lowb = cands & -cands
            j = lowb.bit_length() - 1
            cands ^= lowb
            nu = union | masks[j]
            nc = nu.bit_count()
            if nc <= bound:
                prefix.append(j)
                if depth + 1 == size:
                    yield tuple(prefix)
                else:
                    yield from extend(nu, nc, j)
                prefix.pop()

    yield from extend(0, 0, -1)


def edge_neighbor_masks(
    masks: Sequence[int], n: int, vertex_index: list[int] | None = None
) -> list[int]:
    """For each edge, the bitmask of edge positions it shares a vertex with
    (including itself)."""
    if vertex_index is None:
        vertex_index = edge_index_by_vertex(masks, n)
    neighbors = []
    for mask in masks:
        nb = 0
        mm = mask
        while mm:
            low = mm & -mm
            nb |= vertex_index[low.bit_length() - 1]
            mm ^= low
        neighbors.append(nb)
    return neighbors


def connected_bounded_edge_subsets(
    masks: Sequence[int],
    r: int,
    size: int,
    bound: int,
    neighbor_masks: list[int] | None = None,
    n: int | None = None,
) -> Iterator[tuple[int, ...]]:
    """``size``-subsets with union of at most ``bound`` vertices that are
    *connected* in the edge-intersection graph.

    Yields each qualifying subset exactly once as a sorted index tuple
    (generated from its least index; an explored branch point is excluded
    from its siblings, the standard connected-subgraph enumeration).
    Subsets with a vertex-disjoint split are not produced; callers must
    establish separately that those cannot occur.
    """
    m = len(masks)
    if size <= 0 or m < size or bound < r:
        return
    if neighbor_masks is None:
        if n is None:
            n = max(mask.bit_length() for mask in masks)
        neighbor_masks = edge_neighbor_masks(masks, n)

    def grow(
        chosen: list[int], union: int, frontier: int, excluded: int, high: int
    ) -> Iterator[tuple[int, ...]]:
        # chosen edges and all previously branched siblings sit in `excluded`,
        # so each connected superset is produced exactly once
        cands = frontier & ~excluded
        while cands:
            lowb = cands & -cands
            j = lowb.bit_length() - 1
            cands ^= lowb
            excluded |= lowb
            nu = union | masks[j]
            if nu.bit_count() <= bound:
                chosen.append(j)
                if len(chosen) == size:
                    yield tuple(sorted(chosen))
                else:
                    yield from grow(
                        chosen, nu, (frontier | neighbor_masks[j]) & high, excluded, high
                    )
                chosen.pop()

    for root in range(m):
        high = -1 << (root + 1)
        yield from grow([root], masks[root], neighbor_masks[root] & high, 0, high)


def all_edge_masks(n: int, r: int) -> list[int]:
    """Every r-subset of 1..n as a bitmask, in canonical (lexicographic) order."""
    return [sum(1 << (v - 1) for v in tup) for tup in combinations(range(1, n + 1), r)]


def combination_from_rank(rank: int, n: int, r: int) -> tuple[int, ...]:
    """The ``rank``-th r-subset of 1..n in lexicographic order (0-based rank)."""
    if not 0 <= rank < comb(n, r):
        raise ValueError(f"rank {rank} out of range for C({n},{r})")
    verts = []
    x = 1
    remaining = r
    while remaining:
        cnt = comb(n - x, remaining - 1)
        if rank < cnt:
            verts.append(x)
            remaining -= 1
        else:
            rank -= cnt
        x += 1
    return tuple(verts)
