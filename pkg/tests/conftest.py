"""Shared helpers: seeded random hypergraph generators for the test corpora."""

from __future__ import annotations

import random
from itertools import combinations

from freefam import Hypergraph, Partition, make_hypergraph


def random_hypergraph(rng: random.Random, n: int, r: int, m: int) -> Hypergraph:
    """Uniformly random set of m distinct r-edges on 1..n."""
    pool = list(combinations(range(1, n + 1), r))
    return make_hypergraph(n, r, rng.sample(pool, min(m, len(pool))))


def random_partition(rng: random.Random, n: int, r: int) -> Partition:
    """Random split of 1..n into r nonempty parts (needs n >= r)."""
    verts = list(range(1, n + 1))
    rng.shuffle(verts)
    parts = [0] * r
    for i in range(r):
        parts[i] |= 1 << (verts[i] - 1)
    for v in verts[r:]:
        parts[rng.randrange(r)] |= 1 << (v - 1)
    return Partition(parts=tuple(parts))


def low_intersection_hypergraph(
    rng: random.Random, n: int, r: int, m: int, cap: int
) -> Hypergraph:
    """Greedy random family whose edges pairwise share at most ``cap`` vertices.

    Such families satisfy demanding span constraints far more often than
    uniform samples, giving implication suites non-vacuous coverage.
    """
    pool = list(combinations(range(1, n + 1), r))
    rng.shuffle(pool)
    masks: list[int] = []
    chosen: list[tuple[int, ...]] = []
    for tup in pool:
        mask = 0
        for v in tup:
            mask |= 1 << (v - 1)
        if all((mask & other).bit_count() <= cap for other in masks):
            masks.append(mask)
            chosen.append(tup)
            if len(chosen) == m:
                break
    return make_hypergraph(n, r, chosen)


def random_partite_hypergraph(
    rng: random.Random, n: int, r: int, m: int
) -> tuple[Partition, Hypergraph]:
    """Random r-partite hypergraph: every edge picks one vertex per part."""
    partition = random_partition(rng, n, r)
    part_vertices = partition.part_vertices()
    edges: set[tuple[int, ...]] = set()
    attempts = 0
    while len(edges) < m and attempts < 40 * m + 40:
        attempts += 1
        edges.add(tuple(sorted(rng.choice(part) for part in part_vertices)))
    return partition, make_hypergraph(n, r, sorted(edges))
