"""Exact search: oracle agreement, closed forms, ordering laws."""

import random
from math import comb

import pytest

import freefam as ff
from freefam import SparsityConstraint
from freefam.exact import SearchProblem, exact_max, naive_max

from conftest import random_hypergraph


def problem(n, r, name, **kw):
    return SearchProblem(n=n, r=r, property_name=name, **kw)


def holds(p: SearchProblem, h) -> bool:
    if p.property_name == "sparse":
        return ff.check_sparse(h, SparsityConstraint(p.v, p.e)).holds
    check = {
        "cancellative": ff.check_cancellative,
        "union_free": ff.check_union_free,
        "cover_free": ff.check_cover_free,
    }[p.property_name]
    return check(h, p.t).holds


def test_matching_maximum():
    p = problem(6, 2, "sparse", v=3, e=2)
    result = exact_max(p)
    assert result.max_size == 3
    assert result.witness.vertex_lists() == [(1, 2), (3, 4), (5, 6)]
    assert naive_max(p).max_size == 3


def test_small_matching_maximum():
    assert naive_max(problem(4, 2, "sparse", v=3, e=2)).max_size == 2


def test_cancellative_matches_full_enumeration():
    p = problem(4, 2, "cancellative", t=1)
    ex, nv = exact_max(p), naive_max(p)
    assert ex.max_size == nv.max_size
    assert ex.witness == nv.witness


def test_union_free_t1_takes_every_edge():
    for n, r in ((5, 2), (6, 3)):
        p = problem(n, r, "union_free", t=1)
        assert exact_max(p).max_size == comb(n, r)


def test_cover_free_t1_takes_every_edge():
    p = problem(4, 2, "cover_free", t=1)
    assert exact_max(p).max_size == 6
    assert naive_max(p).max_size == 6


def test_exact_agrees_with_naive_battery():
    battery = [
        problem(5, 2, "sparse", v=3, e=2),
        problem(6, 2, "sparse", v=4, e=3),
        problem(5, 2, "cancellative", t=1),
        problem(5, 2, "cancellative", t=2),
        problem(5, 2, "union_free", t=2),
        problem(5, 2, "cover_free", t=2),
        problem(5, 3, "sparse", v=4, e=2),
        problem(5, 3, "cancellative", t=1),
        problem(5, 3, "union_free", t=2),
        problem(5, 3, "cover_free", t=2),
    ]
    for p in battery:
        ex, nv = exact_max(p), naive_max(p)
        assert ex.optimal and nv.optimal
        assert ex.max_size == nv.max_size, p.label()
        assert ex.witness == nv.witness, p.label()
        assert holds(p, ex.witness)
        assert len(ex.witness) == ex.max_size


def test_symmetry_reduction_changes_nothing():
    for p_sym in (
        problem(6, 2, "sparse", v=3, e=2),
        problem(5, 2, "union_free", t=2),
        problem(5, 3, "cover_free", t=2),
    ):
        p_none = SearchProblem(
            n=p_sym.n,
            r=p_sym.r,
            property_name=p_sym.property_name,
            t=p_sym.t,
            v=p_sym.v,
            e=p_sym.e,
            symmetry_mode="none",
        )
        a, b = exact_max(p_sym), exact_max(p_none)
        assert a.max_size == b.max_size
        assert a.witness == b.witness
        assert a.nodes <= b.nodes


def test_witness_always_replays():
    rng = random.Random(5)
    for _ in range(12):
        n = rng.randint(4, 6)
        r = rng.randint(2, 3)
        name = rng.choice(("sparse", "cancellative", "union_free", "cover_free"))
        if name == "sparse":
            p = problem(n, r, name, v=rng.randint(r + 1, 2 * r), e=rng.randint(2, 3))
        else:
            p = problem(n, r, name, t=rng.randint(1, 2))
        result = exact_max(p)
        assert holds(p, result.witness)


def test_hereditarity_of_all_properties():
    rng = random.Random(7)
    for _ in range(120):
        n = rng.randint(4, 9)
        r = rng.randint(2, 3)
        h = random_hypergraph(rng, n, r, rng.randint(1, 9))
        name = rng.choice(("sparse", "cancellative", "union_free", "cover_free"))
        if name == "sparse":
            p = problem(n, r, name, v=rng.randint(r + 1, 2 * r + 1), e=rng.randint(2, 3))
        else:
            p = problem(n, r, name, t=rng.randint(1, 3))
        if not holds(p, h):
            continue
        drop = rng.randrange(len(h))
        sub = ff.Hypergraph(
            n=n, r=r, edges=tuple(e for i, e in enumerate(h.edges) if i != drop)
        )
        assert holds(p, sub)


def test_monotone_in_n_and_sandwich():
    # tables over n for r=2: monotone growth plus the two-sided translation
    # between cover-free, cancellative, and union-free maxima
    t = 2
    cover_plus = [exact_max(problem(n, 2, "cover_free", t=t + 1)).max_size for n in range(3, 7)]
    canc = [exact_max(problem(n, 2, "cancellative", t=t)).max_size for n in range(3, 7)]
    cover = [exact_max(problem(n, 2, "cover_free", t=t)).max_size for n in range(3, 7)]
    union = [exact_max(problem(n, 2, "union_free", t=t)).max_size for n in range(3, 7)]
    cover_minus = [exact_max(problem(n, 2, "cover_free", t=t - 1)).max_size for n in range(3, 7)]
    for series in (cover_plus, canc, cover, union, cover_minus):
        assert all(a <= b for a, b in zip(series, series[1:]))
    assert all(fp <= c for fp, c in zip(cover_plus, canc))
    assert all(f <= u for f, u in zip(cover, union))
    assert all(u <= fm for u, fm in zip(union, cover_minus))


def test_guards():
    with pytest.raises(ff.HypergraphError, match="guard"):
        naive_max(problem(8, 2, "sparse", v=3, e=2))  # C(8,2)=28 > 24
    with pytest.raises(ff.HypergraphError):
        SearchProblem(n=5, r=2, property_name="unknown")
    with pytest.raises(ff.HypergraphError):
        SearchProblem(n=5, r=2, property_name="sparse")  # v, e missing
    with pytest.raises(ff.HypergraphError):
        SearchProblem(n=5, r=2, property_name="cancellative")  # t missing


def test_budget_exhaustion_reports_lower_bound():
    p = SearchProblem(n=10, r=2, property_name="union_free", t=2, time_budget=0.0)
    result = exact_max(p)
    assert not result.optimal
    assert result.max_size >= 1  # best found so far is still a valid family


def test_results_are_deterministic():
    p = problem(6, 2, "union_free", t=2)
    a, b = exact_max(p), exact_max(p)
    assert (a.max_size, a.witness, a.nodes) == (b.max_size, b.witness, b.nodes)
