import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from besk.configs import (
    EdgeStore,
    FreenessReport,
    NodeCounter,
    contains_config,
    extension_ok,
    gk_family,
    incremental_free_check,
    is_Gk_free,
    iter_configs,
    repair_free,
)
from besk.core import HyperGraph
from besk.errors import BudgetExceeded
from conftest import hypergraphs


def test_diamond_is_a_4_2_configuration(diamond3):
    w = contains_config(diamond3, 4, 2)
    assert w is not None and w.edge_indices == (0, 1) and w.span == 4
    assert w.to_json() == {"family": {"s": 4, "k": 2}, "edges": [0, 1], "span": 4}


def test_fano_is_4_2_free(fano):
    assert contains_config(fano, 4, 2) is None
    # any three lines of the Fano plane span at most 6 points
    assert contains_config(fano, 6, 3) is not None


def test_gk_family_order():
    assert gk_family(3, 4) == [(3, 2, "minus"), (4, 3, "minus"), (6, 4, "k")]
    assert gk_family(4, 6) == [(5, 2, "minus"), (7, 3, "minus"), (9, 4, "minus"), (11, 5, "minus"), (14, 6, "k")]


def test_diamond_freeness_by_k(diamond3, diamond4):
    rep = is_Gk_free(diamond3, 2)
    assert not rep.free and rep.kind == "k" and rep.violation.span == 4
    assert is_Gk_free(diamond4, 4).free
    assert is_Gk_free(diamond4, 6).free


def test_report_consistency():
    with pytest.raises(ValueError):
        FreenessReport(True, violation=object())
    with pytest.raises(ValueError):
        FreenessReport(False)


def test_invalid_k():
    with pytest.raises(ValueError):
        contains_config(HyperGraph(3, 3, ((0, 1, 2),)), 3, 0)
    with pytest.raises(ValueError):
        is_Gk_free(HyperGraph(3, 3, ((0, 1, 2),)), 1)


K6 = HyperGraph(6, 3, tuple(combinations(range(6), 3)))


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded) as info:
        list(iter_configs(K6, 6, 3, budget=3))
    assert info.value.nodes > 3
    assert len(list(iter_configs(K6, 6, 3, budget=10**6))) == 1140


def test_budget_env(monkeypatch):
    monkeypatch.setenv("BESK_BUDGET", "2")
    with pytest.raises(BudgetExceeded):
        list(iter_configs(K6, 6, 3))
    monkeypatch.setenv("BESK_BUDGET", "1000")
    assert NodeCounter().budget == 1000


@given(hypergraphs(max_edges=7), st.integers(2, 12), st.integers(1, 4))
def test_enumeration_matches_all_subsets(G, s, k):
    got = set(iter_configs(G, s, k))
    want = {c for c in combinations(range(len(G.edges)), k) if oracles.span([G.edges[i] for i in c]) <= s}
    assert got == want


@given(hypergraphs(max_edges=7), st.integers(2, 12), st.integers(1, 4))
def test_each_subset_yielded_once(G, s, k):
    found = list(iter_configs(G, s, k))
    assert len(found) == len(set(found))


@given(hypergraphs(max_edges=7), st.integers(0, 12), st.integers(1, 3), st.data())
def test_anchored_enumeration(G, s, k, data):
    base = data.draw(st.sets(st.integers(0, G.n - 1), max_size=2))
    allowed = data.draw(st.sets(st.integers(0, max(len(G.edges) - 1, 0)))) if G.edges else set()
    amask = sum(1 << i for i in allowed)
    got = set(iter_configs(G, s, k, base=sum(1 << v for v in base), allowed=amask))
    want = {
        c
        for c in combinations(sorted(allowed), k)
        if len(set(base).union(*(G.edges[i] for i in c))) <= s
    }
    assert got == want


@given(hypergraphs(max_edges=7), st.integers(2, 10), st.integers(1, 3))
def test_monotone_in_s(G, s, k):
    if contains_config(G, s, k) is not None:
        assert contains_config(G, s + 1, k) is not None


@given(hypergraphs(r_min=3, max_edges=7), st.sampled_from([2, 3, 4, 5]))
def test_gk_freeness_matches_oracle(G, k):
    assert is_Gk_free(G, k).free == oracles.gk_free(G.edges, G.r, k)


def test_incremental_check_matches_full_check():
    rng = random.Random(0)
    done = 0
    while done < 500:
        r = rng.choice([3, 4])
        k = rng.choice([3, 4])
        n = rng.randint(r + 2, 10)
        pool = list(combinations(range(n), r))
        G = HyperGraph(n, r, ())
        for e in rng.sample(pool, min(len(pool), 12)):
            if incremental_free_check(G, e, k).free:
                G = G.add_edge(e)
        e = rng.choice(pool)
        if e in G.edge_set:
            continue
        assert is_Gk_free(G, k).free
        assert incremental_free_check(G, e, k).free == is_Gk_free(G.add_edge(e), k).free
        done += 1


def test_extension_ok(diamond3):
    G = HyperGraph(5, 3, ((0, 1, 2),))
    assert not extension_ok(G, (1, 2, 3), 4, 2)
    assert extension_ok(G, (2, 3, 4), 4, 2)


def test_edge_store_matches_graph():
    rng = random.Random(3)
    G = HyperGraph(9, 3, tuple(rng.sample(list(combinations(range(9), 3)), 8)))
    store = EdgeStore(G)
    extra = next(e for e in combinations(range(9), 3) if e not in G.edge_set)
    store.add(extra)
    store.remove(0)
    assert store.graph() == HyperGraph(9, 3, G.edges[1:] + (extra,))
    assert extra in store and G.edges[0] not in store


def test_edge_store_check_matches_incremental_check():
    rng = random.Random(4)
    for _ in range(200):
        n, r, k = rng.randint(6, 10), 3, rng.choice([3, 4])
        pool = list(combinations(range(n), r))
        G = HyperGraph(n, r, tuple(rng.sample(pool, 6)))
        store = EdgeStore(G)
        drop = rng.randrange(len(G.edges))
        store.remove(drop)
        base = G.remove_edges([drop])
        e = rng.choice([x for x in pool if x not in G.edge_set])
        i = store.add(e)
        assert store.free_through(i, k) == incremental_free_check(base, e, k).free


def test_repair_makes_free():
    rng = random.Random(5)
    for _ in range(20):
        n, r, k = 9, 3, rng.choice([3, 4])
        G = HyperGraph(n, r, tuple(rng.sample(list(combinations(range(n), r)), 14)))
        H, deleted = repair_free(G, k)
        assert is_Gk_free(H, k).free
        assert set(H.edges) | set(deleted) == set(G.edges)
        assert not set(H.edges) & set(deleted)


def test_repair_keeps_free_graphs(fano):
    H, deleted = repair_free(fano, 2)
    assert H == fano and deleted == []
