from fractions import Fraction

import pytest

from besk.certify import (
    assign_weights,
    certificate_pipeline,
    check_k,
    claim_sets_over,
    cluster_weights,
    pair_interaction_audit,
    r_threshold_ok,
    verify_certificate,
)
from besk.core import HyperGraph, VertexPair
from besk.errors import CertMismatch, KTooSmall, NotFree, OddK
from besk.merging import merge_1, merge_12
from besk.search import random_free_graph

# two diamonds whose 2-claims overlap at the pair 24
TWO_DIAMONDS = HyperGraph(10, 4, ((0, 1, 2, 3), (0, 1, 4, 5), (2, 6, 7, 8), (4, 6, 7, 9)))


def test_diamond_certificate(diamond4):
    M2, _, cert = certificate_pipeline(diamond4, 4)
    assert M2.parts == ((0, 1),)
    (c,) = cert.clusters
    assert c.total == 15 and set(c.weights.values()) == {Fraction(1)}
    assert len(cert.pair_totals) == 15
    rep = verify_certificate(diamond4, 4, cert)
    assert rep.bound == Fraction(5, 2)
    assert rep.holds and rep.pair_lemma_ok and rep.cluster_lemma_ok and rep.r_threshold_ok
    assert rep.worst_cluster_margin == 3
    js = cert.to_json()
    assert js["params"] == {"r": 4, "k": 4, "n": 6}
    assert js["clusters"] == [{"edges": [0, 1], "weight_total": {"num": 15, "den": 1}}]


def test_half_weights_for_two_claimed_pairs(diamond4):
    # with k = 6 the pairs across the diamond are 2-claimed only: weight 2/(k-2) = 1/2
    w = cluster_weights(diamond4.subset(), 6)
    assert w.weights[VertexPair(0, 1)] == 1
    assert w.weights[VertexPair(2, 4)] == Fraction(1, 2)
    assert w.total == 13


@pytest.mark.parametrize("k, exc", [(2, KTooSmall), (3, KTooSmall), (5, OddK), (7, OddK)])
def test_k_checks(k, exc):
    with pytest.raises(exc):
        check_k(k)


def test_refuses_non_free_graphs():
    G = HyperGraph(5, 4, ((0, 1, 2, 3), (0, 1, 2, 4)))
    with pytest.raises(NotFree):
        certificate_pipeline(G, 4)
    M1, _ = merge_1(G)
    with pytest.raises(NotFree):
        assign_weights(G, 4, M1)


def test_tampered_certificate_is_rejected(diamond4):
    _, _, cert = certificate_pipeline(diamond4, 4)
    cert.clusters[0].total += 1
    with pytest.raises(CertMismatch):
        verify_certificate(diamond4, 4, cert)
    _, _, cert = certificate_pipeline(diamond4, 4)
    cert.pair_totals[VertexPair(0, 1)] = Fraction(1, 2)
    with pytest.raises(CertMismatch):
        verify_certificate(diamond4, 4, cert)
    _, _, cert = certificate_pipeline(diamond4, 4)
    cert.n = 7
    with pytest.raises(CertMismatch):
        verify_certificate(diamond4, 4, cert)


def test_threshold():
    assert r_threshold_ok(4, 4)
    assert not r_threshold_ok(4, 6)
    assert r_threshold_ok(5, 8)
    assert not r_threshold_ok(5, 10)
    assert r_threshold_ok(6, 10)
    # 2(r-2)^2 >= 3k-8 against the real-valued form
    for r in range(3, 12):
        for k in range(4, 40, 2):
            assert r_threshold_ok(r, k) == ((r - 2) ** 2 >= 1.5 * k - 4)


def test_audit_two_diamonds():
    M1, _ = merge_1(TWO_DIAMONDS)
    M2, _ = merge_12(TWO_DIAMONDS, 6, M1)
    assert M2.parts == ((0, 1), (2, 3))
    rep = pair_interaction_audit(TWO_DIAMONDS, 6, M2)
    assert rep.ok
    assert rep.pairs_checked == 45
    assert rep.max_level2_count == 2 <= (6 - 2) // 2
    tables = [claim_sets_over(TWO_DIAMONDS, F, 6) for F in M2.subsets()]
    assert all(2 in t[VertexPair(2, 4)] and 1 not in t[VertexPair(2, 4)] for t in tables)


def test_certificate_below_threshold_still_verifies_lemmas():
    _, _, cert = certificate_pipeline(TWO_DIAMONDS, 6)
    rep = verify_certificate(TWO_DIAMONDS, 6, cert)
    assert not rep.r_threshold_ok
    assert rep.max_pair_weight == 1 and rep.pair_lemma_ok and rep.cluster_lemma_ok
    assert rep.bound == Fraction(45, 6)


def test_weight_lemmas_on_free_graphs_at_threshold():
    for seed in range(12):
        r, k = [(4, 4), (5, 4), (5, 6)][seed % 3]
        G = random_free_graph(13, r, k, 20, seed=seed, local=0.7)
        _, _, cert = certificate_pipeline(G, k)
        rep = verify_certificate(G, k, cert)
        assert rep.r_threshold_ok and rep.pair_lemma_ok and rep.cluster_lemma_ok and rep.holds
