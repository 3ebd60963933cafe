"""Acceptance suite: one PASS/FAIL line per criterion, printed even under capture."""

import random
import time
from collections import Counter
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

import oracles
from besk.certify import certificate_pipeline, pair_interaction_audit, r_threshold_ok, verify_certificate
from besk.claims import claim_set
from besk.configs import contains_config, is_Gk_free
from besk.core import HyperGraph
from besk.merging import add_two_law, merge_1, merge_12, merging_numbers, verify_structure
from besk.search import construct, lower_bound_ratio, random_free_graph, search_extremal, seeded_corpus


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def corpus():
    """240 seeded free instances with their M2 partitions and logs."""
    out = []
    for seed, n, r, k, G in seeded_corpus(seeds=60):
        M1, _ = merge_1(G)
        M2, log = merge_12(G, k, M1)
        out.append((seed, n, r, k, G, M2, log))
    return out


def test_criterion_1_exact_extremal_table(capsys):
    t0 = time.perf_counter()
    oracle = [oracles.max_free(n, 3, 4, 2) for n in range(3, 8)]
    t1 = time.perf_counter()
    records = [search_extremal(n, 3, 4, 2) for n in range(3, 8)]
    t2 = time.perf_counter()
    values = [rec.value for rec in records]
    ok = (
        oracle == [1, 1, 2, 4, 7]
        and values == oracle
        and all(rec.exact for rec in records)
        and all(oracles.span(c) > 4 for rec in records for c in combinations(rec.witness.edges, 2))
        and t2 - t0 < 60
    )
    report(capsys, 1, ok, f"f(n;4,2), n=3..7: oracle {oracle} ({t1 - t0:.1f}s), search {values} exact ({t2 - t1:.1f}s)")


def test_criterion_2_counting_formulas(capsys, corpus):
    c = Counter()
    for _, n, r, k, G, M2, log in corpus:
        assert n <= 14 and r in (4, 5) and k in (4, 6)
        for F in M2.parts:
            rep = verify_structure(G, F, k, log, mode="audit")
            c["clusters"] += 1
            c["m>=2"] += rep.m >= 2
            c["p1_bad"] += not rep.p1_exact
            c["p12_bad"] += not rep.p12_ok
    densities = sorted({len(inst[4].edges) for inst in corpus})
    ok = len(corpus) >= 200 and c["p1_bad"] == 0 and c["p12_bad"] == 0 and c["m>=2"] >= 50
    report(
        capsys,
        2,
        ok,
        f"{len(corpus)} instances ({densities[0]}..{densities[-1]} edges), {c['clusters']} clusters, "
        f"{c['m>=2']} with m>=2, |P1| violations {c['p1_bad']}, |P_1bar2| violations {c['p12_bad']}",
    )


def test_criterion_3_weight_lemmas(capsys, corpus):
    c = Counter()
    for _, n, r, k, G, M2, log in corpus:
        if not r_threshold_ok(r, k):
            continue
        c["instances"] += 1
        _, _, cert = certificate_pipeline(G, k)
        rep = verify_certificate(G, k, cert)
        per_edge = comb(r, 2)
        c["pairs"] += len(cert.pair_totals)
        c["clusters"] += len(cert.clusters)
        c["pair_bad"] += sum(1 for w in cert.pair_totals.values() if not (isinstance(w, Fraction) and w <= 1))
        c["cluster_bad"] += sum(1 for cl in cert.clusters if cl.total < per_edge * len(cl.edges))
        c["bound_bad"] += len(G.edges) > Fraction(comb(n, 2), per_edge)
        c["report_bad"] += not (rep.pair_lemma_ok and rep.cluster_lemma_ok and rep.holds)
    ok = c["instances"] > 0 and c["pair_bad"] + c["cluster_bad"] + c["bound_bad"] + c["report_bad"] == 0
    report(
        capsys,
        3,
        ok,
        f"{c['instances']} instances at threshold, {c['pairs']} weighted pairs, {c['clusters']} clusters; "
        f"w(xy)>1: {c['pair_bad']}, w(F)<C(r,2)|F|: {c['cluster_bad']}, |G| over bound: {c['bound_bad']}",
    )


def test_criterion_4_structural_laws(capsys, corpus):
    c = Counter()
    for _, n, r, k, G, M2, log in corpus:
        for F in M2.parts:
            rep = verify_structure(G, F, k, log, mode="audit")
            c["one_clusters"] += len(rep.composition)
            c["one_bad"] += not rep.one_clusters_ok
            c["k_bad"] += not rep.not_k
            if rep.size_bound is not None:
                c["big"] += 1
                c["size_bad"] += not rep.size_bound
        audit = pair_interaction_audit(G, k, M2)
        c["pairs"] += audit.pairs_checked
        c["sumset_trig"] += audit.sumset_nontrivial
        c["sum_bad"] += sum(1 for _, msg in audit.findings if "sum-set" in msg)
        c["other_findings"] += sum(1 for _, msg in audit.findings if "sum-set" not in msg)
        c["two_law_trig"] += add_two_law(G, k, log)["triggered"]
    # the corpus rarely grows a cluster with Property P; this r = 3 instance does
    H = random_free_graph(18, 3, 4, 40, seed=51, local=0.9)
    law = add_two_law(H, 4, merge_12(H, 4, merge_1(H)[0])[1])
    c["two_law_extra"] += law["triggered"]
    c["two_law_bad"] += len(law["violations"])
    bad = c["one_bad"] + c["k_bad"] + c["size_bad"] + c["sum_bad"] + c["other_findings"] + c["two_law_bad"]
    report(
        capsys,
        4,
        bad == 0,
        f"{c['one_clusters']} 1-clusters (>k-1 edges: {c['one_bad']}), |F|=k: {c['k_bad']}, "
        f"size law triggered {c['big']} (violations {c['size_bad']}), sum-set over {c['pairs']} pairs "
        f"with {c['sumset_trig']} multi-cluster pairs (contains k: {c['sum_bad']}), |S|=2 law triggered {c['two_law_trig']} "
        f"(+{c['two_law_extra']} on an r=3 instance, violations {c['two_law_bad']})",
    )


def test_criterion_5_oracle_equivalence(capsys):
    rng = random.Random(2024)
    t0 = time.perf_counter()
    disagree = 0
    found = 0
    for _ in range(1000):
        r = rng.randint(2, 4)
        n = rng.randint(r + 1, 10)
        pool = list(combinations(range(n), r))
        edges = tuple(rng.sample(pool, rng.randint(0, min(10, len(pool)))))
        G = HyperGraph(n, r, edges)
        k = rng.randint(1, 5)
        s = rng.randint(r, min(n, (r - 2) * k + 3 if r > 2 else k + 2))
        w = contains_config(G, s, k)
        naive = oracles.has_config(G.edges, s, k)
        found += naive
        if (w is not None) != naive or (w is not None and oracles.span([G.edges[i] for i in w.edge_indices]) > s):
            disagree += 1
        x, y = rng.sample(range(n), 2)
        i_max = rng.randint(1, 4)
        if claim_set(G, (x, y), i_max).members != oracles.claims(G.edges, r, x, y, i_max):
            disagree += 1
    elapsed = time.perf_counter() - t0
    ok = disagree == 0 and elapsed < 120
    report(capsys, 5, ok, f"1000 graphs, {found} containing the configuration, {disagree} disagreements, {elapsed:.1f}s")


def test_criterion_6_order_invariance(capsys):
    shapes = [(13, 4, 6), (12, 3, 4), (14, 5, 6), (13, 4, 4)]
    differ = 0
    nontrivial = 0
    partition_changes = 0
    for seed in range(50):
        n, r, k = shapes[seed % 4]
        G = random_free_graph(n, r, k, 14, seed=seed, local=0.9)
        M1, _ = merge_1(G)
        M2, log = merge_12(G, k, M1)
        base = merging_numbers(log)
        nontrivial += any(m >= 2 for m in base.values())
        for order in range(10):
            M2r, logr = merge_12(G, k, M1, rng=random.Random(1000 * seed + order))
            differ += merging_numbers(logr) != base
            partition_changes += M2r.as_sets() != M2.as_sets()
    ok = differ == 0 and nontrivial >= 25
    report(
        capsys,
        6,
        ok,
        f"50 instances x 10 orders, {nontrivial} with a merged cluster, m(F) differences {differ} "
        f"(final partition changed in {partition_changes} runs)",
    )


def test_criterion_7_lower_bound_trend(capsys):
    t0 = time.perf_counter()
    rep = construct(200, 4, 4, seed=0)
    free = rep.freeness.free and is_Gk_free(rep.graph, 4).free
    elapsed = time.perf_counter() - t0
    singles = {
        (r, k): lower_bound_ratio(HyperGraph(r, r, (tuple(range(r)),)), r, k) for r in range(3, 9) for k in (4, 6, 8)
    }
    exact = all(v == Fraction(1, r * r - r) for (r, k), v in singles.items())
    ok = free and rep.density_ratio >= Fraction(6, 10) and exact
    report(
        capsys,
        7,
        ok,
        f"n=200 r=4 k=4: {len(rep.graph.edges)} edges, density_ratio {float(rep.density_ratio):.4f}, "
        f"free={free} ({elapsed:.1f}s); single-edge ratio 1/(r^2-r) for all 18 (r,k): {exact}",
    )
