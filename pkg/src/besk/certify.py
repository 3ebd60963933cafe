"""Pair weights over the 2-clusters and the edge-count certificate they give.

Within a 2-cluster ``F`` a pair of ``V(F)`` gets weight 1 when it is
1-claimed, ``2/(k-2)`` when it is 2-claimed but not 1-claimed, and 0
otherwise. If every pair of ``V(G)`` collects total weight at most 1 and
every cluster collects at least ``C(r,2)|F|``, then
``|G| <= C(n,2) / C(r,2)``. All arithmetic uses :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional

from .claims import claim_table
from .configs import _counter, is_Gk_free
from .core import EdgeSubset, HyperGraph, VertexPair, pairs_of
from .errors import CertMismatch, KTooSmall, NotFree, OddK
from .merging import Partition, merge_1, merge_12


def check_k(k: int) -> None:
    if k < 4:
        raise KTooSmall(f"weights need k >= 4, got k = {k}")
    if k % 2:
        raise OddK(f"the weight argument covers even k only, got k = {k}")


def r_threshold_ok(r: int, k: int) -> bool:
    """``r >= 2 + sqrt(3k/2 - 4)`` in integer form."""
    return r >= 2 and 2 * (r - 2) ** 2 >= 3 * k - 8


@dataclass
class ClusterWeights:
    edges: tuple
    weights: dict  # VertexPair -> Fraction
    total: Fraction


@dataclass
class WeightCertificate:
    r: int
    k: int
    n: int
    clusters: list
    pair_totals: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "params": {"r": self.r, "k": self.k, "n": self.n},
            "clusters": [
                {"edges": list(c.edges), "weight_total": _frac(c.total)} for c in self.clusters
            ],
            "pairs": [
                {"pair": [p.u, p.v], "total": _frac(w)} for p, w in sorted(self.pair_totals.items())
            ],
        }


def _frac(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def cluster_weights(F: EdgeSubset, k: int, budget=None) -> ClusterWeights:
    half = Fraction(2, k - 2)
    weights = {}
    for p, c in claim_table(F, 2, budget=budget).items():
        if 1 in c:
            weights[p] = Fraction(1)
        elif 2 in c:
            weights[p] = half
        else:
            weights[p] = Fraction(0)
    return ClusterWeights(F.indices, weights, sum(weights.values(), Fraction(0)))


def assign_weights(
    G: HyperGraph, k: int, M2: Partition, free_verified: bool = False, budget=None
) -> WeightCertificate:
    """Weights of every 2-cluster of ``M2``.

    Freeness is checked here unless the caller states it was verified;
    the weight lemmas say nothing about graphs with forbidden configurations.
    """
    check_k(k)
    counter = _counter(budget)
    if not free_verified:
        rep = is_Gk_free(G, k, counter)
        if not rep.free:
            raise NotFree(f"refusing to certify: {rep.violation}", rep)
    clusters = [cluster_weights(F, k, counter) for F in M2.subsets()]
    totals: dict = {}
    for c in clusters:
        for p, w in c.weights.items():
            if w:
                totals[p] = totals.get(p, Fraction(0)) + w
    return WeightCertificate(G.r, k, G.n, clusters, totals)


@dataclass
class CertReport:
    pair_lemma_ok: bool
    cluster_lemma_ok: bool
    r_threshold_ok: bool
    bound: Fraction
    edges: int
    holds: bool
    max_pair_weight: Fraction
    worst_cluster_margin: Optional[Fraction]  # min over clusters of w(F) - C(r,2)|F|
    bad_pairs: list = field(default_factory=list)
    bad_clusters: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "pair_lemma_ok": self.pair_lemma_ok,
            "cluster_lemma_ok": self.cluster_lemma_ok,
            "r_threshold_ok": self.r_threshold_ok,
            "bound": _frac(self.bound),
            "edges": self.edges,
            "holds": self.holds,
            "max_pair_weight": _frac(self.max_pair_weight),
            "worst_cluster_margin": None if self.worst_cluster_margin is None else _frac(self.worst_cluster_margin),
            "bad_pairs": [[p.u, p.v] for p in self.bad_pairs],
            "bad_clusters": [list(e) for e in self.bad_clusters],
        }


def certificate_pipeline(G: HyperGraph, k: int, budget=None) -> tuple:
    """Freeness, M1, M2 and weights; returns ``(M2, log, certificate)``."""
    check_k(k)
    counter = _counter(budget)
    rep = is_Gk_free(G, k, counter)
    if not rep.free:
        raise NotFree(f"refusing to certify: {rep.violation}", rep)
    M1, _ = merge_1(G)
    M2, log = merge_12(G, k, M1, budget=counter)
    return M2, log, assign_weights(G, k, M2, free_verified=True, budget=counter)


def verify_certificate(G: HyperGraph, k: int, cert: WeightCertificate, budget=None) -> CertReport:
    """Re-derive ``cert`` from ``G`` and evaluate both weight lemmas exactly."""
    check_k(k)
    if (cert.r, cert.k, cert.n) != (G.r, k, G.n):
        raise CertMismatch("certificate parameters do not match the graph")
    M1, _ = merge_1(G)
    M2, _ = merge_12(G, k, M1, budget=budget)
    fresh = assign_weights(G, k, M2, free_verified=True, budget=budget)
    mine = {c.edges: (c.weights, c.total) for c in cert.clusters}
    theirs = {c.edges: (c.weights, c.total) for c in fresh.clusters}
    if mine != theirs or cert.pair_totals != fresh.pair_totals:
        raise CertMismatch("certificate is not reproducible from the graph")
    per_edge = comb(G.r, 2)
    bad_pairs = sorted(p for p, w in cert.pair_totals.items() if w > 1)
    bad_clusters = [c.edges for c in cert.clusters if c.total < per_edge * len(c.edges)]
    margins = [c.total - per_edge * len(c.edges) for c in cert.clusters]
    bound = Fraction(comb(G.n, 2), per_edge)
    return CertReport(
        pair_lemma_ok=not bad_pairs,
        cluster_lemma_ok=not bad_clusters,
        r_threshold_ok=r_threshold_ok(G.r, k),
        bound=bound,
        edges=len(G.edges),
        holds=len(G.edges) <= bound,
        max_pair_weight=max(cert.pair_totals.values(), default=Fraction(0)),
        worst_cluster_margin=min(margins) if margins else None,
        bad_pairs=bad_pairs,
        bad_clusters=bad_clusters,
    )


def claim_sets_over(G: HyperGraph, F: EdgeSubset, k: int, budget=None) -> dict:
    """Claim sets of ``F`` truncated at ``k`` for every pair of ``V(G)``."""
    return claim_table(F, min(k, len(F)), G.vertices(), budget=budget, cap=max(k, 6))


@dataclass
class AuditReport:
    pairs_checked: int = 0
    level2_pairs: int = 0  # pairs nobody 1-claims but some cluster 2-claims
    max_level2_count: int = 0
    sumset_nontrivial: int = 0  # pairs where at least two clusters claim at a positive level
    findings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings


def pair_interaction_audit(G: HyperGraph, k: int, M2: Partition, budget=None) -> AuditReport:
    """Per pair of ``V(G)``: the sum-set of cluster claim sets avoids ``k``, and
    without a 1-claim at most ``(k-2)/2`` clusters 2-claim the pair."""
    check_k(k)
    counter = _counter(budget)
    tables = [claim_sets_over(G, F, k, counter) for F in M2.subsets()]
    rep = AuditReport()
    for p in pairs_of(G.vertices()):
        rep.pairs_checked += 1
        sets = [t[p] for t in tables]
        ones = sum(1 for c in sets if 1 in c)
        twos = sum(1 for c in sets if 2 in c)
        if ones > 1 or (ones == 1 and any(2 in c and 1 not in c for c in sets)):
            rep.findings.append((p, "pair claimed by a 1-claimer and another cluster"))
        if ones == 0 and twos:
            rep.level2_pairs += 1
            rep.max_level2_count = max(rep.max_level2_count, twos)
            if twos > (k - 2) // 2:
                rep.findings.append((p, f"{twos} clusters 2-claim it"))
        positive = [c for c in sets if len(c) > 1]
        if len(positive) >= 2:
            rep.sumset_nontrivial += 1
        reach = {0}
        for c in positive:
            reach = {a + b for a in reach for b in c if a + b <= k}
        if k in reach:
            rep.findings.append((p, "sum-set of claim sets contains k"))
    return rep
