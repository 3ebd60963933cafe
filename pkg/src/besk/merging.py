"""1-clusters, 2-clusters and the structural laws they obey.

``merge_1`` groups edges into the connected components of the
"share at least two vertices" relation. ``merge_12`` then repeatedly
merges two parts when one of them 1-claims a pair that the other
2-claims, until no such pair of parts is left.

Parts carry integer ids. The starting partition numbers its parts
``0..P-1`` in order of their smallest edge; a merge of parts ``a`` and
``b`` keeps the id ``min(a, b)``. A :class:`MergeLog` therefore replays
deterministically from its starting partition.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Optional

from .claims import _pairs_claimed, claim_bound, claim_table, claim_unions, one_claimed
from .configs import _counter, is_Gk_free
from .core import EdgeSubset, HyperGraph, VertexPair, as_subset, mask_vertices
from .errors import (
    BudgetExceeded,
    NotConnected,
    NotFree,
    NotM1Input,
    StructureViolation,
    UnknownPart,
)

PROPERTY_P_CAP = 12


@dataclass(frozen=True)
class Partition:
    graph: HyperGraph
    parts: tuple
    stage: str = "partial"

    def __post_init__(self):
        parts = tuple(tuple(sorted(p)) for p in self.parts)
        seen = [p for part in parts for p in part]
        if any(not p for p in parts):
            raise ValueError("parts must be nonempty")
        if sorted(seen) != list(range(len(self.graph.edges))):
            raise ValueError("parts must be disjoint and cover every edge")
        object.__setattr__(self, "parts", parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.subsets())

    def subsets(self) -> list:
        return [EdgeSubset(self.graph, p) for p in self.parts]

    def as_sets(self) -> set:
        return {frozenset(p) for p in self.parts}

    def part_of(self, edge: int) -> int:
        for i, p in enumerate(self.parts):
            if edge in p:
                return i
        raise KeyError(edge)

    def to_json(self) -> list:
        return [list(p) for p in self.parts]


@dataclass(frozen=True)
class MergeEvent:
    a: int
    b: int
    via: VertexPair
    mode: str
    one_side: int
    two_side: int

    def to_json(self) -> dict:
        return {
            "parts": [self.a, self.b],
            "via": [self.via.u, self.via.v],
            "mode": self.mode,
            "one_claims": self.one_side,
            "claims_other": self.two_side,
        }


@dataclass
class MergeLog:
    start: tuple
    events: list = field(default_factory=list)

    def replay(self) -> dict:
        """Final parts as ``{id: [starting part ids in merge order]}``."""
        comp = {i: [i] for i in range(len(self.start))}
        for ev in self.events:
            keep, drop = min(ev.a, ev.b), max(ev.a, ev.b)
            comp[keep] = comp[keep] + comp.pop(drop)
        return comp

    def final_parts(self) -> list:
        out = []
        for ids in self.replay().values():
            out.append(tuple(sorted(e for i in ids for e in self.start[i])))
        return sorted(out)

    def to_json(self) -> dict:
        return {"start": [list(p) for p in self.start], "events": [ev.to_json() for ev in self.events]}


@dataclass(frozen=True)
class ClusterStats:
    composition: tuple
    m: int
    size: int


# --------------------------------------------------------------------------
# M1
# --------------------------------------------------------------------------


def merge_1(G: HyperGraph) -> tuple:
    """1-clusters of ``G`` with a log of the (1|1) merges that formed them."""
    parent = list(range(len(G.edges)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    events = []
    for pair in sorted(G.pair_index):
        idx = G.pair_index[pair]
        for a, b in zip(idx, idx[1:]):
            ra, rb = find(a), find(b)
            if ra != rb:
                lo, hi = min(ra, rb), max(ra, rb)
                parent[hi] = lo
                events.append(MergeEvent(lo, hi, pair, "1|1", lo, hi))
    groups: dict = {}
    for i in range(len(G.edges)):
        groups.setdefault(find(i), []).append(i)
    parts = sorted(tuple(p) for p in groups.values())
    log = MergeLog(tuple((i,) for i in range(len(G.edges))), events)
    return Partition(G, parts, "M1"), log


def _require_free(G: HyperGraph, k: int, budget) -> None:
    rep = is_Gk_free(G, k, budget)
    if not rep.free:
        raise NotFree(f"input contains a forbidden configuration {rep.violation}", rep)


def two_claimed_covered(G: HyperGraph, part: Iterable[int], budget=None) -> set:
    """Pairs covered by some edge of ``G`` that ``part`` 2-claims."""
    S = EdgeSubset(G, tuple(part))
    unions = claim_unions(S, 2, budget)
    if not unions:
        return set()
    bound = claim_bound(G.r, 2)
    out = set()
    for u in unions:
        slack = bound - u.bit_count()
        if slack <= 0:
            verts = mask_vertices(u)
            out.update(
                VertexPair(x, y) for i, x in enumerate(verts) for y in verts[i + 1:]
                if VertexPair(x, y) in G.pair_index
            )
        else:
            out |= _pairs_claimed([u], bound, list(G.pair_index))
    return out


def merge_12(
    G: HyperGraph,
    k: int,
    M1: Partition,
    rng: Optional[random.Random] = None,
    check_free: bool = False,
    budget=None,
) -> tuple:
    """2-clusters: exhaustive 1|2 merging starting from the 1-clusters.

    Without ``rng`` the mergeable triple ``(lower id, higher id, pair)``
    that is lexicographically least is merged first. With ``rng`` a
    uniformly random mergeable triple is merged at every step.
    """
    if M1.graph != G or M1.as_sets() != merge_1(G)[0].as_sets():
        raise NotM1Input("the starting partition is not the 1-clusters of G")
    counter = _counter(budget)
    if check_free:
        _require_free(G, k, counter)
    start = tuple(M1.parts)
    parts = {i: list(p) for i, p in enumerate(start)}
    p1 = {i: one_claimed(EdgeSubset(G, p)) for i, p in parts.items()}
    p2 = {i: two_claimed_covered(G, p, counter) for i, p in parts.items()}
    idx1: dict = {}
    idx2: dict = {}

    def index(i):
        for p in p1[i]:
            idx1.setdefault(p, set()).add(i)
        for p in p2[i]:
            idx2.setdefault(p, set()).add(i)

    def unindex(i):
        for p in p1.pop(i):
            idx1[p].discard(i)
        for p in p2.pop(i):
            idx2[p].discard(i)

    for i in parts:
        index(i)
    events = []
    while True:
        triples = []
        for pair in idx1.keys() & idx2.keys():
            for a in idx1[pair]:
                for b in idx2[pair]:
                    if a != b:
                        triples.append((min(a, b), max(a, b), pair, a, b))
        if not triples:
            break
        if rng is None:
            lo, hi, pair, one, two = min(triples)
        else:
            triples.sort()
            lo, hi, pair, one, two = rng.choice(triples)
        events.append(MergeEvent(lo, hi, pair, "1|2", one, two))
        merged = parts[lo] + parts.pop(hi)
        parts[lo] = merged
        unindex(lo)
        unindex(hi)
        p1[lo] = one_claimed(EdgeSubset(G, merged))
        p2[lo] = two_claimed_covered(G, merged, counter)
        index(lo)
    log = MergeLog(start, events)
    return Partition(G, log.final_parts(), "M2"), log


def _part_key(F) -> tuple:
    if isinstance(F, EdgeSubset):
        return F.indices
    return tuple(sorted(F))


def part_clusters(log: MergeLog, F) -> list:
    """Starting parts of ``log`` absorbed into the final part ``F``, in merge order."""
    key = _part_key(F)
    for ids in log.replay().values():
        if tuple(sorted(e for i in ids for e in log.start[i])) == key:
            return [log.start[i] for i in ids]
    raise UnknownPart(f"{key} is not a part of the final partition")


def cluster_stats(log: MergeLog, F) -> ClusterStats:
    clusters = part_clusters(log, F)
    comp = tuple(len(c) for c in clusters)
    return ClusterStats(comp, len(comp), sum(comp))


def merging_numbers(log: MergeLog) -> dict:
    """Edge index -> merging number of the final part containing it."""
    out = {}
    for ids in log.replay().values():
        for i in ids:
            for e in log.start[i]:
                out[e] = len(ids)
    return out


# --------------------------------------------------------------------------
# trimming orders
# --------------------------------------------------------------------------


def is_connected(G: HyperGraph, indices: Iterable[int]) -> bool:
    idx = list(indices)
    if not idx:
        return True
    return len(trimming_order_indices(G, idx, idx[:1], strict=False)) == len(idx) - 1


def trimming_order_indices(G: HyperGraph, F: Iterable[int], F0: Iterable[int], strict: bool = True) -> list:
    masks = G.masks
    todo = sorted(set(F) - set(F0))
    have = list(F0)
    order = []
    grown = True
    while todo and grown:
        grown = False
        for e in todo:
            if any((masks[e] & masks[h]).bit_count() >= 2 for h in have):
                order.append(e)
                have.append(e)
                todo.remove(e)
                grown = True
                break
    if todo and strict:
        raise NotConnected(f"edges {todo} cannot be reached from F0")
    return order


def trimming_order(F, F0) -> list:
    """Ordering of ``F - F0`` keeping ``F0 + X_1 + ... + X_i`` connected for every ``i``."""
    S, S0 = as_subset(F), as_subset(F0)
    G = S.parent
    if not S0.index_set <= S.index_set:
        raise NotConnected("F0 is not contained in F")
    if not S0.indices:
        raise NotConnected("F0 must be nonempty")
    if not is_connected(G, S.indices) or not is_connected(G, S0.indices):
        raise NotConnected("F and F0 must both be connected")
    return [G.edges[i] for i in trimming_order_indices(G, S.indices, S0.indices)]


# --------------------------------------------------------------------------
# Property P
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PropertyPWitness:
    clusters: tuple  # T_1..T_l as edge index tuples
    H: tuple
    first_pair: VertexPair  # 1bar2-claimed by T_1, 1-claimed by T_2
    last_pair: VertexPair  # 1bar2-claimed by T_l, 1-claimed by T_{l-1}

    @property
    def diamonds(self) -> tuple:
        return self.clusters[0], self.clusters[-1]


class _ClusterInfo:
    __slots__ = ("edges", "mask", "p1", "p2", "bar12")

    def __init__(self, G: HyperGraph, edges: tuple, counter):
        self.edges = tuple(edges)
        S = EdgeSubset(G, self.edges)
        self.mask = S.vertex_mask
        self.p1 = one_claimed(S)
        self.p2 = two_claimed_covered(G, self.edges, counter)
        table = claim_table(S, 2, budget=counter)
        self.bar12 = {p for p, c in table.items() if 2 in c and 1 not in c}


def _mask_of(G: HyperGraph, edges) -> int:
    m = 0
    for e in edges:
        m |= G.masks[e]
    return m


def property_P_witness(
    G: HyperGraph,
    clusters: list,
    k: int,
    T: Optional[Iterable[int]] = None,
    budget=None,
) -> Optional[PropertyPWitness]:
    """Search orderings of ``clusters`` (1-clusters of one part) for a Property P witness.

    A witness is a sequence ``T_1..T_l`` in which every cluster is 1|2
    mergeable with the union of its predecessors, the union ``H`` has
    exactly ``k + 1`` edges and contains ``T``, the end clusters are
    diamonds that are flexible in ``H`` and meet the rest of ``H`` in
    exactly two vertices, ``T_1`` 1bar2-claims a pair 1-claimed by ``T_2``
    and ``T_l`` one 1-claimed by ``T_{l-1}``.
    """
    if sum(len(c) for c in clusters) <= k:
        return None
    if len(clusters) > PROPERTY_P_CAP:
        raise BudgetExceeded(f"Property P search is capped at {PROPERTY_P_CAP} one-clusters")
    counter = _counter(budget)
    info = [_ClusterInfo(G, c, counter) for c in clusters]
    want = None if T is None else tuple(sorted(T))
    if want is not None and want not in {c.edges for c in info}:
        raise UnknownPart(f"{want} is not a 1-cluster of this part")

    def flexible_end(end: _ClusterInfo, others: list) -> bool:
        rest = _mask_of(G, [e for o in others for e in o.edges])
        if (end.mask & rest).bit_count() != 2:
            return False
        return all((G.masks[e] & rest).bit_count() == 1 for e in end.edges)

    def finish(seq: list) -> Optional[PropertyPWitness]:
        first, last = seq[0], seq[-1]
        if len(last.edges) != 2 or len(seq) < 2:
            return None
        if want is not None and want not in {c.edges for c in seq}:
            return None
        if not flexible_end(first, seq[1:]) or not flexible_end(last, seq[:-1]):
            return None
        a = sorted(first.bar12 & seq[1].p1)
        b = sorted(last.bar12 & seq[-2].p1)
        if not a or not b:
            return None
        H = tuple(sorted(e for c in seq for e in c.edges))
        return PropertyPWitness(tuple(c.edges for c in seq), H, a[0], b[0])

    def extend(seq, used, size, p1, p2):
        counter.tick()
        if size == k + 1:
            return finish(seq)
        for j, c in enumerate(info):
            if j in used or size + len(c.edges) > k + 1:
                continue
            if (c.p2 & p1) or (c.p1 & p2):
                got = extend(seq + [c], used | {j}, size + len(c.edges), p1 | c.p1, p2 | c.p2)
                if got is not None:
                    return got
        return None

    for j, c in enumerate(info):
        if len(c.edges) == 2:
            got = extend([c], {j}, 2, set(c.p1), set(c.p2))
            if got is not None:
                return got
    return None


def check_property_P(G: HyperGraph, F, k: int, log: MergeLog, T=None, budget=None):
    """Property P witness for a final part ``F`` of an M2 log, or ``None``."""
    return property_P_witness(G, part_clusters(log, F), k, T, budget)


def has_property_P(G: HyperGraph, clusters: list, k: int, budget=None) -> bool:
    """Every 1-cluster of the union admits a witness."""
    if sum(len(c) for c in clusters) <= k:
        return False
    counter = _counter(budget)
    return all(property_P_witness(G, clusters, k, T, counter) is not None for T in clusters)


def add_two_law(G: HyperGraph, k: int, log: MergeLog, budget=None) -> dict:
    """Replay an M2 log; when a partial cluster with Property P absorbs a
    single 1-cluster ``S``, record whether ``|S| == 2``."""
    counter = _counter(budget)
    comp = {i: [i] for i in range(len(log.start))}
    triggered = 0
    violations = []
    for ev in log.events:
        for host, guest in ((ev.a, ev.b), (ev.b, ev.a)):
            if len(comp[guest]) != 1:
                continue
            clusters = [log.start[i] for i in comp[host]]
            if len(clusters) > PROPERTY_P_CAP:
                continue
            if has_property_P(G, clusters, k, counter):
                triggered += 1
                if len(log.start[comp[guest][0]]) != 2:
                    violations.append(ev)
        keep, drop = min(ev.a, ev.b), max(ev.a, ev.b)
        comp[keep] = comp[keep] + comp.pop(drop)
    return {"triggered": triggered, "violations": violations}


# --------------------------------------------------------------------------
# structural report
# --------------------------------------------------------------------------


@dataclass
class StructureReport:
    size: int
    composition: tuple
    m: int
    not_k: bool
    size_bound: Optional[bool]  # None when |F| <= k
    p1: int
    p1_formula: int
    p1_exact: bool
    p12: int
    p12_floor: int
    p12_ok: bool
    max_one_cluster: int
    one_clusters_ok: bool

    @property
    def ok(self) -> bool:
        return (
            self.not_k
            and self.size_bound is not False
            and self.p1_exact
            and self.p12_ok
            and self.one_clusters_ok
        )

    def findings(self) -> list:
        out = []
        if not self.not_k:
            out.append(f"part has exactly k = {self.size} edges")
        if self.size_bound is False:
            out.append(f"|F| = {self.size} < 2m - k + 3 with m = {self.m}")
        if not self.p1_exact:
            out.append(f"|P1| = {self.p1} but the counting formula gives {self.p1_formula}")
        if not self.p12_ok:
            out.append(f"|P_1bar2| = {self.p12} below the floor {self.p12_floor}")
        if not self.one_clusters_ok:
            out.append(f"a 1-cluster has {self.max_one_cluster} edges")
        return out


def verify_structure(
    G: HyperGraph, F, k: int, log: MergeLog, mode: str = "trusted", budget=None
) -> StructureReport:
    """Check the size and pair-counting laws on one final 2-cluster.

    In ``trusted`` mode any failure raises :class:`StructureViolation`;
    in ``audit`` mode failures are only reported.
    """
    if mode not in ("trusted", "audit"):
        raise ValueError("mode is 'trusted' or 'audit'")
    S = as_subset(F) if isinstance(F, EdgeSubset) else EdgeSubset(G, tuple(F))
    stats = cluster_stats(log, S)
    r = G.r
    size, m, comp = stats.size, stats.m, stats.composition
    table = claim_table(S, 2, budget=budget)
    p1 = sum(1 for c in table.values() if 1 in c)
    p12 = sum(1 for c in table.values() if 2 in c and 1 not in c)
    p1_formula = sum(e * comb(r, 2) - e + 1 for e in comp)
    p12_floor = 1 - m + sum((e - 1) * (r - 2) ** 2 for e in comp)
    rep = StructureReport(
        size=size,
        composition=comp,
        m=m,
        not_k=size != k,
        size_bound=None if size <= k else size >= 2 * m - k + 3,
        p1=p1,
        p1_formula=p1_formula,
        p1_exact=p1 == p1_formula,
        p12=p12,
        p12_floor=p12_floor,
        p12_ok=p12 >= p12_floor,
        max_one_cluster=max(comp),
        one_clusters_ok=max(comp) <= k - 1,
    )
    if mode == "trusted" and not rep.ok:
        raise StructureViolation("; ".join(rep.findings()), rep)
    return rep
