"""Exact detection of (s, k)-configurations and G_k-freeness.

All searches run on one branch-and-bound engine, :func:`iter_configs`. A node
holds a partial edge set ``J`` with union ``U`` and a candidate bitset ``C``.
For every candidate ``c`` the engine knows ``|c & U|`` through bit-sliced
layers ``L[j]`` (the edges with at least ``j`` vertices in ``U``), so the
"addition" ``|c - U|`` of every candidate is available in O(r) big-int ops.

Pruning uses two lower bounds on the growth of ``U`` when ``t`` more edges
are added: the t-th smallest addition, and the sum of the t smallest
additions minus ``lam * C(t, 2)``, where ``lam`` is the largest overlap of
two distinct edges in the graph (Bonferroni). Children are expanded in
order of increasing addition (most-overlapping first) and each expanded
candidate is removed from its later siblings, so every subset is visited
exactly once.
"""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .core import HyperGraph, mask_vertices, to_mask
from .errors import BudgetExceeded

DEFAULT_BUDGET = 10**7


def default_budget() -> int:
    env = os.environ.get("BESK_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class NodeCounter:
    """Shared node tally; raises :class:`BudgetExceeded` past ``budget``."""

    __slots__ = ("budget", "nodes")

    def __init__(self, budget: Optional[int] = None):
        self.budget = default_budget() if budget is None else budget
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"node budget {self.budget} exhausted", self.nodes)


def _counter(budget) -> NodeCounter:
    return budget if isinstance(budget, NodeCounter) else NodeCounter(budget)


def _add_vertex(layers: list, inc: int, r: int) -> None:
    for j in range(r, 0, -1):
        layers[j] |= layers[j - 1] & inc


def iter_configs(
    G: HyperGraph,
    s: int,
    k: int,
    *,
    base: int = 0,
    forced: Iterable[int] = (),
    allowed: Optional[int] = None,
    budget=None,
) -> Iterator[tuple]:
    """Yield every ``k``-set of edge indices whose union with ``base`` spans at most ``s``.

    ``forced`` edges belong to every yielded set and ``allowed`` (a bitset
    over edge indices) restricts the remaining choices. Sets are yielded
    sorted, each exactly once.
    """
    counter = _counter(budget)
    r = G.r
    masks = G.masks
    inc = G.incidence
    lam = G.max_overlap
    m = len(masks)
    everything = (1 << m) - 1
    J = tuple(sorted(set(forced)))
    if len(J) > k:
        return
    U = base
    for i in J:
        U |= masks[i]
    if U.bit_count() > s:
        return
    layers = [everything] + [0] * r
    for v in mask_vertices(U):
        if v < len(inc):
            _add_vertex(layers, inc[v], r)
    cand = everything if allowed is None else (allowed & everything)
    cand &= ~to_mask(J)

    def rec(J, U, layers, cand, t):
        counter.tick()
        if t == 0:
            yield tuple(sorted(J))
            return
        sigma = s - U.bit_count()
        classes = []
        need = t
        s_t = 0
        s_prev = 0
        a_t = None
        for a in range(r + 1):
            hi = layers[r - a]
            lo = layers[r - a + 1] if a > 0 else 0
            cls = hi & ~lo & cand
            if not cls:
                continue
            classes.append((a, cls))
            if need:
                take = min(need, cls.bit_count())
                s_t += a * take
                if take == need:
                    s_prev = s_t - a
                    a_t = a
                need -= take
        if need:
            return
        pen = lam * t * (t - 1) // 2
        if max(a_t, s_t - pen) > sigma:
            return
        amax = min(sigma, sigma + pen - s_prev)
        for a, cls in classes:
            if a > amax:
                break
            x = cls
            while x:
                low = x & -x
                g = low.bit_length() - 1
                x ^= low
                cand &= ~low
                fresh = masks[g] & ~U
                child_layers = layers
                if fresh:
                    child_layers = layers[:]
                    for v in mask_vertices(fresh):
                        _add_vertex(child_layers, inc[v], r)
                yield from rec(J + (g,), U | masks[g], child_layers, cand, t - 1)

    yield from rec(J, U, layers, cand, k - len(J))


@dataclass(frozen=True)
class ConfigWitness:
    edge_indices: tuple
    span: int
    s: int
    k: int

    def to_json(self) -> dict:
        return {"family": {"s": self.s, "k": self.k}, "edges": list(self.edge_indices), "span": self.span}


@dataclass(frozen=True)
class FreenessReport:
    free: bool
    violation: Optional[ConfigWitness] = None
    kind: Optional[str] = None  # "k" for a k-configuration, "minus" for an l^- one
    nodes: int = 0

    def __post_init__(self):
        if self.free != (self.violation is None):
            raise ValueError("free must hold exactly when no violation is attached")

    def to_json(self) -> dict:
        return {
            "free": self.free,
            "violation": None if self.violation is None else dict(self.violation.to_json(), kind=self.kind),
            "nodes": self.nodes,
        }


def _witness(G: HyperGraph, idx: tuple, s: int, k: int) -> ConfigWitness:
    u = 0
    for i in idx:
        u |= G.masks[i]
    return ConfigWitness(idx, u.bit_count(), s, k)


def contains_config(G: HyperGraph, s: int, k: int, budget=None) -> Optional[ConfigWitness]:
    """First ``k`` edges of ``G`` spanning at most ``s`` vertices, or ``None``."""
    if k < 1:
        raise ValueError("k must be positive")
    for idx in iter_configs(G, s, k, budget=budget):
        return _witness(G, idx, s, k)
    return None


def gk_family(r: int, k: int) -> list:
    """Members of G_k as ``(s, l, kind)`` in checking order: l^- for l = 2..k-1, then k."""
    fam = [((r - 2) * l + 1, l, "minus") for l in range(2, k)]
    fam.append(((r - 2) * k + 2, k, "k"))
    return fam


def _free_check(G: HyperGraph, k: int, forced: tuple, budget) -> FreenessReport:
    if k < 2:
        raise ValueError("k must be at least 2")
    counter = _counter(budget)
    for s, l, kind in gk_family(G.r, k):
        for idx in iter_configs(G, s, l, forced=forced, budget=counter):
            return FreenessReport(False, _witness(G, idx, s, l), kind, counter.nodes)
    return FreenessReport(True, nodes=counter.nodes)


def is_Gk_free(G: HyperGraph, k: int, budget=None) -> FreenessReport:
    return _free_check(G, k, (), budget)


def incremental_free_check(G: HyperGraph, new_edge, k: int, budget=None) -> FreenessReport:
    """Freeness of ``G + new_edge`` looking only at subsets through the new edge.

    Exact when ``G`` itself is G_k-free. Witness indices refer to the edge
    order of ``G.add_edge(new_edge)``.
    """
    G2 = G.add_edge(new_edge)
    return _free_check(G2, k, (G2.index_of(new_edge),), budget)


def extension_ok(G: HyperGraph, new_edge, s: int, k: int, budget=None) -> bool:
    """True when adding ``new_edge`` creates no (s, k)-configuration through it."""
    G2 = G.add_edge(new_edge)
    for _ in iter_configs(G2, s, k, forced=(G2.index_of(new_edge),), budget=budget):
        return False
    return True


class EdgeStore:
    """Mutable edge list exposing what :func:`iter_configs` reads from a graph.

    Removed edges keep their slot and drop out of ``alive``; ``max_overlap``
    only ever grows, which keeps it a valid upper bound after removals.
    """

    def __init__(self, G: HyperGraph):
        self.n = G.n
        self.r = G.r
        self.masks = list(G.masks)
        self.incidence = list(G.incidence)
        self.max_overlap = G.max_overlap
        self.alive = (1 << len(self.masks)) - 1
        self.edges = list(G.edges)
        self.index = {e: i for i, e in enumerate(G.edges)}

    def add(self, edge) -> int:
        e = tuple(sorted(edge))
        m = to_mask(e)
        i = len(self.masks)
        hit = 0
        for v in e:
            hit |= self.incidence[v]
        x = hit & self.alive
        while x:
            low = x & -x
            self.max_overlap = max(self.max_overlap, (self.masks[low.bit_length() - 1] & m).bit_count())
            x ^= low
        self.masks.append(m)
        self.edges.append(e)
        for v in e:
            self.incidence[v] |= 1 << i
        self.alive |= 1 << i
        self.index[e] = i
        return i

    def remove(self, i: int) -> None:
        self.alive &= ~(1 << i)
        for v in mask_vertices(self.masks[i]):
            self.incidence[v] &= ~(1 << i)
        self.index.pop(self.edges[i], None)

    def graph(self) -> HyperGraph:
        return HyperGraph(self.n, self.r, tuple(self.index))

    def __contains__(self, edge) -> bool:
        return tuple(sorted(edge)) in self.index

    def free_through(self, i: int, k: int, budget=None) -> bool:
        counter = _counter(budget)
        for s, l, _ in gk_family(self.r, k):
            for _ in iter_configs(self, s, l, forced=(i,), allowed=self.alive, budget=counter):
                return False
        return True


def repair_free(G: HyperGraph, k: int, budget=None) -> tuple:
    """Delete edges until ``G`` is G_k-free; returns ``(graph, deleted_edges)``.

    Families are handled in checking order. All configurations of the
    current family are enumerated once, then edges are deleted greedily,
    always the one lying in the most configurations that are still intact
    (ties to the lowest index). Deleting edges never creates configurations,
    so one pass per family suffices.
    """
    counter = _counter(budget)
    deleted: list = []
    for s, l, _ in gk_family(G.r, k):
        configs = list(iter_configs(G, s, l, budget=counter))
        if not configs:
            continue
        by_edge: dict = {}
        for ci, idx in enumerate(configs):
            for e in idx:
                by_edge.setdefault(e, set()).add(ci)
        heap = [(-len(c), e) for e, c in by_edge.items()]
        heapq.heapify(heap)
        dead = set()
        gone = set()
        while heap:
            neg, e = heapq.heappop(heap)
            live = by_edge[e] - dead
            if not live:
                continue
            if len(live) != -neg:
                heapq.heappush(heap, (-len(live), e))
                continue
            gone.add(e)
            dead |= live
        deleted.extend(G.edges[i] for i in sorted(gone))
        G = G.remove_edges(gone)
    return G, deleted
