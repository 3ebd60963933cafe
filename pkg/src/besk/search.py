"""Exact small-n extremal numbers, packings and seeded free-graph generators."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Optional

from .claims import pair_family
from .configs import (
    EdgeStore,
    FreenessReport,
    NodeCounter,
    extension_ok,
    incremental_free_check,
    is_Gk_free,
    iter_configs,
    repair_free,
)
from .core import HyperGraph, canonical_edges, canonical_form
from .errors import BudgetExceeded, NotFree


@dataclass
class ExtremalRecord:
    n: int
    r: int
    s: int
    k: int
    value: int
    witness: HyperGraph
    nodes_explored: int
    exact: bool
    classes_per_level: tuple = ()

    def csv_row(self) -> str:
        return f"{self.n},{self.r},{self.s},{self.k},{self.value},{str(self.exact).lower()},{self.nodes_explored}"


CSV_HEADER = "n,r,s,k,value,exact,nodes"


def _children(args) -> list:
    """Canonical labels of the admissible one-edge extensions of a parent graph."""
    n, r, s, k, edges = args
    G = HyperGraph(n, r, edges)
    out = []
    for e in combinations(range(n), r):
        if e in G.edge_set:
            continue
        if not extension_ok(G, e, s, k):
            out.append(None)
            continue
        child = G.add_edge(e)
        out.append((canonical_form(child), canonical_edges(child)))
    return out


def search_extremal(
    n: int, r: int, s: int, k: int, budget: Optional[int] = None, threads: int = 1
) -> ExtremalRecord:
    """Maximum edges of an n-vertex r-graph in which every k edges span more than s vertices.

    Level-by-level orderly generation: each level holds one canonical
    representative per isomorphism class of admissible graphs with that
    many edges; an extension is kept when it creates no (s, k)-configuration
    through the new edge and its canonical label has not been seen. The
    property is closed under deleting edges, so every admissible class is
    reached from a class one level below.

    When the node budget runs out the best graph found is polished by
    local search and the record is marked inexact.
    """
    if n < r:
        raise ValueError("need n >= r")
    counter = NodeCounter(budget)
    level = [HyperGraph(n, r, ())]
    best = level[0]
    sizes = [1]
    exact = True
    pool = ProcessPoolExecutor(threads) if threads > 1 else None
    try:
        while level:
            best = level[0]
            seen = set()
            nxt = []
            jobs = [(n, r, s, k, G.edges) for G in level]
            results = pool.map(_children, jobs, chunksize=8) if pool else map(_children, jobs)
            try:
                for kids in results:
                    for kid in kids:
                        counter.tick()
                        if kid is None:
                            continue
                        label, edges = kid
                        if label in seen:
                            continue
                        seen.add(label)
                        nxt.append(HyperGraph(n, r, edges))
            except BudgetExceeded:
                exact = False
                if nxt:
                    best = nxt[0]
                break
            if nxt:
                sizes.append(len(nxt))
            level = nxt
    finally:
        if pool:
            pool.shutdown()
    if not exact:
        best = local_search(best, s, k, random.Random(0))
    return ExtremalRecord(n, r, s, k, len(best.edges), best, counter.nodes, exact, tuple(sizes))


def local_search(G: HyperGraph, s: int, k: int, rng: random.Random, rounds: int = 200) -> HyperGraph:
    """Greedy completion, then 1-out/2-in swaps while they help."""
    allr = list(combinations(range(G.n), G.r))

    def complete(H):
        order = allr[:]
        rng.shuffle(order)
        for e in order:
            if e not in H.edge_set and extension_ok(H, e, s, k):
                H = H.add_edge(e)
        return H

    best = complete(G)
    for _ in range(rounds):
        if not best.edges:
            break
        drop = rng.randrange(len(best.edges))
        trial = complete(best.remove_edges([drop]))
        if len(trial.edges) > len(best.edges):
            best = trial
    return best


# --------------------------------------------------------------------------
# constructions
# --------------------------------------------------------------------------


def greedy_packing(
    n: int, r: int, seed: int = 0, stall: int = 2000, start: Optional[HyperGraph] = None
) -> HyperGraph:
    """Seeded maximal linear r-graph (every pair in at most one edge).

    Random phase: grow a clique of still-uncovered pairs from a random
    uncovered pair, picking uniformly among common uncovered neighbours.
    After ``stall`` consecutive failures a deterministic sweep adds every
    remaining r-clique of the uncovered-pair graph, which makes the result
    maximal. ``start`` (linear) is kept and extended.
    """
    if n < r:
        raise ValueError("need n >= r")
    rng = random.Random(seed)
    free_nb = [set(range(n)) - {v} for v in range(n)]
    edges = []

    def add(e):
        edges.append(tuple(sorted(e)))
        for u, v in combinations(e, 2):
            free_nb[u].discard(v)
            free_nb[v].discard(u)

    if start is not None:
        if (start.n, start.r) != (n, r):
            raise ValueError("start graph has the wrong shape")
        for e in start.edges:
            if any(v not in free_nb[u] for u, v in combinations(e, 2)):
                raise ValueError("start graph is not linear")
            add(e)

    fails = 0
    while fails < stall:
        live = [v for v in range(n) if free_nb[v]]
        if not live:
            break
        u = rng.choice(live)
        v = rng.choice(sorted(free_nb[u]))
        clique = [u, v]
        common = free_nb[u] & free_nb[v]
        while len(clique) < r and common:
            w = rng.choice(sorted(common))
            clique.append(w)
            common &= free_nb[w]
        if len(clique) == r:
            add(clique)
            fails = 0
        else:
            fails += 1

    def sweep(clique, common):
        if len(clique) == r:
            return clique
        for w in sorted(common):
            if w > clique[-1]:
                got = sweep(clique + [w], common & free_nb[w])
                if got:
                    return got
        return None

    for u in range(n):
        while True:
            got = sweep([u], {w for w in free_nb[u] if w > u})
            if not got:
                break
            add(got)
    return HyperGraph(n, r, tuple(edges))


def _det(a, b, p):
    return (a[0] * b[1] - a[1] * b[0]) % p


def _harmonic(points, p) -> bool:
    """Whether four points of the projective line over F_p have cross-ratio -1 in some order."""
    for a, b, c, d in permutations(points):
        num = _det(a, c, p) * _det(b, d, p) % p
        den = _det(a, d, p) * _det(b, c, p) % p
        if den and num == (-den) % p:
            return True
    return False


def grid_forms(r: int, p: int) -> list:
    """``r`` linear forms on F_p^2, pairwise independent, no four harmonic.

    Returns fewer than ``r`` forms when F_p is too small.
    """
    pts = [(0, 1)]
    for c in range(p):
        if len(pts) == r:
            break
        q = (1, c)
        if all(not _harmonic(list(t) + [q], p) for t in combinations(pts, 3)):
            pts.append(q)
    return pts


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def grid_packing(n: int, r: int) -> Optional[HyperGraph]:
    """Linear r-partite grid: parts are copies of F_p, one edge per point of F_p^2.

    The edge of ``(x, y)`` meets part ``i`` in ``f_i(x, y)``. Two edges share
    a vertex in part ``i`` exactly when their difference lies in ker f_i, so
    the graph is linear. Four edges meeting pairwise in six distinct points
    would need the kernels of four forms in harmonic position; for r = 4
    this is the only way four edges of a linear 4-graph span 10 vertices,
    so the grid is G_4-free. ``p`` is the largest prime with ``r p <= n``;
    ``None`` if there is none.
    """
    for p in range(n // r, 1, -1):
        if _is_prime(p):
            forms = grid_forms(r, p)
            if len(forms) == r:
                edges = [
                    tuple(i * p + (a * x + b * y) % p for i, (a, b) in enumerate(forms))
                    for x in range(p)
                    for y in range(p)
                ]
                return HyperGraph(n, r, tuple(edges))
    return None


@dataclass
class ConstructionReport:
    graph: HyperGraph
    density_ratio: Fraction
    freeness: FreenessReport
    lower_bound_ratio: Fraction
    deleted: int = 0
    packing_edges: int = 0


def density_ratio(G: HyperGraph) -> Fraction:
    """``|G| / (n^2 / (r^2 - r))``."""
    return Fraction(len(G.edges) * (G.r * G.r - G.r), G.n * G.n)


def resaturate(G: HyperGraph, k: int, seed: int = 0, stall: int = 300, budget=None) -> HyperGraph:
    """Seeded random insertion of linear edges that keep a G_k-free ``G`` free.

    Candidates are grown like the random phase of :func:`greedy_packing`
    and tested only against subsets through the new edge. Stops after
    ``stall`` consecutive rejections.
    """
    counter = budget if isinstance(budget, NodeCounter) else NodeCounter(budget)
    rng = random.Random(seed)
    n, r = G.n, G.r
    free_nb = [set(range(n)) - {v} for v in range(n)]
    for e in G.edges:
        for u, v in combinations(e, 2):
            free_nb[u].discard(v)
            free_nb[v].discard(u)
    store = EdgeStore(G)
    fails = 0
    while fails < stall:
        live = [v for v in range(n) if free_nb[v]]
        if not live:
            break
        u = rng.choice(live)
        v = rng.choice(sorted(free_nb[u]))
        clique = [u, v]
        common = free_nb[u] & free_nb[v]
        while len(clique) < r and common:
            w = rng.choice(sorted(common))
            clique.append(w)
            common &= free_nb[w]
        if len(clique) < r:
            fails += 1
            continue
        i = store.add(clique)
        if store.free_through(i, k, counter):
            for a, b in combinations(clique, 2):
                free_nb[a].discard(b)
                free_nb[b].discard(a)
            fails = 0
        else:
            store.remove(i)
            fails += 1
    return store.graph()


def construct(
    n: int, r: int, k: int, seed: int = 0, budget=None, start: str = "grid", stall: int = 300
) -> ConstructionReport:
    """Packing, greedy repair of forbidden configurations, free re-saturation, density report.

    ``start="grid"`` completes :func:`grid_packing` (when one exists) to a
    maximal linear graph; ``start="random"`` packs from scratch.
    """
    base = grid_packing(n, r) if start == "grid" else None
    if start not in ("grid", "random"):
        raise ValueError(f"unknown start {start!r}")
    packing = greedy_packing(n, r, seed, start=base)
    counter = NodeCounter(budget)
    G, deleted = repair_free(packing, k, counter)
    G = resaturate(G, k, seed, stall, counter)
    rep = is_Gk_free(G, k, counter)
    single = HyperGraph(r, r, (tuple(range(r)),))
    return ConstructionReport(
        G, density_ratio(G), rep, lower_bound_ratio(single, r, k), len(deleted), len(packing.edges)
    )


def lower_bound_ratio(F: HyperGraph, r: int, k: int, budget=None) -> Fraction:
    """``|F| / (2 |P_{<= floor(k/2)}(F)|)`` for a G_k-free ``F``."""
    if F.r != r:
        raise ValueError(f"F is {F.r}-uniform, not {r}-uniform")
    rep = is_Gk_free(F, k, budget)
    if not rep.free:
        raise NotFree(f"F contains {rep.violation}", rep)
    fam = pair_family(F, "le", k // 2, budget=budget)
    return Fraction(len(F.edges), 2 * len(fam))


def random_free_graph(
    n: int,
    r: int,
    k: int,
    target_edges: int,
    seed: int = 0,
    max_rejections: int = 400,
    local: float = 0.0,
) -> HyperGraph:
    """Seeded random insertion keeping the graph G_k-free.

    With probability ``local`` a candidate edge is forced through a pair
    already covered or 2-claimed by the graph, which makes clusters with
    several 1-clusters far more common than uniform sampling does.
    """
    if n < r:
        raise ValueError("need n >= r")
    rng = random.Random(seed)
    G = HyperGraph(n, r, ())
    rejections = 0
    verts = list(range(n))
    while len(G.edges) < target_edges and rejections < max_rejections:
        if G.edges and rng.random() < local:
            anchor = _anchor_pair(G, rng)
            rest = rng.sample([v for v in verts if v not in anchor], r - 2)
            e = tuple(sorted(anchor + tuple(rest)))
        else:
            e = tuple(sorted(rng.sample(verts, r)))
        if e in G.edge_set or not incremental_free_check(G, e, k).free:
            rejections += 1
            continue
        G = G.add_edge(e)
        rejections = 0
    return G


def _anchor_pair(G: HyperGraph, rng: random.Random) -> tuple:
    masks = G.masks
    diamonds = [(a, b) for a, b in combinations(range(len(masks)), 2) if (masks[a] & masks[b]).bit_count() == 2]
    if diamonds and rng.random() < 0.5:
        a, b = rng.choice(diamonds)
        x = rng.choice([v for v in G.edges[a] if v not in G.edges[b]])
        y = rng.choice([v for v in G.edges[b] if v not in G.edges[a]])
        return (x, y)
    e = rng.choice(G.edges)
    return tuple(rng.sample(e, 2))


def naive_config_free(G: HyperGraph, s: int, k: int) -> bool:
    """All-subsets check, independent of the branch-and-bound engine."""
    for combo in combinations(G.edges, k):
        if len(set().union(*combo)) <= s:
            return False
    return True


def count_configs(G: HyperGraph, s: int, k: int) -> int:
    return sum(1 for _ in iter_configs(G, s, k))


CORPUS_SHAPES = ((4, 4), (4, 6), (5, 4), (5, 6))


def seeded_corpus(seeds: int = 60, shapes=CORPUS_SHAPES):
    """Yield ``(seed, n, r, k, G)`` free instances with mixed sizes, densities and locality.

    ``seeds * len(shapes)`` graphs on 10 to 14 vertices; each is produced by
    :func:`random_free_graph`, so freeness is guaranteed by construction.
    """
    for seed in range(seeds):
        n = (10, 12, 13, 14)[seed % 4]
        target = (4, 8, 30)[seed % 3]
        local = (0.0, 0.5, 0.9)[(seed // 3) % 3]
        for r, k in shapes:
            yield seed, n, r, k, random_free_graph(n, r, k, target, seed=seed, local=local)
