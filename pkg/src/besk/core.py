"""Hypergraph data model, .hg I/O, vertex spans and canonical labels.

Vertices are the integers ``0..n-1``. Every edge is stored twice: as a
sorted tuple and as an ``n``-bit integer mask, so that unions and spans
reduce to ``|`` and ``int.bit_count``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence, Union

from .errors import (
    DuplicateEdge,
    MalformedHeader,
    TooLarge,
    VertexOutOfRange,
    WrongArity,
)

CANONICAL_LIMIT = 16

Edge = tuple


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def mask_vertices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def pairs_of(vertices: Iterable[int]) -> list["VertexPair"]:
    return [VertexPair(u, v) for u, v in combinations(sorted(vertices), 2)]


@dataclass(frozen=True, order=True)
class VertexPair:
    u: int
    v: int

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError(f"a pair needs two distinct vertices, got {self.u}")
        if self.u > self.v:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)

    @property
    def mask(self) -> int:
        return (1 << self.u) | (1 << self.v)

    def __iter__(self):
        yield self.u
        yield self.v

    def __str__(self):
        return f"{self.u}{self.v}" if max(self.u, self.v) < 10 else f"{self.u}-{self.v}"


PairLike = Union[VertexPair, Sequence[int]]


def as_pair(p: PairLike) -> VertexPair:
    return p if isinstance(p, VertexPair) else VertexPair(*p)


@dataclass(frozen=True)
class HyperGraph:
    """Immutable ``r``-uniform hypergraph on vertices ``0..n-1``.

    Edges are normalised on construction: each edge becomes a sorted tuple
    and the edge list is sorted lexicographically, so two graphs with the
    same edge set compare equal and share edge indices.
    """

    n: int
    r: int
    edges: tuple = ()

    def __post_init__(self):
        if self.r < 2:
            raise WrongArity(f"uniformity must be at least 2, got {self.r}")
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        normalised = []
        for e in self.edges:
            t = tuple(sorted(int(v) for v in e))
            if len(t) != self.r or len(set(t)) != self.r:
                raise WrongArity(f"edge {tuple(e)} does not have {self.r} distinct vertices")
            if t[0] < 0 or t[-1] >= self.n:
                raise VertexOutOfRange(f"edge {t} has a vertex outside [0, {self.n})")
            normalised.append(t)
        normalised.sort()
        for a, b in zip(normalised, normalised[1:]):
            if a == b:
                raise DuplicateEdge(f"edge {a} appears twice")
        object.__setattr__(self, "edges", tuple(normalised))

    def __len__(self) -> int:
        return len(self.edges)

    @cached_property
    def masks(self) -> tuple:
        return tuple(to_mask(e) for e in self.edges)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @cached_property
    def pair_index(self) -> dict:
        """Map from each covered pair to the sorted indices of edges containing it."""
        index: dict = {}
        for i, e in enumerate(self.edges):
            for u, v in combinations(e, 2):
                index.setdefault(VertexPair(u, v), []).append(i)
        return index

    @cached_property
    def incidence(self) -> tuple:
        """Per-vertex bitset over edge indices."""
        inc = [0] * self.n
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v] |= 1 << i
        return tuple(inc)

    @cached_property
    def max_overlap(self) -> int:
        """Largest ``|e & f|`` over distinct edges (0 with fewer than two edges)."""
        masks = self.masks
        best = 0
        for idx in self.pair_index.values():
            for a, b in combinations(idx, 2):
                best = max(best, (masks[a] & masks[b]).bit_count())
        if best:
            return best
        # no pair lies in two edges: overlap is 1 iff some vertex has degree >= 2
        return int(any(x & (x - 1) for x in self.incidence))

    @property
    def vertex_mask(self) -> int:
        m = 0
        for x in self.masks:
            m |= x
        return m

    def vertices(self) -> list[int]:
        return mask_vertices(self.vertex_mask)

    def index_of(self, edge: Iterable[int]) -> int:
        t = tuple(sorted(edge))
        lo, hi = 0, len(self.edges)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.edges[mid] < t:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(self.edges) and self.edges[lo] == t:
            return lo
        raise KeyError(t)

    def has_edge(self, edge: Iterable[int]) -> bool:
        return tuple(sorted(edge)) in self.edge_set

    def add_edge(self, edge: Iterable[int]) -> "HyperGraph":
        return HyperGraph(self.n, self.r, self.edges + (tuple(edge),))

    def remove_edges(self, indices: Iterable[int]) -> "HyperGraph":
        drop = set(indices)
        return HyperGraph(self.n, self.r, tuple(e for i, e in enumerate(self.edges) if i not in drop))

    def relabel(self, perm: Sequence[int]) -> "HyperGraph":
        """Apply the vertex map ``v -> perm[v]``."""
        return HyperGraph(self.n, self.r, tuple(tuple(perm[v] for v in e) for e in self.edges))

    def subset(self, indices: Iterable[int] | None = None) -> "EdgeSubset":
        if indices is None:
            indices = range(len(self.edges))
        return EdgeSubset(self, tuple(indices))

    def induced_on_edges(self, indices: Iterable[int]) -> "HyperGraph":
        return HyperGraph(self.n, self.r, tuple(self.edges[i] for i in indices))


@dataclass(frozen=True)
class EdgeSubset:
    """A set of edge indices of a parent graph; houses subgraphs ``F`` of ``G``."""

    parent: HyperGraph
    indices: tuple = field(default=())

    def __post_init__(self):
        idx = tuple(sorted(set(int(i) for i in self.indices)))
        m = len(self.parent.edges)
        for i in idx:
            if not 0 <= i < m:
                raise IndexError(f"edge index {i} out of range for a graph with {m} edges")
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, i) -> bool:
        return i in self.index_set

    @cached_property
    def index_set(self) -> frozenset:
        return frozenset(self.indices)

    @property
    def r(self) -> int:
        return self.parent.r

    @property
    def edges(self) -> list:
        return [self.parent.edges[i] for i in self.indices]

    @property
    def masks(self) -> list:
        pm = self.parent.masks
        return [pm[i] for i in self.indices]

    @cached_property
    def vertex_mask(self) -> int:
        m = 0
        for x in self.masks:
            m |= x
        return m

    def vertices(self) -> list[int]:
        return mask_vertices(self.vertex_mask)

    def union(self, other: "EdgeSubset") -> "EdgeSubset":
        return EdgeSubset(self.parent, self.indices + other.indices)

    def minus(self, other: "EdgeSubset | Iterable[int]") -> "EdgeSubset":
        drop = set(other.indices if isinstance(other, EdgeSubset) else other)
        return EdgeSubset(self.parent, tuple(i for i in self.indices if i not in drop))

    def as_graph(self) -> HyperGraph:
        """Standalone graph with the same vertex labels (edge indices renumbered)."""
        return self.parent.induced_on_edges(self.indices)


GraphLike = Union[HyperGraph, EdgeSubset]


def as_subset(F: GraphLike) -> EdgeSubset:
    return F if isinstance(F, EdgeSubset) else F.subset()


def span(F: GraphLike | Iterable[Iterable[int]]) -> int:
    """Number of vertices covered by the edges of ``F``."""
    if isinstance(F, (HyperGraph, EdgeSubset)):
        return F.vertex_mask.bit_count()
    return to_mask(v for e in F for v in e).bit_count()


# --------------------------------------------------------------------------
# .hg text format
# --------------------------------------------------------------------------


def parse_hypergraph(text: str) -> HyperGraph:
    """Parse ``.hg`` text: ``#`` comments, header ``r n m``, then ``m`` edge lines."""
    lines = [ln.strip() for ln in text.splitlines()]
    data = [ln for ln in lines if ln and not ln.startswith("#")]
    if not data:
        raise MalformedHeader("missing header line 'r n m'")
    try:
        header = [int(x) for x in data[0].split()]
    except ValueError as exc:
        raise MalformedHeader(f"non-integer header {data[0]!r}") from exc
    if len(header) != 3 or min(header) < 0 or header[0] < 2:
        raise MalformedHeader(f"header must be 'r n m' with r >= 2, got {data[0]!r}")
    r, n, m = header
    body = data[1:]
    if len(body) != m:
        raise MalformedHeader(f"header announces {m} edges, found {len(body)}")
    edges = []
    seen = set()
    for ln in body:
        try:
            e = [int(x) for x in ln.split()]
        except ValueError as exc:
            raise WrongArity(f"non-integer edge line {ln!r}") from exc
        if len(e) != r:
            raise WrongArity(f"edge line {ln!r} has {len(e)} vertices, expected {r}")
        if any(v < 0 or v >= n for v in e):
            raise VertexOutOfRange(f"edge line {ln!r} has a vertex outside [0, {n})")
        if any(a >= b for a, b in zip(e, e[1:])):
            raise WrongArity(f"edge line {ln!r} is not strictly increasing")
        t = tuple(e)
        if t in seen:
            raise DuplicateEdge(f"edge {t} listed twice")
        seen.add(t)
        edges.append(t)
    return HyperGraph(n, r, tuple(edges))


def serialize_hypergraph(G: HyperGraph) -> str:
    out = [f"{G.r} {G.n} {len(G.edges)}"]
    out.extend(" ".join(map(str, e)) for e in G.edges)
    return "\n".join(out) + "\n"


def read_hypergraph(path) -> HyperGraph:
    with open(path) as fh:
        return parse_hypergraph(fh.read())


def write_hypergraph(G: HyperGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(serialize_hypergraph(G))


# --------------------------------------------------------------------------
# canonical labels
# --------------------------------------------------------------------------


def _refine(G: HyperGraph, cells: list[list[int]], incident: list[list[tuple]]) -> list[list[int]]:
    """Split cells until every vertex in a cell sees the same colour profile."""
    while True:
        colour = [0] * G.n
        for ci, cell in enumerate(cells):
            for v in cell:
                colour[v] = ci
        new_cells = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sig = {}
            for v in cell:
                prof = sorted(tuple(sorted(colour[u] for u in e if u != v)) for e in incident[v])
                sig.setdefault(tuple(prof), []).append(v)
            for key in sorted(sig):
                new_cells.append(sig[key])
        if len(new_cells) == len(cells):
            return new_cells
        cells = new_cells


def _label(G: HyperGraph, cells: list[list[int]]) -> tuple:
    pos = [0] * G.n
    i = 0
    for cell in cells:
        for v in cell:
            pos[v] = i
            i += 1
    return tuple(sorted(tuple(sorted(pos[v] for v in e)) for e in G.edges))


def canonical_edges(G: HyperGraph, limit: int = CANONICAL_LIMIT) -> tuple:
    """Lexicographically least relabelled edge list reachable by refinement search.

    Individualisation-refinement: an isomorphism-invariant ordered
    partition is refined by colour profiles, the first non-trivial cell is
    split on each of its vertices in turn, and the minimum leaf label is
    kept. Cells of isolated vertices are never split since their order
    cannot change the label.
    """
    if G.n > limit:
        raise TooLarge(f"canonical labels are limited to n <= {limit}, got n = {G.n}")
    if not G.edges:
        return ()
    incident = [[] for _ in range(G.n)]
    for e in G.edges:
        for v in e:
            incident[v].append(e)
    start = [[v for v in range(G.n) if incident[v]], [v for v in range(G.n) if not incident[v]]]
    start = [c for c in start if c]
    best = None

    def search(cells):
        nonlocal best
        cells = _refine(G, cells, incident)
        target = next(
            (ci for ci, c in enumerate(cells) if len(c) > 1 and incident[c[0]]),
            None,
        )
        if target is None:
            lab = _label(G, cells)
            if best is None or lab < best:
                best = lab
            return
        cell = cells[target]
        for v in cell:
            rest = [u for u in cell if u != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    search(start)
    return best


def canonical_form(G: HyperGraph, limit: int = CANONICAL_LIMIT) -> bytes:
    """Byte label equal for two graphs exactly when they are isomorphic."""
    head = [G.n, G.r, len(G.edges)]
    body = [v for e in canonical_edges(G, limit) for v in e]
    return bytes(head + body) if max(head + body, default=0) < 256 else repr((head, body)).encode()


def canonical_graph(G: HyperGraph, limit: int = CANONICAL_LIMIT) -> HyperGraph:
    return HyperGraph(G.n, G.r, canonical_edges(G, limit))
