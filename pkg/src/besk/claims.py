"""Claim sets C_F(xy), the pair families built from them, and diamonds.

A pair ``xy`` is *i-claimed* by ``F`` when some ``i`` distinct edges of
``F`` together with ``{x, y}`` span at most ``(r-2)i + 2`` vertices. Every
pair is 0-claimed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .configs import _counter, iter_configs
from .core import EdgeSubset, GraphLike, PairLike, VertexPair, as_pair, as_subset, pairs_of, to_mask
from .errors import DiamondNotInF

MAX_CLAIM_INDEX = 6


def claim_bound(r: int, i: int) -> int:
    return (r - 2) * i + 2


@dataclass(frozen=True)
class ClaimSet:
    pair: VertexPair
    members: frozenset
    i_max: int

    def __contains__(self, i) -> bool:
        return i in self.members

    def to_json(self) -> dict:
        return {"pair": [self.pair.u, self.pair.v], "claims": sorted(self.members), "truncated_at": self.i_max}


def _check_cap(i_max: int, cap: int) -> None:
    if i_max < 0:
        raise ValueError("i_max must be nonnegative")
    if i_max > cap:
        raise ValueError(f"claims beyond i = {cap} are not computed (asked for {i_max})")


def claims_at(F: GraphLike, xy: PairLike, i: int, budget=None) -> bool:
    """Whether ``F`` i-claims ``xy`` (anchored branch-and-bound)."""
    S = as_subset(F)
    if i == 0:
        return True
    if i > len(S):
        return False
    pair = as_pair(xy)
    for _ in iter_configs(
        S.parent, claim_bound(S.r, i), i, base=pair.mask, allowed=to_mask(S.indices), budget=budget
    ):
        return True
    return False


def claim_set(F: GraphLike, xy: PairLike, i_max: int, budget=None, cap: int = MAX_CLAIM_INDEX) -> ClaimSet:
    _check_cap(i_max, cap)
    counter = _counter(budget)
    pair = as_pair(xy)
    members = {i for i in range(min(i_max, len(as_subset(F))) + 1) if claims_at(F, pair, i, counter)}
    return ClaimSet(pair, frozenset(members), i_max)


def claim_unions(F: GraphLike, i: int, budget=None) -> list:
    """Distinct unions ``U`` of ``i``-subsets of ``F`` with ``|U| <= (r-2)i + 2``."""
    S = as_subset(F)
    if i == 0 or i > len(S):
        return []
    masks = S.parent.masks
    seen = set()
    for idx in iter_configs(S.parent, claim_bound(S.r, i), i, allowed=to_mask(S.indices), budget=budget):
        u = 0
        for j in idx:
            u |= masks[j]
        seen.add(u)
    return sorted(seen)


def _pairs_claimed(unions: list, bound: int, domain: list) -> set:
    out = set()
    for u in unions:
        slack = bound - u.bit_count()
        if slack >= 2:
            return set(domain)
        for p in domain:
            if (p.mask & ~u).bit_count() <= slack:
                out.add(p)
    return out


def claim_table(
    F: GraphLike,
    i_max: int,
    vertices: Optional[Iterable[int]] = None,
    budget=None,
    cap: int = MAX_CLAIM_INDEX,
) -> dict:
    """Claim sets of every pair over ``vertices`` (default ``V(F)``), computed in one sweep.

    Rather than one anchored search per pair, every qualifying ``i``-subset
    is enumerated once and the pairs it claims are read off its union.
    """
    _check_cap(i_max, cap)
    S = as_subset(F)
    counter = _counter(budget)
    domain = pairs_of(S.vertices() if vertices is None else vertices)
    table = {p: {0} for p in domain}
    for i in range(1, min(i_max, len(S)) + 1):
        unions = claim_unions(S, i, counter)
        for p in _pairs_claimed(unions, claim_bound(S.r, i), domain):
            table[p].add(i)
    return {p: frozenset(c) for p, c in table.items()}


def one_claimed(F: GraphLike) -> set:
    """P_1(F): exactly the pairs covered by an edge of ``F``."""
    S = as_subset(F)
    return {VertexPair(u, v) for e in S.edges for u, v in combinations(e, 2)}


@dataclass(frozen=True)
class PairFamily:
    kind: str
    param: object
    pairs: frozenset = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, p) -> bool:
        return as_pair(p) in self.pairs


def pair_family(
    F: GraphLike,
    kind: str,
    param=None,
    i_max: Optional[int] = None,
    ambient: Optional[Iterable[int]] = None,
    budget=None,
) -> PairFamily:
    """Pairs selected by a membership rule on their claim sets.

    ``kind`` is one of

    * ``"A"``: ``param`` is a set ``A``; pairs with ``A`` inside ``C_F(xy)``,
    * ``"i"``: ``param`` is an int ``i``; pairs with ``i`` in ``C_F(xy)``,
    * ``"1bar2"``: ``P_2(F) - P_1(F)`` over ``C(V(F), 2)``,
    * ``"le"``: ``param`` is ``t >= 1``; pairs of ``V(F)`` claimed at some ``1 <= i <= t``.

    ``ambient`` widens the pair domain of ``"A"`` and ``"i"`` beyond ``V(F)``.
    """
    S = as_subset(F)
    if kind == "A":
        A = frozenset(param)
        if any(a < 0 for a in A):
            raise ValueError("claim indices are nonnegative")
        need = max(A, default=0)
        verts = ambient
        test = lambda c: A <= c  # noqa: E731
    elif kind == "i":
        if param is None or param < 0:
            raise ValueError("kind 'i' needs a nonnegative index")
        need = param
        verts = ambient
        test = lambda c: param in c  # noqa: E731
    elif kind == "1bar2":
        need = 2
        verts = None
        test = lambda c: 2 in c and 1 not in c  # noqa: E731
    elif kind == "le":
        if param is None or param < 1:
            raise ValueError("kind 'le' needs t >= 1")
        need = param
        verts = None
        test = lambda c: any(1 <= i <= param for i in c)  # noqa: E731
    else:
        raise ValueError(f"unknown pair family kind {kind!r}")
    if i_max is not None and i_max < need:
        raise ValueError(f"i_max = {i_max} is too small for kind {kind!r}")
    table = claim_table(S, need, verts, budget=budget, cap=max(need, MAX_CLAIM_INDEX))
    return PairFamily(kind, param, frozenset(p for p, c in table.items() if test(c)))


# --------------------------------------------------------------------------
# diamonds
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Diamond:
    e1: int
    e2: int
    core: tuple

    @property
    def indices(self) -> tuple:
        return (self.e1, self.e2)


def diamonds(F: GraphLike) -> list:
    """All pairs of edges of ``F`` meeting in exactly two vertices."""
    S = as_subset(F)
    masks = S.parent.masks
    out = []
    for a, b in combinations(S.indices, 2):
        both = masks[a] & masks[b]
        if both.bit_count() == 2:
            out.append(Diamond(a, b, tuple(v for v in S.parent.edges[a] if both >> v & 1)))
    return out


def _diamond_indices(D) -> tuple:
    if isinstance(D, Diamond):
        return D.indices
    if isinstance(D, EdgeSubset):
        return D.indices
    return tuple(D)


def is_flexible_diamond(F: GraphLike, D) -> bool:
    """Each edge of ``D`` meets ``V(F - D)`` in exactly one vertex."""
    S = as_subset(F)
    d = _diamond_indices(D)
    masks = S.parent.masks
    if len(d) != 2 or not all(i in S for i in d):
        raise DiamondNotInF(f"{d} is not a pair of edges of F")
    if (masks[d[0]] & masks[d[1]]).bit_count() != 2:
        raise DiamondNotInF(f"edges {d} do not form a diamond")
    rest = S.minus(d).vertex_mask
    return all((masks[i] & rest).bit_count() == 1 for i in d)


def diamond_attachment(F: GraphLike, D) -> int:
    """``|V(D) & V(F - D)|``; equals 2 for a flexible diamond attached at two distinct points."""
    S = as_subset(F)
    d = _diamond_indices(D)
    masks = S.parent.masks
    return ((masks[d[0]] | masks[d[1]]) & S.minus(d).vertex_mask).bit_count()


def flexible_diamonds(F: GraphLike) -> list:
    return [D for D in diamonds(F) if is_flexible_diamond(F, D)]
