"""Slow, obviously-correct reference implementations.

Nothing here imports the engine; every function works on plain tuples of
vertex tuples so the oracles stay independent of the code under test.
"""

from __future__ import annotations

from itertools import combinations, permutations


def span(edges) -> int:
    return len(set().union(*edges)) if edges else 0


def has_config(edges, s, k) -> bool:
    return any(span(c) <= s for c in combinations(edges, k))


def gk_members(r, k):
    return [((r - 2) * l + 1, l) for l in range(2, k)] + [((r - 2) * k + 2, k)]


def gk_free(edges, r, k) -> bool:
    return not any(has_config(edges, s, l) for s, l in gk_members(r, k))


def claims(edges, r, x, y, i_max) -> set:
    out = {0}
    for i in range(1, min(i_max, len(edges)) + 1):
        if any(len({x, y}.union(*c)) <= (r - 2) * i + 2 for c in combinations(edges, i)):
            out.add(i)
    return out


def p1(edges) -> set:
    return {p for e in edges for p in combinations(sorted(e), 2)}


def p12(edges, r) -> set:
    verts = sorted(set().union(*edges)) if edges else []
    return {
        (x, y)
        for x, y in combinations(verts, 2)
        if 2 in claims(edges, r, x, y, 2) and 1 not in claims(edges, r, x, y, 1)
    }


def brute_canonical(n, edges) -> tuple:
    """Lexicographically least sorted edge list over all vertex permutations."""
    best = None
    for perm in permutations(range(n)):
        img = tuple(sorted(tuple(sorted(perm[v] for v in e)) for e in edges))
        if best is None or img < best:
            best = img
    return best


def components(edges) -> list:
    """Classes of the transitive closure of 'share at least two vertices'."""
    todo = set(range(len(edges)))
    out = []
    while todo:
        stack = [todo.pop()]
        comp = set(stack)
        while stack:
            a = stack.pop()
            for b in list(todo):
                if len(set(edges[a]) & set(edges[b])) >= 2:
                    todo.discard(b)
                    comp.add(b)
                    stack.append(b)
        out.append(tuple(sorted(comp)))
    return sorted(out)


def merge_12(edges, r) -> list:
    """Merge any two parts A, B with a pair covered by A and 2-claimed by B, until stable."""
    parts = [list(p) for p in components(edges)]
    changed = True
    while changed:
        changed = False
        for a, b in permutations(range(len(parts)), 2):
            A = [edges[i] for i in parts[a]]
            B = [edges[i] for i in parts[b]]
            if any(2 in claims(B, r, x, y, 2) for x, y in p1(A)):
                parts[a] = sorted(parts[a] + parts[b])
                del parts[b]
                changed = True
                break
    return sorted(tuple(p) for p in parts)


def max_free(n, r, s, k) -> int:
    """Largest r-graph on n vertices with every k edges spanning more than s vertices.

    Plain include/exclude backtracking over all r-sets with a counting bound.
    """
    cands = list(combinations(range(n), r))
    best = 0

    def ok(chosen, e):
        return not any(span(c + (e,)) <= s for c in combinations(chosen, k - 1))

    def rec(i, chosen):
        nonlocal best
        best = max(best, len(chosen))
        if i == len(cands) or len(chosen) + len(cands) - i <= best:
            return
        e = cands[i]
        if ok(chosen, e):
            rec(i + 1, chosen + (e,))
        rec(i + 1, chosen)

    rec(0, ())
    return best
