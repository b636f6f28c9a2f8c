"""Independent brute-force oracles used by the test suite.

Nothing here imports the package's algorithms; only plain tuples and sets.
"""

from __future__ import annotations

from itertools import combinations


def _find(parent, x):
    while parent[x] != x:
        x = parent[x]
    return x


def count_components(n, edges):
    parent = list(range(n))
    k = n
    for a, b in edges:
        ra, rb = _find(parent, a), _find(parent, b)
        if ra != rb:
            parent[ra] = rb
            k -= 1
    return k


def partition_of(n, edges):
    """Frozen set of frozen blocks."""
    parent = list(range(n))
    for a, b in edges:
        ra, rb = _find(parent, a), _find(parent, b)
        if ra != rb:
            parent[ra] = rb
    groups = {}
    for v in range(n):
        groups.setdefault(_find(parent, v), set()).add(v)
    return frozenset(frozenset(g) for g in groups.values())


def is_forest(n, edges):
    return count_components(n, edges) == n - len(edges)


def min_cut_bruteforce(n, edges):
    """Minimum boundary over all 2**(n-1) - 1 bipartitions."""
    best = None
    for mask in range(1, 1 << (n - 1)):
        side = [(mask >> v) & 1 for v in range(n - 1)] + [0]
        cut = sum(1 for a, b in edges if side[a] != side[b])
        best = cut if best is None else min(best, cut)
    return best


def has_rainbow_spanning_tree_bruteforce(n, colored_edges):
    """Backtracking over edges: include or skip, keeping acyclic and rainbow.

    ``colored_edges`` is a list of ``(a, b, color)``.
    """
    if n <= 1:
        return True
    m = len(colored_edges)

    def rec(i, chosen, used, parent):
        if len(chosen) == n - 1:
            return True
        if m - i < n - 1 - len(chosen):
            return False
        a, b, c = colored_edges[i]
        if c not in used:
            ra, rb = _find(parent, a), _find(parent, b)
            if ra != rb:
                p2 = parent[:]
                p2[ra] = rb
                if rec(i + 1, chosen + [i], used | {c}, p2):
                    return True
        return rec(i + 1, chosen, used, parent)

    return rec(0, [], frozenset(), list(range(n)))


def max_rainbow_forest_bruteforce(n, colored_edges):
    best = 0
    for k in range(min(n - 1, len(colored_edges)), 0, -1):
        for sub in combinations(colored_edges, k):
            if len({c for _, _, c in sub}) == k and is_forest(n, [(a, b) for a, b, _ in sub]):
                return k
    return best


def cycle_contains(n, forest_edges, e, r):
    """Add ``e`` to the forest and test whether ``r`` lies on the created cycle.

    ``r`` is on the cycle iff removing it from ``F + e`` keeps the graph with
    the same number of components (it is not a bridge).
    """
    with_e = list(forest_edges) + [e]
    if is_forest(n, with_e):
        return False
    without_r = [x for x in with_e if x != r]
    return count_components(n, without_r) == count_components(n, with_e)


def definable_J(n, pool, forest, sigma):
    """Colors ``j`` admitting a rainbow forest on ``pool | forest`` with the
    partition of ``forest`` and color set ``colors(forest) + sigma - j``.

    ``pool`` and ``forest`` map ``(a, b) -> color``.
    """
    universe = dict(pool)
    universe.update(forest)
    items = sorted(universe.items())
    target_partition = partition_of(n, list(forest))
    base = set(forest.values()) | {sigma}
    out = set()
    k = len(forest)
    for sub in combinations(items, k):
        colors = [c for _, c in sub]
        if len(set(colors)) != k or not set(colors) <= base:
            continue
        edges = [e for e, _ in sub]
        if not is_forest(n, edges) or partition_of(n, edges) != target_partition:
            continue
        (j,) = base - set(colors)
        out.add(j)
    return out


def larger_rainbow_forest_exists(n, pool, forest):
    universe = dict(pool)
    universe.update(forest)
    items = sorted(universe.items())
    k = len(forest) + 1
    for sub in combinations(items, k):
        if len({c for _, c in sub}) == k and is_forest(n, [e for e, _ in sub]):
            return True
    return False


def spanning_trees(n, edges):
    """Every spanning tree, as a tuple of edge positions (plain combinations)."""
    for sub in combinations(range(len(edges)), n - 1):
        if is_forest(n, [edges[i] for i in sub]):
            yield sub
