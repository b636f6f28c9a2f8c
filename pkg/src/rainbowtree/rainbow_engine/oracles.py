"""Exact decision procedures for rainbow spanning trees.

``max_rainbow_forest_exact`` is matroid intersection of the graphic matroid
with the partition matroid of the colors. ``schrijver_suzuki_decide`` checks
the component-count condition over all color subsets and is exponential.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Mapping

from ..graph_model import Graph
from ..random_model import ColoredSubgraph
from ..unionfind import UnionFind
from .forest import RainbowForest

MAX_SUBSET_COLORS = 24


class GuardExceeded(ValueError):
    pass


class _RootedForest:
    """Parent pointers and depths for fast path extraction."""

    def __init__(self, host: Graph, edges):
        n = host.n
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for e in edges:
            a, b = host.edges[e]
            adj[a].append((b, e))
            adj[b].append((a, e))
        self.parent = [-1] * n
        self.parent_edge = [-1] * n
        self.depth = [0] * n
        self.comp = [-1] * n
        for r in range(n):
            if self.comp[r] != -1:
                continue
            self.comp[r] = r
            stack = [r]
            while stack:
                x = stack.pop()
                for y, e in adj[x]:
                    if self.comp[y] == -1:
                        self.comp[y] = r
                        self.parent[y] = x
                        self.parent_edge[y] = e
                        self.depth[y] = self.depth[x] + 1
                        stack.append(y)

    def path(self, a: int, b: int) -> list[int]:
        depth, parent, pe = self.depth, self.parent, self.parent_edge
        out = []
        while depth[a] > depth[b]:
            out.append(pe[a])
            a = parent[a]
        while depth[b] > depth[a]:
            out.append(pe[b])
            b = parent[b]
        while a != b:
            out.append(pe[a])
            out.append(pe[b])
            a, b = parent[a], parent[b]
        return out


def augment_once(forest: RainbowForest, pool: Mapping[int, int]) -> RainbowForest | None:
    """One shortest augmenting path in the exchange graph, or None if maximum.

    Searches backwards from pool edges of unused color: such an edge ``y``
    is reached from every forest edge ``x`` on its forest cycle, and ``x``
    is reached from every non-forest edge sharing ``x``'s color. The search
    ends at a non-forest edge joining two components.
    """
    host = forest.host
    inside = forest.colors
    used = forest.color_edge
    rooted = _RootedForest(host, inside)
    comp = rooted.comp
    outside: dict[int, list[int]] = {}
    sinks = []
    for e in sorted(pool):
        if e in inside:
            continue
        c = pool[e]
        outside.setdefault(c, []).append(e)
        if c not in used:
            a, b = host.edges[e]
            if comp[a] != comp[b]:
                out = forest.copy()
                out.add(e, c)
                return out
            sinks.append(e)

    succ: dict[int, int] = {}
    seen_y = set(sinks)
    seen_x: set[int] = set()
    queue = deque(sinks)
    start = None
    while queue and start is None:
        y = queue.popleft()
        a, b = host.edges[y]
        for x in sorted(rooted.path(a, b)):
            if x in seen_x:
                continue
            seen_x.add(x)
            succ[x] = y
            for y2 in outside.get(inside[x], ()):
                if y2 in seen_y:
                    continue
                seen_y.add(y2)
                succ[y2] = x
                a2, b2 = host.edges[y2]
                if comp[a2] != comp[b2]:
                    start = y2
                    break
                queue.append(y2)
            if start is not None:
                break
    if start is None:
        return None

    add, drop = [], []
    node = start
    while True:
        add.append(node)
        if node not in succ:
            break
        x = succ[node]
        drop.append(x)
        node = succ[x]
    dropped = set(drop)
    colors = {e: c for e, c in inside.items() if e not in dropped}
    for e in add:
        colors[e] = pool[e]
    return RainbowForest(host, colors)


def max_rainbow_forest_exact(
    cg: ColoredSubgraph | None = None,
    *,
    pool: Mapping[int, int] | None = None,
    host: Graph | None = None,
    start: RainbowForest | None = None,
) -> RainbowForest:
    """Maximum-cardinality rainbow forest of a colored graph.

    Either pass ``cg`` or ``host`` and ``pool``. ``start`` (a rainbow forest
    inside the pool) seeds the augmentation; by default a greedy forest in
    ascending edge order is used.
    """
    if cg is not None:
        host, pool = cg.host, cg.colors
    if host is None or pool is None:
        raise TypeError("need a colored subgraph or host and pool")
    if start is None:
        forest = RainbowForest(host)
        for e in sorted(pool):
            c = pool[e]
            if c not in forest.color_edge and forest.joins_components(e):
                forest.add(e, c)
    else:
        forest = start.copy()
    target = host.n - 1
    while len(forest) < target:
        nxt = augment_once(forest, pool)
        if nxt is None:
            break
        forest = nxt
    return forest


def has_rainbow_spanning_tree(cg: ColoredSubgraph) -> bool:
    """Exact decision, with cheap necessary conditions checked first."""
    n = cg.n
    if n <= 1:
        return True
    if len(cg.present_colors()) < n - 1 or len(cg.colors) < n - 1:
        return False
    uf = UnionFind(n)
    for e in cg.colors:
        uf.union(*cg.host.edges[e])
    if uf.count > 1:
        return False
    return len(max_rainbow_forest_exact(cg)) == n - 1


def schrijver_suzuki_decide(cg: ColoredSubgraph) -> bool:
    """True iff deleting any ``k <= n-2`` colors leaves at most ``k+1`` components."""
    n = cg.n
    if n <= 1:
        return True
    classes = cg.color_classes()
    palette = sorted(classes)
    if len(palette) > MAX_SUBSET_COLORS:
        raise GuardExceeded(f"{len(palette)} colors exceed the guard of {MAX_SUBSET_COLORS}")
    edges = cg.host.edges
    for k in range(0, min(len(palette), n - 2) + 1):
        for removed in combinations(palette, k):
            gone = set(removed)
            uf = UnionFind(n)
            for c in palette:
                if c in gone:
                    continue
                for e in classes[c]:
                    uf.union(*edges[e])
            if uf.count > k + 1:
                return False
    return True
