"""Rainbow forests and the operations that build them."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping

from ..graph_model import Graph
from ..random_model import ColoredSubgraph
from ..unionfind import UnionFind
from .matching import hopcroft_karp


class ForestError(ValueError):
    """An operation would break acyclicity or the distinct-color rule."""


class RainbowForest:
    """Acyclic, rainbow edge set over a host graph.

    ``colors`` maps each forest edge to its color. Components are tracked by
    a union-find that is rebuilt lazily after removals.
    """

    def __init__(self, host: Graph, colors: Mapping[int, int] | None = None):
        self.host = host
        self.colors: dict[int, int] = {}
        self.color_edge: dict[int, int] = {}
        self._uf: UnionFind | None = UnionFind(host.n)
        self._adj: list[list[tuple[int, int]]] | None = None
        for e, c in sorted((colors or {}).items()):
            self.add(e, c)

    @property
    def edges(self) -> set[int]:
        return set(self.colors)

    @property
    def used_colors(self) -> set[int]:
        return set(self.color_edge)

    def __len__(self) -> int:
        return len(self.colors)

    def __contains__(self, e: int) -> bool:
        return e in self.colors

    @property
    def comp(self) -> UnionFind:
        if self._uf is None:
            uf = UnionFind(self.host.n)
            for e in self.colors:
                a, b = self.host.edges[e]
                uf.union(a, b)
            self._uf = uf
        return self._uf

    @property
    def n_components(self) -> int:
        return self.comp.count

    def same_component(self, a: int, b: int) -> bool:
        return self.comp.connected(a, b)

    def joins_components(self, e: int) -> bool:
        a, b = self.host.edges[e]
        return not self.comp.connected(a, b)

    def component_labels(self) -> list[int]:
        return self.comp.min_labels()

    def is_spanning_tree(self) -> bool:
        return len(self.colors) == self.host.n - 1

    def add(self, e: int, color: int) -> None:
        if e in self.colors:
            raise ForestError(f"edge {e} already in forest")
        if color in self.color_edge:
            raise ForestError(f"color {color} already used by edge {self.color_edge[color]}")
        a, b = self.host.edges[e]
        if not self.comp.union(a, b):
            raise ForestError(f"edge {e} closes a cycle")
        self.colors[e] = color
        self.color_edge[color] = e
        self._adj = None

    def remove(self, e: int) -> int:
        """Drop edge ``e`` and return its color."""
        color = self.colors.pop(e)
        del self.color_edge[color]
        self._uf = None
        self._adj = None
        return color

    def exchange(self, add: int, add_color: int, remove: int) -> None:
        """Replace ``remove`` by ``add``; ``remove`` must lie on the cycle of ``add``."""
        path = self.tree_path(*self.host.edges[add])
        if path is None or remove not in path:
            raise ForestError(f"edge {remove} is not replaceable by {add}")
        old = self.colors.pop(remove)
        del self.color_edge[old]
        if add_color in self.color_edge:
            self.colors[remove] = old
            self.color_edge[old] = remove
            raise ForestError(f"color {add_color} already used")
        self.colors[add] = add_color
        self.color_edge[add_color] = add
        self._adj = None  # partition unchanged, union-find stays valid

    def copy(self) -> "RainbowForest":
        other = RainbowForest.__new__(RainbowForest)
        other.host = self.host
        other.colors = dict(self.colors)
        other.color_edge = dict(self.color_edge)
        other._uf = None if self._uf is None else self._uf.copy()
        other._adj = None
        return other

    def _adjacency(self) -> list[list[tuple[int, int]]]:
        if self._adj is None:
            adj: list[list[tuple[int, int]]] = [[] for _ in range(self.host.n)]
            for e in self.colors:
                a, b = self.host.edges[e]
                adj[a].append((b, e))
                adj[b].append((a, e))
            self._adj = adj
        return self._adj

    def tree_path(self, a: int, b: int) -> list[int] | None:
        """Edges on the forest path from ``a`` to ``b``, in order; None if disconnected."""
        if a == b:
            return []
        if not self.comp.connected(a, b):
            return None
        adj = self._adjacency()
        via: dict[int, tuple[int, int]] = {a: (-1, -1)}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            if x == b:
                break
            for y, e in adj[x]:
                if y not in via:
                    via[y] = (x, e)
                    queue.append(y)
        path = []
        x = b
        while x != a:
            x, e = via[x]
            path.append(e)
        path.reverse()
        return path

    def check(self) -> None:
        """Assert acyclicity, distinct colors and ``|edges| + #components = n``."""
        uf = UnionFind(self.host.n)
        for e in self.colors:
            a, b = self.host.edges[e]
            if not uf.union(a, b):
                raise ForestError("forest contains a cycle")
        if len(set(self.colors.values())) != len(self.colors):
            raise ForestError("forest is not rainbow")
        if set(self.color_edge) != set(self.colors.values()):
            raise ForestError("color index out of sync")
        if len(self.colors) + uf.count != self.host.n:
            raise ForestError("edge count and component count disagree")
        if self._uf is not None and self._uf.count != uf.count:
            raise ForestError("cached components stale")

    def __repr__(self) -> str:
        return f"RainbowForest(n={self.host.n}, edges={len(self.colors)}, components={self.n_components})"


def is_replaceable(f: RainbowForest, r: int, e: int) -> bool:
    """True when ``F + e`` has a cycle through forest edge ``r``."""
    if r not in f.colors:
        raise ValueError(f"edge {r} is not in the forest")
    if e in f.colors:
        raise ValueError(f"edge {e} is already in the forest")
    path = f.tree_path(*f.host.edges[e])
    return path is not None and r in path


def build_initial_forest(gp: ColoredSubgraph) -> RainbowForest:
    """Rainbow forest from a color/vertex matching on the colored subgraph.

    Every vertex matched to a color sends one out-edge of that color (the
    lowest-index one), giving a functional digraph whose edges are pairwise
    distinct in color. Each cycle of that digraph loses its lowest-index edge.
    """
    host = gp.host
    n = host.n
    incident: list[dict[int, int]] = [{} for _ in range(n)]
    for e in sorted(gp.colors):
        c = gp.colors[e]
        a, b = host.edges[e]
        incident[a].setdefault(c, e)
        incident[b].setdefault(c, e)

    root = 0  # stands in for the extra color matched with the out-degree-0 vertex
    options = [sorted(incident[v]) + [root] for v in range(n)]
    match = hopcroft_karp(options)

    out: list[int] = [-1] * n
    for v, c in match.items():
        if c != root:
            out[v] = incident[v][c]

    def head(v: int) -> int:
        a, b = host.edges[out[v]]
        return b if a == v else a

    drop = set()
    state = [0] * n  # 0 unseen, 1 on current walk, 2 done
    for start in range(n):
        walk = []
        v = start
        while v != -1 and state[v] == 0:
            state[v] = 1
            walk.append(v)
            v = head(v) if out[v] != -1 else -1
        if v != -1 and state[v] == 1:
            cycle = walk[walk.index(v):]
            drop.add(min(out[x] for x in cycle))
        for x in walk:
            state[x] = 2

    forest = RainbowForest(host)
    for v in range(n):
        e = out[v]
        if e != -1 and e not in drop:
            forest.add(e, gp.colors[e])
    return forest


def greedy_augment(f: RainbowForest, pool: Mapping[int, int]) -> RainbowForest:
    """Add pool edges of unused color that join two components, by ascending index.

    One pass suffices: a rejected edge can never become acceptable later.
    Returns a new forest.
    """
    out = f.copy()
    for e in sorted(pool):
        if e in out.colors:
            continue
        c = pool[e]
        if c not in out.color_edge and out.joins_components(e):
            out.add(e, c)
    return out


def forest_from_edges(host: Graph, edges: Iterable[int], coloring: Mapping[int, int]) -> RainbowForest:
    return RainbowForest(host, {e: coloring[e] for e in edges})
