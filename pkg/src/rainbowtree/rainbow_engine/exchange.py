"""Breadth-first search over single-edge exchanges of a rainbow forest.

Starting from ``(F*, sigma)`` with ``sigma`` unused by ``F*``, a state
``(F, j)`` is a rainbow forest with the partition of ``F*`` whose colors are
those of ``F*`` plus ``sigma`` minus ``j``. Expanding it tries every pool
edge of color ``j``: one joining two components gives a larger forest at
once; otherwise each cycle edge of a not-yet-seen color yields a child.
Each color is visited at most once, so at most ``palette + 1`` states exist.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .forest import ForestError, RainbowForest


@dataclass(frozen=True)
class ExchangeState:
    """One BFS node, stored as a delta from its parent."""

    missing_color: int
    parent: int | None
    added: int | None
    removed: int | None
    depth: int


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    colors_visited: int = 0
    pool_edges_scanned: int = 0


@dataclass
class ReplacementSearchResult:
    outcome: str  # "augmented" or "color_set"
    root: RainbowForest
    sigma: int
    pool: Mapping[int, int]
    states: list[ExchangeState]
    witness_index: dict[int, int] = field(default_factory=dict)
    augmented: RainbowForest | None = None
    augmenting_edge: int | None = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def J(self) -> set[int]:
        return set(self.witness_index)

    def delta(self, j: int) -> list[tuple[int, int]]:
        """``(added, removed)`` pairs leading from the root to color ``j``'s witness."""
        steps = []
        k: int | None = self.witness_index[j]
        while k is not None:
            s = self.states[k]
            if s.added is not None:
                steps.append((s.added, s.removed))
            k = s.parent
        steps.reverse()
        return steps

    def witness(self, j: int) -> RainbowForest:
        """Materialize the forest missing color ``j`` by replaying its delta."""
        return _replay(self.root, self.delta(j), self.pool)


def _replay(root: RainbowForest, delta, pool: Mapping[int, int]) -> RainbowForest:
    f = root.copy()
    for added, removed in delta:
        f.remove(removed)
        f.colors[added] = pool[added]
        f.color_edge[pool[added]] = added
    # the partition never changes, so the copied union-find stays valid
    return f


def _edge_set(root: RainbowForest, delta) -> set[int]:
    edges = set(root.colors)
    for added, removed in delta:
        edges.discard(removed)
        edges.add(added)
    return edges


def _adjacency(host, edges) -> list[list[tuple[int, int]]]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(host.n)]
    for e in edges:
        a, b = host.edges[e]
        adj[a].append((b, e))
        adj[b].append((a, e))
    return adj


def _path(adj, a: int, b: int) -> list[int]:
    via = {a: (-1, -1)}
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
    return path


def replacement_color_set(
    f_star: RainbowForest,
    sigma: int,
    pool: Mapping[int, int],
    verify_every: int = 0,
) -> ReplacementSearchResult:
    """Exhaustive exchange BFS from ``(f_star, sigma)`` over ``pool``.

    ``pool`` maps edge index to color and must agree with ``f_star`` on
    shared edges. Pool edges are scanned in ascending index order and cycle
    edges in ascending index order. With ``verify_every = k > 0`` every k-th
    new state is re-checked against both defining properties.
    """
    if sigma in f_star.color_edge:
        raise ValueError(f"sigma={sigma} is already used by the forest")
    for e, c in f_star.colors.items():
        if e in pool and pool[e] != c:
            raise ValueError(f"pool color of edge {e} disagrees with the forest")

    host = f_star.host
    # search universe: pool plus the root forest's own edges
    color_of = dict(pool)
    color_of.update(f_star.colors)
    by_color: dict[int, list[int]] = {}
    for e in sorted(color_of):
        by_color.setdefault(color_of[e], []).append(e)
    labels = f_star.component_labels()

    root_state = ExchangeState(sigma, None, None, None, 0)
    result = ReplacementSearchResult("color_set", f_star, sigma, color_of, [root_state])
    result.witness_index[sigma] = 0
    stats = result.stats
    queue = deque([0])
    while queue:
        k = queue.popleft()
        state = result.states[k]
        j = state.missing_color
        stats.nodes_expanded += 1
        candidates = by_color.get(j, ())
        if not candidates:
            continue
        delta = result.delta(j)
        adj = None
        for e in candidates:
            stats.pool_edges_scanned += 1
            a, b = host.edges[e]
            if labels[a] != labels[b]:
                forest = _replay(f_star, delta, color_of)
                forest.add(e, j)
                result.outcome = "augmented"
                result.augmented = forest
                result.augmenting_edge = e
                return result
            if adj is None:
                adj = _adjacency(host, _edge_set(f_star, delta))
            # F misses color j, so e is never already in F
            for r in sorted(_path(adj, a, b)):
                c = color_of[r]
                if c in result.witness_index:
                    continue
                child = ExchangeState(c, k, e, r, state.depth + 1)
                result.states.append(child)
                idx = len(result.states) - 1
                result.witness_index[c] = idx
                queue.append(idx)
                if verify_every and idx % verify_every == 0:
                    check_witness(result, c)
    stats.colors_visited = len(result.witness_index)
    return result


def check_witness(result: ReplacementSearchResult, j: int) -> None:
    """Recompute the witness for ``j`` from scratch and test both properties."""
    root = result.root
    f = RainbowForest(root.host)
    for e in sorted(_edge_set(root, result.delta(j))):
        f.add(e, result.pool[e])  # raises on a cycle or repeated color
    if f.component_labels() != root.component_labels():
        raise ForestError(f"witness for color {j} changes the partition")
    expected = (set(root.color_edge) | {result.sigma}) - {j}
    if set(f.color_edge) != expected:
        raise ForestError(f"witness for color {j} has the wrong color set")
