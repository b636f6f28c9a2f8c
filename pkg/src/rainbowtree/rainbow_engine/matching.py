"""Hopcroft-Karp maximum bipartite matching."""

from __future__ import annotations

from collections import deque
from typing import Hashable, Sequence

INF = float("inf")


def hopcroft_karp(options: Sequence[Sequence[Hashable]]) -> dict[int, Hashable]:
    """Maximum matching from left vertices ``0..len(options)-1`` to right labels.

    ``options[u]`` lists the right labels adjacent to ``u``; the order of each
    list fixes tie-breaking, so equal inputs give equal matchings.
    Returns ``{left: right}`` for matched left vertices.
    """
    n_left = len(options)
    pair_left: list[Hashable | None] = [None] * n_left
    pair_right: dict[Hashable, int] = {}
    dist = [INF] * n_left

    def bfs() -> bool:
        queue = deque()
        for u in range(n_left):
            if pair_left[u] is None:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for r in options[u]:
                w = pair_right.get(r)
                if w is None:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        # iterative DFS along the layered graph
        stack = [(u, iter(options[u]))]
        trail: list[tuple[int, Hashable]] = []
        while stack:
            x, it = stack[-1]
            advanced = False
            for r in it:
                w = pair_right.get(r)
                if w is None:
                    trail.append((x, r))
                    for a, b in trail:
                        pair_left[a] = b
                        pair_right[b] = a
                    return True
                if dist[w] == dist[x] + 1:
                    trail.append((x, r))
                    stack.append((w, iter(options[w])))
                    advanced = True
                    break
            if not advanced:
                dist[x] = INF
                stack.pop()
                if trail:
                    trail.pop()
        return False

    while bfs():
        for u in range(n_left):
            if pair_left[u] is None:
                dfs(u)
    return {u: r for u, r in enumerate(pair_left) if r is not None}
