"""Host graphs: construction, text I/O, connectivity queries."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import networkx as nx
import numpy as np

from .unionfind import UnionFind

FAMILIES = ("complete", "circulant", "random-regular")

# configuration model: attempts before giving up on a simple pairing
MAX_PAIRING_ATTEMPTS = 200


class InfeasibleHost(ValueError):
    """Raised when a host specification cannot be realized."""


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``.

    Edges carry stable indices; they are stored as ``(u, v)`` with ``u < v``
    and sorted lexicographically, so edge ``i`` means the same pair for every
    consumer (colorings, subgraphs and forests are all index sets).
    """

    __slots__ = ("n", "edges", "adjacency", "_index", "_u", "_v")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        normalized = set()
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a}, {b}) out of range for n={n}")
            pair = (a, b) if a < b else (b, a)
            if pair in normalized:
                raise ValueError(f"duplicate edge {pair}")
            normalized.add(pair)
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(normalized))
        self._index = {e: i for i, e in enumerate(self.edges)}
        adjacency: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for i, (a, b) in enumerate(self.edges):
            adjacency[a].append((b, i))
            adjacency[b].append((a, i))
        self.adjacency = tuple(tuple(row) for row in adjacency)
        self._u = np.fromiter((e[0] for e in self.edges), dtype=np.int64, count=len(self.edges))
        self._v = np.fromiter((e[1] for e in self.edges), dtype=np.int64, count=len(self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        """Endpoint arrays ``(u, v)`` aligned with edge indices."""
        return self._u, self._v

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(row) for row in self.adjacency]

    def edge_index(self, a: int, b: int) -> int:
        """Index of edge ``ab``; raises ``KeyError`` if absent."""
        return self._index[(a, b) if a < b else (b, a)]

    def has_edge(self, a: int, b: int) -> bool:
        return ((a, b) if a < b else (b, a)) in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class HostSpec:
    family: str
    n: int
    d: int | None = None
    offsets: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise InfeasibleHost(f"unknown host family {self.family!r}")
        object.__setattr__(self, "offsets", tuple(self.offsets))

    @property
    def degree(self) -> int:
        if self.family == "complete":
            return self.n - 1
        if self.family == "circulant":
            return circulant_degree(self.n, self.offsets)
        if self.d is None:
            raise InfeasibleHost("random-regular host needs d")
        return self.d

    @classmethod
    def circulant_with_degree(cls, n: int, d: int) -> "HostSpec":
        """Circulant host with consecutive offsets ``1..k`` and degree ``d``."""
        if d < 2 or d >= n:
            raise InfeasibleHost(f"no circulant of degree {d} on {n} vertices")
        if d % 2 == 1:
            # consecutive offsets reach odd degree only through n/2, i.e. K_n
            if n % 2 or d != n - 1:
                raise InfeasibleHost(f"odd degree {d} needs even n and d = n - 1")
            k = n // 2
        else:
            k = d // 2
        return cls("circulant", n, d, tuple(range(1, k + 1)))


def circulant_degree(n: int, offsets: Sequence[int]) -> int:
    deg = 2 * len(offsets)
    if n % 2 == 0 and n // 2 in offsets:
        deg -= 1
    return deg


def complete_graph(n: int) -> Graph:
    return Graph(n, ((a, b) for a in range(n) for b in range(a + 1, n)))


def circulant_graph(n: int, offsets: Sequence[int]) -> Graph:
    if not offsets:
        raise InfeasibleHost("circulant needs at least one offset")
    if len(set(offsets)) != len(offsets):
        raise InfeasibleHost("circulant offsets must be distinct")
    for k in offsets:
        if not 1 <= k <= n // 2:
            raise InfeasibleHost(f"offset {k} outside 1..{n // 2}")
    pairs = set()
    for v in range(n):
        for k in offsets:
            w = (v + k) % n
            pairs.add((v, w) if v < w else (w, v))
    return Graph(n, pairs)


def random_regular_graph(n: int, d: int, rng) -> Graph:
    """Random simple ``d``-regular graph.

    Tries the pairing model with rejection first, which is exactly uniform but
    whose acceptance rate decays like ``exp(-d**2 / 4)``. After
    ``MAX_PAIRING_ATTEMPTS`` rejections it falls back to the sequential
    pairing of networkx, seeded from the same stream.
    """
    if (n * d) % 2:
        raise InfeasibleHost(f"n*d = {n * d} is odd")
    if d == 0:
        return Graph(n, ())
    gen = rng.generator
    stubs = np.repeat(np.arange(n), d)
    for _ in range(MAX_PAIRING_ATTEMPTS):
        perm = gen.permutation(stubs)
        a, b = perm[0::2], perm[1::2]
        if np.any(a == b):
            continue
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        keys = lo * n + hi
        if len(np.unique(keys)) != len(keys):
            continue
        return Graph(n, zip(lo.tolist(), hi.tolist()))
    nxg = nx.random_regular_graph(d, n, seed=int(gen.integers(1 << 62)))
    return Graph(n, nxg.edges())


def build_host(spec: HostSpec, rng=None) -> Graph:
    n = spec.n
    if n < 2:
        raise InfeasibleHost("host needs at least 2 vertices")
    if spec.family == "complete":
        if spec.d is not None and spec.d != n - 1:
            raise InfeasibleHost(f"complete graph on {n} vertices has degree {n - 1}")
        g = complete_graph(n)
    elif spec.family == "circulant":
        g = circulant_graph(n, spec.offsets)
        if spec.d is not None and spec.d != circulant_degree(n, spec.offsets):
            raise InfeasibleHost(f"offsets {spec.offsets} do not give degree {spec.d}")
    else:
        if spec.d is None or not 0 <= spec.d < n:
            raise InfeasibleHost(f"random-regular needs 0 <= d < n, got d={spec.d}")
        if rng is None:
            raise InfeasibleHost("random-regular host needs a random stream")
        g = random_regular_graph(n, spec.d, rng)
    return g


def components(g: Graph, edge_subset: Iterable[int]) -> list[int]:
    """Component label per vertex; each block is labeled by its minimum vertex."""
    uf = UnionFind(g.n)
    for i in edge_subset:
        a, b = g.edges[i]
        uf.union(a, b)
    return uf.min_labels()


def blocks(labels: Sequence[int]) -> list[list[int]]:
    """Group a label vector into sorted blocks, ordered by minimum vertex."""
    groups: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        groups.setdefault(lab, []).append(v)
    return [groups[k] for k in sorted(groups)]


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    return len(set(components(g, range(g.m)))) == 1


def edge_connectivity(g: Graph) -> int:
    """Global minimum edge cut (Stoer-Wagner on a dense weight matrix).

    Returns 0 for disconnected graphs and for graphs with fewer than two
    vertices.
    """
    n = g.n
    if n < 2 or not is_connected(g):
        return 0
    w = np.zeros((n, n), dtype=np.int64)
    u, v = g.endpoints
    w[u, v] = 1
    w[v, u] = 1
    active = list(range(n))
    best = None
    while len(active) > 1:
        idx = np.array(active)
        sub = w[np.ix_(idx, idx)]
        k = len(active)
        in_a = np.zeros(k, dtype=bool)
        weights = sub[0].copy()
        in_a[0] = True
        prev, last, cut = 0, 0, 0
        for _ in range(k - 1):
            nxt = int(np.argmax(np.where(in_a, -1, weights)))
            prev, last, cut = last, nxt, int(weights[nxt])
            in_a[nxt] = True
            weights += sub[nxt]
        if best is None or cut < best:
            best = cut
        s, t = active[prev], active[last]
        w[s, :] += w[t, :]
        w[:, s] += w[:, t]
        w[s, s] = 0
        w[t, :] = 0
        w[:, t] = 0
        active.remove(t)
    return int(best)


def write_graph(g: Graph, fh: TextIO) -> None:
    fh.write(f"{g.n} {g.m}\n")
    for a, b in g.edges:
        fh.write(f"{a} {b}\n")


def read_graph(fh: TextIO) -> Graph:
    lines = [ln.split() for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty graph file")
    n, m = int(lines[0][0]), int(lines[0][1])
    body = lines[1:]
    if len(body) != m:
        raise ValueError(f"header declares {m} edges, found {len(body)}")
    return Graph(n, ((int(a), int(b)) for a, b, *_ in body))
