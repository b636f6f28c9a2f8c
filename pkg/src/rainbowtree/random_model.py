"""Random subgraphs, uniform colorings and the layered exposure of G'.

Logarithms are natural throughout. The layered union consists of one dense
layer kept with probability ``p`` followed by sparse layers indexed by ``t``
in decreasing order; an edge present in several layers takes the color it
received in the earliest one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, TextIO

import numpy as np

from .graph_model import Graph

MASK64 = (1 << 64) - 1

# splitmix64 finalizer constants (Steele, Lea, Flood 2014)
_MIX_GAMMA = 0x9E3779B97F4A7C15
_MIX_M1 = 0xBF58476D1CE4E5B9
_MIX_M2 = 0x94D049BB133111EB

LOG_CONVENTION = "natural"


def mix64(x: int) -> int:
    """Bijective 64-bit avalanche mixer (splitmix64 output function)."""
    z = (x + _MIX_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * _MIX_M1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_M2) & MASK64
    return z ^ (z >> 31)


def derive_stream_id(trial_index: int, layer_index: int) -> int:
    """Injective for ``trial_index, layer_index < 2**32``."""
    if not (0 <= trial_index < 1 << 32 and 0 <= layer_index < 1 << 32):
        raise ValueError("trial and layer indices must fit in 32 bits")
    return mix64((trial_index << 32) | layer_index)


class RandomStream:
    """A reproducible random stream identified by ``(seed, stream_id)``.

    Draws come from numpy's PCG64 seeded with the pair, so equal pairs give
    equal draws on every platform numpy supports.
    """

    __slots__ = ("seed", "stream_id", "generator")

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = seed & MASK64
        self.stream_id = stream_id & MASK64
        self.generator = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([self.seed, self.stream_id]))
        )

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed:#x}, stream_id={self.stream_id:#x})"


def derive_stream(seed: int, trial_index: int, layer_index: int) -> RandomStream:
    return RandomStream(seed, derive_stream_id(trial_index, layer_index))


@dataclass
class ColoredSubgraph:
    """Edge subset of ``host`` with one color in ``1..palette_size`` per edge.

    ``colors`` maps edge index to color; its key set is the kept edge set.
    """

    host: Graph
    colors: dict[int, int]
    palette_size: int
    layer_label: str = "G_p"

    @property
    def kept(self) -> list[int]:
        return sorted(self.colors)

    @property
    def n(self) -> int:
        return self.host.n

    def __len__(self) -> int:
        return len(self.colors)

    def color_classes(self) -> dict[int, list[int]]:
        """Edges grouped by color, each list in ascending edge order."""
        classes: dict[int, list[int]] = {}
        for e in sorted(self.colors):
            classes.setdefault(self.colors[e], []).append(e)
        return classes

    def present_colors(self) -> set[int]:
        return set(self.colors.values())

    def missing_colors(self) -> list[int]:
        present = self.present_colors()
        return [c for c in range(1, self.palette_size + 1) if c not in present]

    def isolated_vertices(self) -> list[int]:
        touched = np.zeros(self.host.n, dtype=bool)
        if self.colors:
            idx = np.fromiter(self.colors, dtype=np.int64, count=len(self.colors))
            u, v = self.host.endpoints
            touched[u[idx]] = True
            touched[v[idx]] = True
        return np.flatnonzero(~touched).tolist()

    def validate(self) -> None:
        for e, c in self.colors.items():
            if not 0 <= e < self.host.m:
                raise ValueError(f"edge index {e} not in host")
            if not 1 <= c <= self.palette_size:
                raise ValueError(f"color {c} of edge {e} outside 1..{self.palette_size}")


@dataclass(frozen=True)
class ModelParams:
    """Densities of the layered exposure.

    ``coeff`` overrides the total coefficient ``2 + epsilon``; the dense layer
    then uses the midpoint ``(coeff + 2) / 2``, matching ``2 + epsilon/2``.
    """

    n: int
    d: int
    epsilon: float = 0.5
    coeff: float | None = None
    palette_size: int | None = None

    @property
    def total_coefficient(self) -> float:
        return self.coeff if self.coeff is not None else 2.0 + self.epsilon

    @property
    def dense_coefficient(self) -> float:
        return (self.total_coefficient + 2.0) / 2.0

    @property
    def palette(self) -> int:
        return self.palette_size if self.palette_size is not None else self.n - 1

    @property
    def p(self) -> float:
        return self.dense_coefficient * math.log(self.n) / self.d

    @property
    def t_max(self) -> int:
        """Largest sparse index, ``floor(ln^3 n) - 1``."""
        return math.floor(math.log(self.n) ** 3) - 1

    def sparse_indices(self) -> list[int]:
        """Sparse layer indices in exposure order (descending, down to 2)."""
        return list(range(self.t_max, 1, -1))

    def s(self, t: int) -> float:
        return math.sqrt(math.log(self.n)) / (t * self.n)

    def inclusion_mass(self) -> float:
        """``p + sum_t s_t``, an upper bound on any edge's chance of being in G'."""
        return self.p + sum(self.s(t) for t in self.sparse_indices())

    def inclusion_bound(self) -> float:
        """``(2 + epsilon) ln n / d``; exceeds ``inclusion_mass`` only for huge n."""
        return self.total_coefficient * math.log(self.n) / self.d

    def check(self) -> None:
        if self.n < 2 or self.d < 1:
            raise ValueError("need n >= 2 and d >= 1")
        if self.palette < 1:
            raise ValueError("palette must be positive")
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"dense layer probability p={self.p:.6g} outside (0, 1)")
        for t in self.sparse_indices():
            if not 0.0 < self.s(t) < 1.0:
                raise ValueError(f"sparse probability s_{t} outside (0, 1)")


def sample_subgraph(g: Graph, q: float, rng: RandomStream) -> list[int]:
    """Keep each edge independently with probability ``q``; sorted indices."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"probability {q} outside [0, 1]")
    m = g.m
    if q == 0.0 or m == 0:
        return []
    if q == 1.0:
        return list(range(m))
    gen = rng.generator
    # a binomial count plus a uniform subset has the same law as m coin flips
    k = int(gen.binomial(m, q))
    chosen = gen.choice(m, size=k, replace=False)
    chosen.sort()
    return chosen.tolist()


def color_uniform(
    host: Graph,
    edge_set: Iterable[int],
    palette_size: int,
    rng: RandomStream,
    layer_label: str = "G_p",
) -> ColoredSubgraph:
    if palette_size < 1:
        raise ValueError("palette_size must be at least 1")
    edges = sorted(edge_set)
    draws = rng.generator.integers(1, palette_size + 1, size=len(edges))
    return ColoredSubgraph(host, dict(zip(edges, draws.tolist())), palette_size, layer_label)


def sample_colored(
    host: Graph, q: float, palette_size: int, rng: RandomStream, layer_label: str = "G_p"
) -> ColoredSubgraph:
    return color_uniform(host, sample_subgraph(host, q, rng), palette_size, rng, layer_label)


@dataclass
class ExposureStack:
    """Ordered layers ``G_p, G_{s_T}, ..., G_{s_2}`` with first-layer-wins colors."""

    host: Graph
    params: ModelParams
    layers: list[ColoredSubgraph]
    sparse_index: list[int]
    stream_ids: list[int]
    _source: dict[int, int] | None = field(default=None, repr=False)

    @property
    def palette_size(self) -> int:
        return self.params.palette

    @property
    def t_max(self) -> int:
        return self.sparse_index[0] if self.sparse_index else 1

    def layer_position(self, t: int) -> int:
        if not self.sparse_index or not 2 <= t <= self.t_max:
            raise ValueError(f"sparse index {t} outside 2..{self.t_max}")
        return 1 + self.t_max - t

    def source(self) -> dict[int, int]:
        """Edge index -> position of the earliest layer containing it."""
        if self._source is None:
            src: dict[int, int] = {}
            for pos, layer in enumerate(self.layers):
                for e in layer.colors:
                    src.setdefault(e, pos)
            self._source = src
        return self._source


def build_exposure_stack(
    g: Graph, params: ModelParams, seed: int, trial_index: int = 0
) -> ExposureStack:
    """Sample and color every layer from its own derived stream.

    Layer ``k`` in exposure order uses stream ``(seed, trial_index, k)``.
    When ``floor(ln^3 n) - 1 < 2`` only the dense layer is built.
    """
    params.check()
    palette = params.palette
    layers, ids = [], []
    rng = derive_stream(seed, trial_index, 0)
    layers.append(sample_colored(g, params.p, palette, rng, "G_p"))
    ids.append(rng.stream_id)
    sparse = params.sparse_indices()
    for pos, t in enumerate(sparse, start=1):
        rng = derive_stream(seed, trial_index, pos)
        layers.append(sample_colored(g, params.s(t), palette, rng, f"G_s{t}"))
        ids.append(rng.stream_id)
    return ExposureStack(g, params, layers, sparse, ids)


def flatten(stack: ExposureStack | ColoredSubgraph) -> ColoredSubgraph:
    """Union of the layers, each edge colored by its earliest layer."""
    if isinstance(stack, ColoredSubgraph):
        return ColoredSubgraph(stack.host, dict(stack.colors), stack.palette_size, "flattened")
    colors: dict[int, int] = {}
    for layer in stack.layers:
        for e, c in layer.colors.items():
            colors.setdefault(e, c)
    return ColoredSubgraph(stack.host, dict(sorted(colors.items())), stack.palette_size, "flattened")


def fresh_layer_view(
    stack: ExposureStack, t: int, forbidden: Iterable[Iterable[int]] | None = None
) -> list[tuple[int, int]]:
    """Colored edges of layer ``s_t`` absent from every earlier layer.

    These are exactly the edges whose flattened color comes from ``s_t``.
    ``forbidden`` may supply the earlier layers' edge sets explicitly;
    otherwise they are read off the stack. Sorted by edge index.
    """
    pos = stack.layer_position(t)
    layer = stack.layers[pos]
    if forbidden is None:
        src = stack.source()
        return [(e, layer.colors[e]) for e in sorted(layer.colors) if src[e] == pos]
    seen = set()
    for edges in forbidden:
        seen.update(edges)
    return [(e, layer.colors[e]) for e in sorted(layer.colors) if e not in seen]


def inclusion_budget(log_n: float, epsilon: float, d_over_n: float = 1.0) -> tuple[float, float, float]:
    """Scaled inclusion masses ``(n*p, n*sum s_t, n*(2+eps) ln n / d)``.

    Works from ``ln n`` so it can be evaluated far beyond float range of n.
    The harmonic tail uses the digamma function.
    """
    from scipy.special import digamma

    top = math.floor(log_n ** 3) - 1
    dense = (2.0 + epsilon / 2.0) * log_n / d_over_n
    if top < 2:
        sparse = 0.0
    else:
        harmonic = float(digamma(top + 1) - digamma(2))  # 1/2 + ... + 1/top
        sparse = math.sqrt(log_n) * harmonic
    bound = (2.0 + epsilon) * log_n / d_over_n
    return dense, sparse, bound


def budget_threshold_log_n(epsilon: float, d_over_n: float = 1.0) -> float:
    """Smallest ``ln n`` (to 1e-6 relative) beyond which ``p + sum s_t`` stays under budget."""
    def ok(L: float) -> bool:
        dense, sparse, bound = inclusion_budget(L, epsilon, d_over_n)
        return dense + sparse < bound

    lo, hi = 1.0, 2.0
    while not ok(hi):
        lo, hi = hi, hi * 2.0
    while hi - lo > 1e-6 * hi:
        mid = (lo + hi) / 2.0
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def write_colored(cg: ColoredSubgraph, fh: TextIO) -> None:
    """Header ``n m palette`` then ``u v color`` lines in edge order."""
    fh.write(f"{cg.n} {len(cg.colors)} {cg.palette_size}\n")
    for e in sorted(cg.colors):
        a, b = cg.host.edges[e]
        fh.write(f"{a} {b} {cg.colors[e]}\n")


def read_colored(fh: TextIO, host: Graph | None = None) -> ColoredSubgraph:
    """Parse the colored-subgraph format.

    Without ``host`` the host is taken to be the listed edges themselves.
    """
    lines = [ln.split() for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty colored subgraph file")
    n, m, palette = (int(x) for x in lines[0][:3])
    body = [(int(a), int(b), int(c)) for a, b, c, *_ in lines[1:]]
    if len(body) != m:
        raise ValueError(f"header declares {m} edges, found {len(body)}")
    if host is None:
        host = Graph(n, ((a, b) for a, b, _ in body))
    elif host.n != n:
        raise ValueError(f"file has n={n}, host has n={host.n}")
    colors = {host.edge_index(a, b): c for a, b, c in body}
    cg = ColoredSubgraph(host, dict(sorted(colors.items())), palette, "file")
    cg.validate()
    return cg


def colored_from_mapping(host: Graph, colors: Mapping[int, int], palette_size: int) -> ColoredSubgraph:
    return ColoredSubgraph(host, dict(sorted(colors.items())), palette_size, "given")
