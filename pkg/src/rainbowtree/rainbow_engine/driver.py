"""Grow a rainbow forest on the dense layer into a spanning tree of G'."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..random_model import ExposureStack, flatten, fresh_layer_view
from .exchange import replacement_color_set
from .forest import RainbowForest, build_initial_forest, greedy_augment
from .oracles import augment_once

STUCK_LAYERS = "layer range exhausted"
STUCK_NO_EDGE = "no crossing edge in layer"
STUCK_COLORS = "colors exhausted"


@dataclass
class TraceStep:
    t: int
    action: str  # greedy | exchange | exchange+layer
    sigma: int | None = None
    J_size: int | None = None
    chosen_j: int | None = None

    def line(self) -> str:
        def fmt(x):
            return "-" if x is None else str(x)

        return f"{self.t}, {self.action}, {fmt(self.sigma)}, {fmt(self.J_size)}, {fmt(self.chosen_j)}"


@dataclass
class DriverResult:
    status: str  # "tree" or "stuck"
    forest: RainbowForest
    initial_forest_size: int
    missing_colors_after_initial: int
    trace: list[TraceStep] = field(default_factory=list)
    reason: str | None = None
    stuck_t: int | None = None
    stuck_J_size: int | None = None
    colors_missing: list[int] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.status == "tree"

    @property
    def iterations(self) -> int:
        return len(self.trace)

    @property
    def max_J(self) -> int:
        sizes = [s.J_size for s in self.trace if s.J_size is not None]
        if self.stuck_J_size is not None:
            sizes.append(self.stuck_J_size)
        return max(sizes, default=0)


def connect_forest_components(stack: ExposureStack, check_every: int = 0) -> DriverResult:
    """Run the component-connecting loop on a built exposure stack.

    Each iteration, with ``t`` components, first extends the forest inside
    the carried pool (dense layer plus every edge any forest has held): a
    greedy pass, then a single exchange augmentation. Failing that it picks
    the smallest missing color ``sigma``, computes the replacement color set
    ``J`` and scans the fresh part of layer ``s_t`` for an edge of a color
    in ``J`` joining two components.
    """
    g_prime = flatten(stack)
    phi = g_prime.colors
    dense = stack.layers[0]
    pool = {e: phi[e] for e in dense.colors}
    palette = stack.palette_size

    forest = build_initial_forest(dense)
    initial_size = len(forest)
    result = DriverResult(
        "stuck", forest, initial_size, palette - len(forest.color_edge)
    )

    def finish(status: str, reason: str | None = None, t: int | None = None) -> DriverResult:
        result.status = status
        result.forest = forest
        result.reason = reason
        result.stuck_t = t
        result.colors_missing = [c for c in range(1, palette + 1) if c not in forest.color_edge]
        return result

    while forest.n_components > 1:
        t = forest.n_components
        grown = greedy_augment(forest, pool)
        if len(grown) > len(forest):
            forest = grown
            result.trace.append(TraceStep(t, "greedy"))
            continue
        grown = augment_once(forest, pool)
        if grown is not None:
            forest = grown
            pool.update(forest.colors)
            result.trace.append(TraceStep(t, "exchange"))
            continue

        missing = [c for c in range(1, palette + 1) if c not in forest.color_edge]
        if not missing:
            return finish("stuck", STUCK_COLORS, t)
        sigma = missing[0]
        search = replacement_color_set(forest, sigma, pool, verify_every=check_every)
        if search.outcome == "augmented":
            # unreachable when augment_once reported a maximum; kept as a guard
            forest = search.augmented
            pool.update(forest.colors)
            result.trace.append(TraceStep(t, "exchange", sigma))
            continue
        J = search.J
        result.stuck_J_size = len(J)
        if not stack.sparse_index or t > stack.t_max:
            return finish("stuck", STUCK_LAYERS, t)

        chosen = None
        for e, c in fresh_layer_view(stack, t):
            if c in J and forest.joins_components(e):
                chosen = (e, c)
                break
        if chosen is None:
            return finish("stuck", STUCK_NO_EDGE, t)
        e, j = chosen
        witness = search.witness(j)
        witness.add(e, j)
        before = forest.n_components
        forest = witness
        assert forest.n_components == before - 1
        pool.update(forest.colors)
        result.stuck_J_size = None
        result.trace.append(TraceStep(t, "exchange+layer", sigma, len(J), j))

    return finish("tree")
