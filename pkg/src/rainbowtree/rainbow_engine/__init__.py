"""Rainbow forests, exchange search, the connecting driver and exact oracles."""

from .driver import (
    STUCK_COLORS,
    STUCK_LAYERS,
    STUCK_NO_EDGE,
    DriverResult,
    TraceStep,
    connect_forest_components,
)
from .exchange import ExchangeState, ReplacementSearchResult, check_witness, replacement_color_set
from .forest import (
    ForestError,
    RainbowForest,
    build_initial_forest,
    greedy_augment,
    is_replaceable,
)
from .oracles import (
    GuardExceeded,
    augment_once,
    has_rainbow_spanning_tree,
    max_rainbow_forest_exact,
    schrijver_suzuki_decide,
)

__all__ = [
    "STUCK_COLORS",
    "STUCK_LAYERS",
    "STUCK_NO_EDGE",
    "DriverResult",
    "ExchangeState",
    "ForestError",
    "GuardExceeded",
    "RainbowForest",
    "ReplacementSearchResult",
    "TraceStep",
    "augment_once",
    "build_initial_forest",
    "check_witness",
    "connect_forest_components",
    "greedy_augment",
    "has_rainbow_spanning_tree",
    "is_replaceable",
    "max_rainbow_forest_exact",
    "replacement_color_set",
    "schrijver_suzuki_decide",
]
