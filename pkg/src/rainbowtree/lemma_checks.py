"""Checkers for the supporting lemmas on realized instances.

Probabilistic claims are reported as violation counts over many instances,
never asserted per instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Collection, Iterable, Sequence

import numpy as np

from .graph_model import Graph, edge_connectivity
from .random_model import ColoredSubgraph, RandomStream

MAX_EXHAUSTIVE_N = 20


@dataclass
class CheckReport:
    lemma_id: str
    instances_checked: int = 0
    violations: int = 0
    worst_margin: float = math.inf
    hypothesis_held: bool | None = None

    def record(self, margin: float, violated: bool) -> None:
        self.instances_checked += 1
        self.violations += int(violated)
        self.worst_margin = min(self.worst_margin, margin)

    def merge(self, other: "CheckReport") -> "CheckReport":
        held = None
        if self.hypothesis_held is not None or other.hypothesis_held is not None:
            held = bool(self.hypothesis_held in (None, True) and other.hypothesis_held in (None, True))
        return CheckReport(
            self.lemma_id,
            self.instances_checked + other.instances_checked,
            self.violations + other.violations,
            min(self.worst_margin, other.worst_margin),
            held,
        )

    @property
    def violation_rate(self) -> float:
        return self.violations / self.instances_checked if self.instances_checked else 0.0

    def csv_row(self) -> str:
        return f"{self.lemma_id},{self.instances_checked},{self.violations},{self.worst_margin:.6g}"


def _side_matrix_exhaustive(n: int) -> np.ndarray:
    """All ``2**(n-1) - 1`` nontrivial bipartitions, vertex ``n-1`` fixed on side 0."""
    masks = np.arange(1, 1 << (n - 1), dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n - 1)) & 1
    return np.concatenate([bits.astype(bool), np.zeros((len(masks), 1), dtype=bool)], axis=1)


def _side_matrix_sampled(n: int, k: int, rng: RandomStream) -> np.ndarray:
    gen = rng.generator
    rows = []
    while len(rows) < k:
        side = gen.random((k, n)) < 0.5
        nontrivial = side.any(axis=1) & ~side.all(axis=1)
        rows.extend(side[nontrivial])
    return np.array(rows[:k])


def check_cut_sparsity(
    g: Graph,
    kept: Collection[int],
    policy: str = "exhaustive",
    samples: int = 1000,
    rng: RandomStream | None = None,
    include_singletons: bool = False,
    p: float | None = None,
) -> CheckReport:
    """Each cut must keep at most half its edges.

    ``policy`` is ``"exhaustive"`` (every bipartition, ``n <= 20``) or
    ``"sampled"`` (``samples`` uniform bipartitions, plus the ``n`` vertex
    stars when ``include_singletons``). One instance per cut; the margin is
    ``|S|/2 - |kept in S|``. When ``p`` is given the report records whether
    the density hypothesis ``p < ln^2 n / n`` held.
    """
    n = g.n
    if policy == "exhaustive":
        if n > MAX_EXHAUSTIVE_N:
            raise ValueError(f"exhaustive cut enumeration limited to n <= {MAX_EXHAUSTIVE_N}")
        sides = _side_matrix_exhaustive(n)
    elif policy == "sampled":
        if rng is None:
            raise ValueError("sampled policy needs a random stream")
        sides = _side_matrix_sampled(n, samples, rng)
        if include_singletons:
            sides = np.concatenate([np.eye(n, dtype=bool), sides])
    else:
        raise ValueError(f"unknown cut policy {policy!r}")

    # |delta(S)| = sum of degrees in S minus twice the edges inside S
    u, v = g.endpoints
    adj = np.zeros((n, n), dtype=np.float32)
    adj[u, v] = adj[v, u] = 1.0
    hit_adj = np.zeros((n, n), dtype=np.float32)
    if kept:
        idx = np.fromiter(kept, dtype=np.int64, count=len(kept))
        hit_adj[u[idx], v[idx]] = hit_adj[v[idx], u[idx]] = 1.0
    deg, hit_deg = adj.sum(axis=1), hit_adj.sum(axis=1)
    report = CheckReport("cuts")
    if p is not None:
        report.hypothesis_held = p < math.log(n) ** 2 / n
    chunk = max(1, 4_000_000 // max(n * n, 1))
    for start in range(0, len(sides), chunk):
        x = sides[start:start + chunk].astype(np.float32)
        size = np.rint(x @ deg - ((x @ adj) * x).sum(axis=1))
        hit = np.rint(x @ hit_deg - ((x @ hit_adj) * x).sum(axis=1))
        margin = size / 2.0 - hit
        report.instances_checked += len(x)
        report.violations += int(np.count_nonzero(hit > size / 2.0))
        if len(margin):
            report.worst_margin = min(report.worst_margin, float(margin.min()))
    return report


def check_straddle(
    g: Graph,
    excluded: Collection[int],
    partition: Sequence[int],
    lam: int | None = None,
) -> CheckReport:
    """Edges outside ``excluded`` joining different blocks, against ``lambda*t/4``.

    ``partition`` is a block label per vertex. ``hypothesis_held`` records
    whether ``excluded`` keeps at most half of every block boundary.
    """
    labels = np.asarray(partition)
    t = len(np.unique(labels))
    if t < 2:
        raise ValueError("partition needs at least two blocks")
    if lam is None:
        lam = edge_connectivity(g)
    u, v = g.endpoints
    cross = labels[u] != labels[v]
    outside = np.ones(g.m, dtype=bool)
    if excluded:
        outside[np.fromiter(excluded, dtype=np.int64, count=len(excluded))] = False
    count = int(np.count_nonzero(cross & outside))

    # a crossing edge lies on the boundary of both its blocks
    _, dense = np.unique(labels, return_inverse=True)
    ends = np.concatenate([dense[u][cross], dense[v][cross]])
    inside = np.tile(~outside[cross], 2)
    boundary = np.bincount(ends, minlength=t)
    kept = np.bincount(ends[inside], minlength=t)
    held = bool(np.all(kept <= boundary / 2.0))

    report = CheckReport("straddle", hypothesis_held=held)
    margin = count - lam * t / 4.0
    report.record(margin, margin < 0)
    return report


def color_hit_count(gp: ColoredSubgraph, K: Iterable[int]) -> int:
    """Vertices incident to at least one kept edge colored from ``K``."""
    K = set(K)
    touched = set()
    for e, c in gp.colors.items():
        if c in K:
            touched.update(gp.host.edges[e])
    return len(touched)


def check_color_hit(gp: ColoredSubgraph, K: Collection[int], omega_value: float) -> CheckReport:
    """Count of vertices hit by ``K``-colored edges versus ``|K| ln n / omega``."""
    n = gp.n
    limit = n / (omega_value * math.log(n))
    if len(K) > limit:
        raise ValueError(f"|K|={len(K)} exceeds n/(omega ln n)={limit:.3f}")
    count = color_hit_count(gp, K)
    margin = count - len(K) * math.log(n) / omega_value
    report = CheckReport("colorhit")
    report.record(margin, margin < 0)
    return report
