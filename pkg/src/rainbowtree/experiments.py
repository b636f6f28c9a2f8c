"""Monte Carlo harness: threshold sweeps, pipeline statistics, lemma checks.

Every trial draws from streams derived from ``(master_seed, trial_index,
layer_index)``, results are merged by trial index, and rows are sorted, so
the CSV bytes do not depend on the worker count.
"""

from __future__ import annotations

import io
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from functools import lru_cache
from typing import Callable, Iterable, Sequence, TextIO

from .graph_model import Graph, HostSpec, build_host, edge_connectivity
from .lemma_checks import CheckReport, check_color_hit, check_cut_sparsity, check_straddle
from .rainbow_engine import build_initial_forest, connect_forest_components, has_rainbow_spanning_tree
from .random_model import (
    LOG_CONVENTION,
    ModelParams,
    RandomStream,
    build_exposure_stack,
    derive_stream,
    derive_stream_id,
    flatten,
    sample_colored,
)

log = logging.getLogger(__name__)

MODES = ("exact_threshold", "pipeline", "lemma")
THRESHOLD_HEADER = "n,d,lambda,c,trials,success_frac,missing_color_frac,isolated_frac"
PIPELINE_HEADER = (
    "n,d,lambda,epsilon,seed,exact_rst,pipeline_rst,initial_forest_size,"
    "driver_iterations,max_J,stuck_reason"
)
LEMMA_HEADER = "lemma,instances,violations,worst_margin"

# trial index reserved for host construction streams
HOST_TRIAL = (1 << 32) - 1


def derive_trial_stream(master_seed: int, trial_index: int, layer_index: int) -> RandomStream:
    """Stream for one (trial, layer) pair.

    The id is ``mix64(trial << 32 | layer)`` with the splitmix64 finalizer
    (increment 0x9E3779B97F4A7C15, multipliers 0xBF58476D1CE4E5B9 and
    0x94D049BB133111EB, shifts 30/27/31), a bijection on 64 bits.
    """
    return derive_stream(master_seed, trial_index, layer_index)


def trial_seed(master_seed: int, trial_index: int) -> int:
    """Seed that by itself reproduces one trial (see ``pipeline --seed``)."""
    return derive_trial_stream(master_seed, trial_index, 0).stream_id


@dataclass
class ExperimentConfig:
    mode: str = "exact_threshold"
    host_family: str = "complete"
    degree_ratio: float = 1.0
    degree: int | None = None
    n_list: list[int] = field(default_factory=lambda: [64])
    coeff_list: list[float] = field(default_factory=lambda: [2.5])
    palette: str = "n_minus_1"
    trials: int = 10
    master_seed: int = 1
    output_path: str | None = None
    threads: int = 1
    lemma: str = "all"
    cut_samples: int = 64
    hit_sizes: list[int] = field(default_factory=lambda: [1, 4, 15])
    omega: float = 3.0

    _LISTS = {"n_list": ("n", int), "coeff_list": ("coeff", float), "hit_sizes": ("hit_size", int)}

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.mode == "exact_threshold":
            bad = [c for c in self.coeff_list if c < 0]
        else:
            bad = [c for c in self.coeff_list if c <= 0]
        if bad:
            raise ValueError(f"coefficients must be positive, got {bad}")
        if self.palette != "n_minus_1" and int(self.palette) < 1:
            raise ValueError("palette must be n_minus_1 or a positive integer")

    def palette_size(self, n: int) -> int:
        return n - 1 if self.palette == "n_minus_1" else int(self.palette)

    def host_spec(self, n: int) -> HostSpec:
        if self.host_family == "complete":
            return HostSpec("complete", n)
        d = self.degree if self.degree is not None else 2 * round(self.degree_ratio * n / 2)
        d = min(d, n - 1)
        if self.host_family == "circulant":
            return HostSpec.circulant_with_degree(n, d)
        if (n * d) % 2:
            d -= 1
        return HostSpec("random-regular", n, d)

    def to_text(self) -> str:
        lines = [f"# log convention: {LOG_CONVENTION}"]
        for f in fields(self):
            if f.name.startswith("_"):
                continue
            value = getattr(self, f.name)
            if f.name in self._LISTS:
                key = self._LISTS[f.name][0]
                lines.extend(f"{key}={v!r}" for v in value)
            elif value is not None:
                lines.append(f"{f.name}={value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        cfg = cls()
        by_key = {key: (name, conv) for name, (key, conv) in cls._LISTS.items()}
        lists: dict[str, list] = {}
        scalar = {f.name: f for f in fields(cls) if not f.name.startswith("_")}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key in by_key:
                name, conv = by_key[key]
                lists.setdefault(name, []).append(conv(value))
            elif key in scalar:
                setattr(cfg, key, _convert(key, value))
            else:
                raise ValueError(f"unknown config key {key!r}")
        for name, values in lists.items():
            setattr(cfg, name, values)
        cfg.validate()
        return cfg


_INT_KEYS = {"trials", "master_seed", "threads", "cut_samples", "degree"}
_FLOAT_KEYS = {"degree_ratio", "omega"}


def _convert(key: str, value: str):
    if key in _INT_KEYS:
        return int(value, 0)
    if key in _FLOAT_KEYS:
        return float(value)
    return value


@dataclass
class TrialRecord:
    n: int
    d: int
    lam: int
    c_or_epsilon: float
    seed: int
    mode: str
    exact_rst: bool = False
    pipeline_rst: bool = False
    initial_forest_size: int = 0
    missing_colors_after_initial: int = 0
    driver_iterations: int = 0
    max_J_seen: int = 0
    stuck_reason: str | None = None
    layer_only: bool = False
    wall_time: float = 0.0

    def csv_row(self) -> str:
        return ",".join([
            str(self.n), str(self.d), str(self.lam), _fmt(self.c_or_epsilon), str(self.seed),
            str(int(self.exact_rst)), str(int(self.pipeline_rst)), str(self.initial_forest_size),
            str(self.driver_iterations), str(self.max_J_seen), self.stuck_reason or "",
        ])


def _fmt(x: float) -> str:
    return repr(float(x))


@lru_cache(maxsize=16)
def _host(spec: HostSpec, master_seed: int) -> tuple[Graph, int]:
    rng = derive_trial_stream(master_seed, HOST_TRIAL, spec.n) if spec.family == "random-regular" else None
    g = build_host(spec, rng)
    return g, edge_connectivity(g)


def _map(fn: Callable, jobs: Sequence, threads: int) -> list:
    if threads <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * threads))))


# ---------------------------------------------------------------- threshold

def _threshold_trial(job) -> tuple[int, bool, bool, bool]:
    index, spec, master_seed, q, palette, seed = job
    g, _ = _host(spec, master_seed)
    rng = derive_trial_stream(seed, 0, 0)
    cg = sample_colored(g, q, palette, rng)
    missing = bool(cg.missing_colors())
    isolated = bool(cg.isolated_vertices())
    return index, has_rainbow_spanning_tree(cg), missing, isolated


def run_threshold_experiment(cfg: ExperimentConfig) -> tuple[list[str], list[str]]:
    """Exact-oracle success fractions per ``(n, c)`` cell.

    Returns ``(csv_lines, flags)``; flags name adjacent-cell inversions in
    success fraction exceeding three standard errors.
    """
    cfg.validate()
    rows = [THRESHOLD_HEADER]
    flags = []
    cell = 0
    for n in sorted(cfg.n_list):
        spec = cfg.host_spec(n)
        g, lam = _host(spec, cfg.master_seed)
        d = spec.degree
        palette = cfg.palette_size(n)
        fractions = []
        for c in sorted(cfg.coeff_list):
            q = c * math.log(n) / d
            if q >= 1.0:
                log.warning("skipping cell n=%d c=%s: p=%.4f >= 1", n, c, q)
                rows.append(f"{n},{d},{lam},{_fmt(c)},0,NA,NA,NA")
                cell += 1
                continue
            jobs = [
                (i, spec, cfg.master_seed, q, palette, trial_seed(cfg.master_seed, cell * cfg.trials + i))
                for i in range(cfg.trials)
            ]
            results = sorted(_map(_threshold_trial, jobs, cfg.threads))
            T = cfg.trials
            succ = sum(r[1] for r in results) / T
            miss = sum(r[2] for r in results) / T
            iso = sum(r[3] for r in results) / T
            rows.append(f"{n},{d},{lam},{_fmt(c)},{T},{succ:.6f},{miss:.6f},{iso:.6f}")
            fractions.append((c, succ))
            cell += 1
        for (c1, s1), (c2, s2) in zip(fractions, fractions[1:]):
            se = math.sqrt((s1 * (1 - s1) + s2 * (1 - s2)) / cfg.trials)
            if s1 - s2 > 3 * se and s1 - s2 > 0:
                flags.append(f"n={n}: success drops from {s1:.3f} at c={c1} to {s2:.3f} at c={c2}")
    return rows, flags


# ----------------------------------------------------------------- pipeline

def run_pipeline_trial(g: Graph, lam: int, epsilon: float, seed: int, palette: int | None = None) -> TrialRecord:
    """Build one exposure stack from ``seed`` and run driver plus exact oracle."""
    start = time.perf_counter()
    d = g.degree(0)
    params = ModelParams(n=g.n, d=d, epsilon=epsilon, palette_size=palette)
    stack = build_exposure_stack(g, params, seed)
    result = connect_forest_components(stack)
    exact = has_rainbow_spanning_tree(flatten(stack))
    if result.success and not exact:
        raise AssertionError(f"pipeline found a tree the exact oracle rejects (seed={seed})")
    return TrialRecord(
        n=g.n, d=d, lam=lam, c_or_epsilon=epsilon, seed=seed, mode="pipeline",
        exact_rst=exact, pipeline_rst=result.success,
        initial_forest_size=result.initial_forest_size,
        missing_colors_after_initial=result.missing_colors_after_initial,
        driver_iterations=result.iterations, max_J_seen=result.max_J,
        stuck_reason=result.reason, layer_only=not stack.sparse_index,
        wall_time=time.perf_counter() - start,
    )


def _pipeline_job(job) -> tuple[tuple, TrialRecord]:
    key, spec, master_seed, eps, seed, palette = job
    g, lam = _host(spec, master_seed)
    return key, run_pipeline_trial(g, lam, eps, seed, palette)


def run_pipeline_experiment(cfg: ExperimentConfig) -> tuple[list[str], list[TrialRecord]]:
    cfg.validate()
    jobs = []
    cell = 0
    for n in sorted(cfg.n_list):
        spec = cfg.host_spec(n)
        _host(spec, cfg.master_seed)
        palette = None if cfg.palette == "n_minus_1" else int(cfg.palette)
        for eps in sorted(cfg.coeff_list):
            for i in range(cfg.trials):
                seed = trial_seed(cfg.master_seed, cell * cfg.trials + i)
                jobs.append(((n, eps, i), spec, cfg.master_seed, eps, seed, palette))
            cell += 1
    results = sorted(_map(_pipeline_job, jobs, cfg.threads), key=lambda kv: kv[0])
    records = [rec for _, rec in results]
    for rec in records:
        if rec.layer_only:
            log.info("n=%d has no sparse layers; pipeline ran on the dense layer only", rec.n)
    return [PIPELINE_HEADER] + [r.csv_row() for r in records], records


# -------------------------------------------------------------------- lemmas

def _lemma_job(job) -> dict[str, CheckReport]:
    index, spec, master_seed, eps, seed, lemmas, cut_samples, hit_sizes, omega = job
    g, lam = _host(spec, master_seed)
    params = ModelParams(n=g.n, d=g.degree(0), epsilon=eps)
    stack = build_exposure_stack(g, params, seed)
    out: dict[str, CheckReport] = {}
    if "cuts" in lemmas:
        g_prime = flatten(stack)
        r = check_cut_sparsity(
            g, list(g_prime.colors), "sampled", cut_samples,
            derive_trial_stream(seed, 1, 0), include_singletons=True,
            p=params.p,
        )
        rep = CheckReport("cuts", hypothesis_held=r.hypothesis_held)
        rep.record(r.worst_margin, r.violations > 0)
        out["cuts"] = rep
    if "straddle" in lemmas:
        forest = build_initial_forest(stack.layers[0])
        rep = CheckReport("straddle")
        if forest.n_components >= 2:
            g_prime = flatten(stack)
            rep = check_straddle(g, list(g_prime.colors), forest.component_labels(), lam)
        out["straddle"] = rep
    if "colorhit" in lemmas:
        rng = derive_trial_stream(seed, 2, 0).generator
        rep = CheckReport("colorhit")
        palette = params.palette
        for size in _admissible_hit_sizes(g.n, hit_sizes, omega):
            K = (rng.choice(palette, size=size, replace=False) + 1).tolist()
            rep = rep.merge(check_color_hit(stack.layers[0], K, omega))
        out["colorhit"] = rep
    return out


def _admissible_hit_sizes(n: int, hit_sizes: Sequence[int], omega: float) -> list[int]:
    limit = n / (omega * math.log(n))
    return [k for k in hit_sizes if k <= limit]


def run_lemma_experiment(cfg: ExperimentConfig, lemma: str | None = None) -> tuple[list[str], dict]:
    """Violation frequencies of the lemma checkers at the layered-model densities.

    For ``cuts`` and ``straddle`` one trial is one instance (a trial with
    any violated cut counts once); ``colorhit`` checks one color set per
    size in ``hit_sizes`` per trial.
    """
    cfg.validate()
    which = lemma or cfg.lemma
    lemmas = ("cuts", "straddle", "colorhit") if which == "all" else (which,)
    rows = [LEMMA_HEADER]
    summary: dict[tuple[int, float], dict[str, CheckReport]] = {}
    cell = 0
    for n in sorted(cfg.n_list):
        spec = cfg.host_spec(n)
        _host(spec, cfg.master_seed)
        if "colorhit" in lemmas:
            dropped = sorted(set(cfg.hit_sizes) - set(_admissible_hit_sizes(n, cfg.hit_sizes, cfg.omega)))
            if dropped:
                log.warning("n=%d: skipping color-set sizes %s above n/(omega ln n)", n, dropped)
        for eps in sorted(cfg.coeff_list):
            jobs = [
                (i, spec, cfg.master_seed, eps, trial_seed(cfg.master_seed, cell * cfg.trials + i),
                 lemmas, cfg.cut_samples, tuple(cfg.hit_sizes), cfg.omega)
                for i in range(cfg.trials)
            ]
            merged = {name: CheckReport(name) for name in lemmas}
            for part in _map(_lemma_job, jobs, cfg.threads):
                for name, rep in part.items():
                    merged[name] = merged[name].merge(rep)
            summary[(n, eps)] = merged
            rows.extend(merged[name].csv_row() for name in lemmas)
            cell += 1
    return rows, summary


def run_experiment(cfg: ExperimentConfig) -> list[str]:
    if cfg.mode == "exact_threshold":
        rows, flags = run_threshold_experiment(cfg)
        for f in flags:
            log.warning("monotone trend check: %s", f)
        return rows
    if cfg.mode == "pipeline":
        return run_pipeline_experiment(cfg)[0]
    return run_lemma_experiment(cfg)[0]


def write_rows(rows: Iterable[str], fh: TextIO) -> None:
    for r in rows:
        fh.write(r + "\n")


def rows_to_text(rows: Iterable[str]) -> str:
    buf = io.StringIO()
    write_rows(rows, buf)
    return buf.getvalue()


__all__ = [
    "ExperimentConfig",
    "TrialRecord",
    "derive_stream_id",
    "derive_trial_stream",
    "run_experiment",
    "run_lemma_experiment",
    "run_pipeline_experiment",
    "run_pipeline_trial",
    "run_threshold_experiment",
    "trial_seed",
]
