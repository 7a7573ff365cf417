"""Tail-frequency estimation with exact binomial confidence bounds.

Trials run in fixed-size batches.  Batch ``b`` draws from its own generator
(seed, stream_index, b), and batch results are concatenated in batch order,
so a run is bit-reproducible whatever the thread count.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy import stats

from ..distributions import SeedStream
from ..errors import UsageError, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 1e-3
DEFAULT_BATCH = 1 << 16

# (generator, count) -> statistic values, one per trial
EventSampler = Callable[[np.random.Generator, int], np.ndarray]


@dataclass(frozen=True)
class TrialConfig:
    """Monte Carlo run parameters; ``threads=None`` uses the executor default."""

    trials: int
    seed: int = 0
    alpha: float = DEFAULT_ALPHA
    threads: Optional[int] = None
    batch_size: int = DEFAULT_BATCH

    def __post_init__(self) -> None:
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValidationError(f"trials must be a positive integer, got {self.trials!r}")
        if not (0.0 < self.alpha < 1.0):
            raise ValidationError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if self.threads is not None and self.threads < 1:
            raise ValidationError(f"threads must be positive, got {self.threads!r}")
        if self.batch_size < 1:
            raise ValidationError(f"batch_size must be positive, got {self.batch_size!r}")
        SeedStream(self.seed)

    def batch_counts(self) -> List[int]:
        full, rest = divmod(self.trials, self.batch_size)
        return [self.batch_size] * full + ([rest] if rest else [])


def clopper_pearson_upper(k: int, n: int, alpha: float) -> float:
    """One-sided exact binomial upper bound at level ``alpha``.

    Beta(1 - alpha; k + 1, n - k), which is 1 - alpha^(1/n) at k = 0 and 1 at k = n.
    """
    if n < 1:
        raise ValidationError(f"trial count must be positive, got {n!r}")
    if not (0 <= k <= n):
        raise ValidationError(f"hits must lie in [0, {n}], got {k!r}")
    if not (0.0 < alpha < 1.0):
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha!r}")
    if k == n:
        return 1.0
    if k == 0:
        return -math.expm1(math.log(alpha) / n)
    return float(stats.beta.ppf(1.0 - alpha, k + 1, n - k))


@dataclass(frozen=True)
class TailEstimate:
    threshold: float
    hits: int
    trials: int
    alpha: float
    point: float
    upper: float

    @classmethod
    def from_counts(cls, threshold: float, hits: int, trials: int, alpha: float) -> "TailEstimate":
        upper = clopper_pearson_upper(hits, trials, alpha)
        return cls(threshold, int(hits), int(trials), alpha, hits / trials, max(upper, hits / trials))

    @classmethod
    def exact(cls, threshold: float, probability: float) -> "TailEstimate":
        """An exactly known tail probability (finite-support oracle)."""
        p = min(1.0, max(0.0, probability))
        return cls(threshold, 0, 0, 0.0, p, p)

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "hits": self.hits,
            "trials": self.trials,
            "alpha": self.alpha,
            "point": self.point,
            "upper": self.upper,
        }


def collect_statistics(
    sampler: EventSampler, config: TrialConfig, stream_index: int = 0
) -> np.ndarray:
    """Run ``config.trials`` trials of ``sampler`` in parallel batches."""
    stream = SeedStream(config.seed, stream_index)
    counts = config.batch_counts()

    def run(batch: int) -> np.ndarray:
        out = np.asarray(sampler(stream.batch_generator(batch), counts[batch]), dtype=float)
        if out.shape != (counts[batch],):
            raise UsageError(f"sampler returned shape {out.shape}, expected ({counts[batch]},)")
        logger.debug("stream %d batch %d: %d trials", stream_index, batch, counts[batch])
        return out

    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        parts = list(pool.map(run, range(len(counts))))
    return np.concatenate(parts)


def tail_from_values(values: np.ndarray, t: float, alpha: float) -> TailEstimate:
    hits = int(np.count_nonzero(np.asarray(values) >= t))
    return TailEstimate.from_counts(t, hits, len(values), alpha)


def estimate_tail(sampler: EventSampler, t: float, config: TrialConfig) -> TailEstimate:
    """Frequency of {statistic >= t} over ``config.trials`` trials, with its CP bound."""
    return tail_from_values(collect_statistics(sampler, config), t, config.alpha)


def estimate_tails(
    sampler: EventSampler, t_grid: Sequence[float], config: TrialConfig, stream_index: int = 0
) -> List[TailEstimate]:
    """One batch of trials evaluated at every threshold in ``t_grid``."""
    values = collect_statistics(sampler, config, stream_index)
    return [tail_from_values(values, t, config.alpha) for t in t_grid]


def _quantile_rank(q: float, n: int) -> int:
    if not (0.0 < q < 1.0):
        raise ValidationError(f"q must lie in (0, 1), got {q!r}")
    # round() keeps e.g. 0.875 * 16 from landing a hair above 14
    return min(n, max(1, math.ceil(round(q * n, 9))))


def empirical_quantile(samples: Sequence[float], q: float) -> float:
    """Upper empirical quantile: the ceil(q N)-th smallest sample (1-based)."""
    arr = np.sort(np.asarray(samples, dtype=float))
    if arr.size == 0:
        raise UsageError("empirical_quantile needs at least one sample")
    return float(arr[_quantile_rank(q, arr.size) - 1])


def weighted_quantile(values: Sequence[float], probs: Sequence[float], q: float) -> float:
    """Smallest value v with P(V <= v) >= q for an exact discrete distribution."""
    vals = np.asarray(values, dtype=float)
    w = np.asarray(probs, dtype=float)
    if vals.size == 0:
        raise UsageError("weighted_quantile needs at least one value")
    if vals.shape != w.shape:
        raise ValidationError("values and probs must have the same length")
    if not (0.0 < q < 1.0):
        raise ValidationError(f"q must lie in (0, 1), got {q!r}")
    order = np.argsort(vals, kind="stable")
    cum = np.cumsum(w[order])
    idx = int(np.searchsorted(cum, q - 1e-12, side="left"))
    return float(vals[order][min(idx, vals.size - 1)])
