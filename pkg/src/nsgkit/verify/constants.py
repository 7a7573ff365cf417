"""Measured absolute constants for the concentration bounds.

For each (n, d, delta) cell the constant that makes a bound hold on a path
is a per-path ratio r; the cell estimate is the (1 - delta) quantile of r,
so the bound with c = c_hat fails on at most a delta fraction of the
generating paths.  FiniteSupport bases are enumerated exactly; everything
else is simulated in seeded batches.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..bounds import build_doubling_grid, log_factor
from ..dilation import mgf_constant
from ..distributions import DistributionSpec, Family, SeedStream
from ..errors import UnstableQuantileWarning, UsageError, ValidationError
from ..martingale import AdaptiveRule, enumerate_paths, simulate_statistics
from .binomial import (TailEstimate, TrialConfig, collect_statistics, empirical_quantile,
                       weighted_quantile)
from .estimators import norm_sample, tail_sigma

logger = logging.getLogger(__name__)

MIN_TAIL_SAMPLES = 100
DEFAULT_MGF_THETAS = (-1.0, -0.5, -0.25, 0.25, 0.5, 1.0)


class Target(str, Enum):
    MAIN_LEMMA = "MainLemma"
    HOEFFDING = "Hoeffding"
    ADAPTIVE = "Adaptive"
    MGF_LEMMA = "MgfLemma"
    ISOTROPIC_EXAMPLE = "IsotropicExample"


class Method(str, Enum):
    EXACT = "ExactEnumeration"
    MONTE_CARLO = "MonteCarloQuantile"


@dataclass(frozen=True)
class ConstantScenario:
    """Martingale setup plus the (n, d, delta) grid to estimate over.

    ``d_values`` re-dimensions a continuous base family; FiniteSupport bases
    keep their own dimension.  ``theta`` fixes the main-lemma theta (default:
    the per-path Hoeffding choice).  ``b``/``B`` configure the adaptive grid.
    """

    base: DistributionSpec
    rule: AdaptiveRule = field(default_factory=lambda: AdaptiveRule.constant(1.0))
    n_values: Tuple[int, ...] = (1,)
    d_values: Tuple[int, ...] = ()
    deltas: Tuple[float, ...] = (0.01,)
    theta: Optional[float] = None
    b: float = 1.0
    B: float = 1024.0
    theta_grid: Tuple[float, ...] = DEFAULT_MGF_THETAS

    def __post_init__(self) -> None:
        if not self.n_values or any(n < 0 for n in self.n_values):
            raise ValidationError("n_values must be non-empty and nonnegative")
        if not self.deltas or any(not (0 < dl < 1) for dl in self.deltas):
            raise ValidationError("every delta must lie in (0, 1)")
        if self.base.family is Family.FINITE_SUPPORT and any(d != self.base.d for d in self.d_values):
            raise ValidationError("FiniteSupport bases cannot be re-dimensioned")

    def dimensions(self) -> Tuple[int, ...]:
        return tuple(self.d_values) or (self.base.d,)

    def base_at(self, d: int) -> DistributionSpec:
        return self.base if d == self.base.d else self.base.with_dimension(d)


@dataclass(frozen=True)
class CellEstimate:
    n: int
    d: int
    delta: float
    c_hat: float
    violations: float
    trials: int
    method: Method
    theta: Optional[float] = None
    unstable: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "d": self.d,
            "delta": self.delta,
            "theta": self.theta,
            "c_hat": self.c_hat,
            "violations": self.violations,
            "trials": self.trials,
            "method": self.method.value,
            "unstable": self.unstable,
        }


@dataclass
class ConstantEstimate:
    target: Target
    cells: List[CellEstimate]
    seed: int
    trials: int
    alpha: float

    @property
    def c_hat(self) -> float:
        return max((c.c_hat for c in self.cells), default=0.0)

    @property
    def method(self) -> Method:
        methods = {c.method for c in self.cells}
        return Method.EXACT if methods == {Method.EXACT} else Method.MONTE_CARLO

    @property
    def unstable(self) -> bool:
        return any(c.unstable for c in self.cells)

    def dimension_ratios(self) -> Dict[str, float]:
        """c_hat(max d) / c_hat(min d) for every (n, delta) with two or more d."""
        groups: Dict[Tuple[int, float], Dict[int, float]] = {}
        for c in self.cells:
            groups.setdefault((c.n, c.delta), {})[c.d] = c.c_hat
        out = {}
        for (n, delta), by_d in sorted(groups.items()):
            if len(by_d) < 2:
                continue
            lo, hi = min(by_d), max(by_d)
            if by_d[lo] > 0:
                out[f"n={n},delta={delta:g}"] = by_d[hi] / by_d[lo]
        return out

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([c.to_dict() for c in self.cells])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target": self.target.value,
            "c_hat": self.c_hat,
            "method": self.method.value,
            "seed": self.seed,
            "trials": self.trials,
            "alpha": self.alpha,
            "unstable": self.unstable,
            "dimension_ratios": self.dimension_ratios(),
            "cells": [c.to_dict() for c in self.cells],
        }


# ---------------------------------------------------------------------------
# Per-path ratios
# ---------------------------------------------------------------------------

def path_ratios(
    target: Target,
    sig_sq: np.ndarray,
    norms: np.ndarray,
    d: int,
    delta: float,
    scenario: ConstantScenario,
) -> np.ndarray:
    """Smallest c for which each path satisfies the target bound.

    Paths on which any c works (zero variance, or the adaptive budget
    exceeded) get -inf.
    """
    lf = log_factor(d, delta)
    sig_sq = np.asarray(sig_sq, dtype=float)
    norms = np.asarray(norms, dtype=float)
    out = np.full(sig_sq.shape, -np.inf)
    live = sig_sq > 0
    if target is Target.HOEFFDING:
        out[live] = norms[live] / np.sqrt(sig_sq[live] * lf)
    elif target is Target.MAIN_LEMMA:
        theta = (np.full(sig_sq.shape, scenario.theta) if scenario.theta is not None
                 else np.sqrt(lf / np.where(live, sig_sq, 1.0)))
        out[live] = (norms[live] - lf / theta[live]) / (theta[live] * sig_sq[live])
    elif target is Target.ADAPTIVE:
        grid = build_doubling_grid(scenario.b, scenario.B, d, delta)
        inside = sig_sq < grid.B
        scale = np.sqrt(np.maximum(sig_sq, grid.b) * grid.iota)
        out[inside] = (norms[inside] / scale[inside] - 1.0) / 2.0
    else:
        raise UsageError(f"{target.value} has no per-path ratio")
    return out


def _clamp(value: float) -> float:
    return max(0.0, value) if math.isfinite(value) else 0.0


def _unstable(delta: float, trials: int) -> bool:
    if delta * trials >= MIN_TAIL_SAMPLES:
        return False
    msg = (f"delta * trials = {delta * trials:g} < {MIN_TAIL_SAMPLES}: "
           "the (1 - delta) quantile is unstable")
    logger.warning(msg)
    warnings.warn(msg, UnstableQuantileWarning, stacklevel=3)
    return True


def _martingale_cell(
    target: Target, scenario: ConstantScenario, n: int, d: int, delta: float,
    config: TrialConfig, stream_index: int,
) -> CellEstimate:
    base = scenario.base_at(d)
    theta = scenario.theta if target is Target.MAIN_LEMMA else None
    if base.family is Family.FINITE_SUPPORT:
        sig_sq, norms, probs = enumerate_paths(scenario.rule, base, n).statistics()
        r = path_ratios(target, sig_sq, norms, d, delta, scenario)
        q = weighted_quantile(r, probs, 1.0 - delta)
        violations = float(np.sum(probs[r > q]))
        return CellEstimate(n, d, delta, _clamp(q), violations, len(probs), Method.EXACT, theta)

    unstable = _unstable(delta, config.trials)

    def sampler(rng: np.random.Generator, count: int) -> np.ndarray:
        sig_sq, norms = simulate_statistics(scenario.rule, base, n, SeedStream(config.seed), count, rng=rng)
        return path_ratios(target, sig_sq, norms, d, delta, scenario)

    r = collect_statistics(sampler, config, stream_index)
    q = empirical_quantile(r, 1.0 - delta)
    violations = float(np.count_nonzero(r > q)) / r.size
    return CellEstimate(n, d, delta, _clamp(q), violations, r.size, Method.MONTE_CARLO, theta, unstable)


def _mgf_cell(scenario: ConstantScenario, d: int, config: TrialConfig, stream_index: int) -> CellEstimate:
    base = scenario.base_at(d)
    if base.family is Family.FINITE_SUPPORT:
        c = mgf_constant(base, scenario.theta_grid)
        return CellEstimate(0, d, 0.0, c, 0.0, len(base.support or ()), Method.EXACT)
    c = mgf_constant(base, scenario.theta_grid, stream=SeedStream(config.seed, stream_index),
                     count=config.trials)
    return CellEstimate(0, d, 0.0, c, 0.0, config.trials, Method.MONTE_CARLO)


def _isotropic_cell(scenario: ConstantScenario, d: int, config: TrialConfig, stream_index: int) -> CellEstimate:
    base = scenario.base_at(d)
    norms, probs = norm_sample(base, config, stream_index)
    grid = [float(t) for t in np.linspace(0.25, 4.0, 20) * base.sigma]
    sigma = tail_sigma(norms, grid, config.alpha, probs)
    method = Method.EXACT if probs is not None else Method.MONTE_CARLO
    return CellEstimate(0, d, 0.0, sigma / base.sigma, 0.0, len(norms), method)


def estimate_constant(target: Target, scenario: ConstantScenario, config: TrialConfig) -> ConstantEstimate:
    """Estimate c_hat on every cell of the scenario grid; the result's c_hat is the max."""
    target = Target(target)
    cells: List[CellEstimate] = []
    index = 0
    for d in scenario.dimensions():
        if target is Target.MGF_LEMMA:
            cells.append(_mgf_cell(scenario, d, config, index))
            index += 1
            continue
        if target is Target.ISOTROPIC_EXAMPLE:
            if scenario.base_at(d).family is not Family.ISOTROPIC_GAUSSIAN:
                raise ValidationError("IsotropicExample needs an IsotropicGaussian base")
            cells.append(_isotropic_cell(scenario, d, config, index))
            index += 1
            continue
        for n in scenario.n_values:
            for delta in scenario.deltas:
                cell = _martingale_cell(target, scenario, n, d, delta, config, index)
                logger.debug("%s cell n=%d d=%d delta=%g: c_hat=%.6f (%s)",
                             target.value, n, d, delta, cell.c_hat, cell.method.value)
                cells.append(cell)
                index += 1
    est = ConstantEstimate(target, cells, config.seed, config.trials, config.alpha)
    logger.info("%s: c_hat=%.6f over %d cell(s)", target.value, est.c_hat, len(cells))
    return est


def violation_rate(
    target: Target,
    scenario: ConstantScenario,
    n: int,
    d: int,
    delta: float,
    c: float,
    config: TrialConfig,
    stream_index: int = 0,
) -> TailEstimate:
    """Frequency of paths on which the target bound with constant ``c`` fails.

    For the adaptive target a failure also requires sum sigma_i^2 < B.
    """
    target = Target(target)
    base = scenario.base_at(d)
    if base.family is Family.FINITE_SUPPORT:
        sig_sq, norms, probs = enumerate_paths(scenario.rule, base, n).statistics()
        r = path_ratios(target, sig_sq, norms, d, delta, scenario)
        return TailEstimate.exact(c, float(np.sum(probs[r > c])))

    def sampler(rng: np.random.Generator, count: int) -> np.ndarray:
        sig_sq, norms = simulate_statistics(scenario.rule, base, n, SeedStream(config.seed), count, rng=rng)
        return path_ratios(target, sig_sq, norms, d, delta, scenario)

    r = collect_statistics(sampler, config, stream_index)
    return TailEstimate.from_counts(c, int(np.count_nonzero(r > c)), r.size, config.alpha)
