"""Estimators for the equivalent forms of the nSG parameter.

The array-level functions take norms (or projections) with optional
probability weights, so exact finite-support inputs and Monte Carlo samples
go through the same code.  The spec-level wrappers at the bottom pick one or
the other from the DistributionSpec.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize, special

from ..distributions import DistributionSpec, Family, NsgCertificate, certificate, draw
from ..errors import DomainError, UsageError, ValidationError
from .binomial import TailEstimate, TrialConfig, collect_statistics, tail_from_values

logger = logging.getLogger(__name__)

MAX_MOMENT = 20
EQUIVALENCE_WINDOW = (0.25, 4.0)
SUBEXP_ROUNDS = 50
UNIT_TOL = 1e-12


def _weights(values: np.ndarray, probs: Optional[Sequence[float]]) -> np.ndarray:
    if values.size == 0:
        raise UsageError("estimator needs at least one sample")
    if probs is None:
        return np.full(values.size, 1.0 / values.size)
    w = np.asarray(probs, dtype=float)
    if w.shape != values.shape:
        raise ValidationError("probs must match the sample array")
    return w


def _log_mean_exp(exponents: np.ndarray, w: np.ndarray) -> float:
    return float(special.logsumexp(exponents, b=w))


# ---------------------------------------------------------------------------
# Moments
# ---------------------------------------------------------------------------

def moment_profile(norms, p_max: int, probs=None) -> List[Tuple[int, float]]:
    """(p, (E||X||^p)^(1/p) / sqrt(p)) for p = 1..p_max."""
    if not (1 <= p_max <= MAX_MOMENT):
        raise ValidationError(f"p_max must lie in [1, {MAX_MOMENT}], got {p_max!r}")
    x = np.abs(np.asarray(norms, dtype=float))
    w = _weights(x, probs)
    out = []
    for p in range(1, p_max + 1):
        m = float(np.sum(w * x**p))
        out.append((p, m ** (1.0 / p) / math.sqrt(p)))
    return out


def moment_sigma(norms, p_max: int = MAX_MOMENT, probs=None) -> float:
    return max(v for _, v in moment_profile(norms, p_max, probs))


# ---------------------------------------------------------------------------
# Super-exponential moment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SuperExpEstimate:
    sigma: float
    degenerate: bool = False


def super_exp_sigma(norms, probs=None) -> SuperExpEstimate:
    """Smallest sigma with E exp(||X||^2 / sigma^2) <= e, by bisection.

    The mean is decreasing in sigma; the search bracket is [max/10, 10 max].
    """
    x = np.abs(np.asarray(norms, dtype=float))
    w = _weights(x, probs)
    top = float(np.max(x))
    if top == 0.0:
        return SuperExpEstimate(0.0, degenerate=True)
    sq = x * x

    def excess(sigma: float) -> float:
        return _log_mean_exp(sq / (sigma * sigma), w) - 1.0

    root = optimize.bisect(excess, top / 10.0, 10.0 * top, xtol=1e-15, rtol=1e-14, maxiter=200)
    return SuperExpEstimate(float(root))


# ---------------------------------------------------------------------------
# Tails
# ---------------------------------------------------------------------------

def tail_sigma_from_bounds(t_grid: Sequence[float], upper_bounds: Sequence[float]) -> float:
    """max over t of t / sqrt(2 ln(2 / ub(t))); points with ub >= 2 are vacuous."""
    best: Optional[float] = None
    for t, ub in zip(t_grid, upper_bounds):
        if not (t > 0):
            raise ValidationError(f"tail thresholds must be positive, got {t!r}")
        if ub >= 2.0:
            continue
        value = 0.0 if ub <= 0.0 else t / math.sqrt(2.0 * math.log(2.0 / ub))
        best = value if best is None else max(best, value)
    if best is None:
        raise DomainError("every tail threshold is vacuous (upper bound >= 2)")
    return best


def tail_upper_bounds(norms, t_grid: Sequence[float], alpha: float, probs=None) -> List[float]:
    """CP upper bounds of Pr(||X|| >= t), or exact tail masses when probs are given."""
    x = np.asarray(norms, dtype=float)
    if probs is not None:
        w = _weights(x, probs)
        return [min(1.0, float(np.sum(w[x >= t]))) for t in t_grid]
    return [tail_from_values(x, t, alpha).upper for t in t_grid]


def tail_sigma(norms, t_grid: Sequence[float], alpha: float = 1e-3, probs=None) -> float:
    if not t_grid:
        raise ValidationError("t_grid must be non-empty")
    return tail_sigma_from_bounds(t_grid, tail_upper_bounds(norms, t_grid, alpha, probs))


# ---------------------------------------------------------------------------
# Projections and the squared norm
# ---------------------------------------------------------------------------

def projection_constant(projections, theta_grid: Sequence[float], sigma: float, probs=None) -> float:
    """max over theta of sqrt(2 ln E exp(theta Z)) / (|theta| sigma)."""
    if not (sigma > 0):
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    z = np.asarray(projections, dtype=float)
    w = _weights(z, probs)
    best = 0.0
    for theta in theta_grid:
        if theta == 0:
            raise ValidationError("theta_grid entries must be nonzero")
        log_mgf = _log_mean_exp(theta * z, w)
        if log_mgf > 0:
            best = max(best, math.sqrt(2.0 * log_mgf) / (abs(theta) * sigma))
    return best


@dataclass(frozen=True)
class SubExpEstimate:
    c_hat: float
    lambdas: Tuple[float, ...]
    converged: bool
    rounds: int


def subexp_constant(norms, lambda_grid: Sequence[float], sigma: float, probs=None) -> SubExpEstimate:
    """Fixed point of c = max sqrt(ln E exp(lam (Z - mean Z))) / (|lam| sigma^2).

    Z = ||X||^2, and the max runs over the grid points with |lam| <= 1 / (c sigma^2).
    """
    if not (sigma > 0):
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    limit = 1.0 / (2.0 * sigma * sigma)
    for lam in lambda_grid:
        if lam == 0 or abs(lam) >= limit:
            raise ValidationError(f"lambda grid must lie in (-{limit:g}, {limit:g}) minus 0, got {lam!r}")
    x = np.asarray(norms, dtype=float)
    w = _weights(x, probs)
    z = x * x
    centered = z - float(np.sum(w * z))
    s2 = sigma * sigma
    need: Dict[float, float] = {}
    for lam in lambda_grid:
        log_mgf = _log_mean_exp(lam * centered, w)
        need[lam] = math.sqrt(log_mgf) / (abs(lam) * s2) if log_mgf > 0 else 0.0

    def allowed(c: float) -> List[float]:
        return [lam for lam in lambda_grid if c == 0 or abs(lam) <= 1.0 / (c * s2)]

    c = 0.0
    for rounds in range(1, SUBEXP_ROUNDS + 1):
        nxt = max((need[lam] for lam in allowed(c)), default=0.0)
        if nxt == c:
            return SubExpEstimate(c, tuple(allowed(c)), True, rounds)
        c = nxt
    logger.warning("sub-exponential fixed point did not settle after %d rounds", SUBEXP_ROUNDS)
    return SubExpEstimate(c, tuple(allowed(c)), False, SUBEXP_ROUNDS)


# ---------------------------------------------------------------------------
# Spec-level wrappers
# ---------------------------------------------------------------------------

def norm_sample(
    spec: DistributionSpec, config: TrialConfig, stream_index: int = 0
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """Norms of ``spec``: exact (atom norms, probs) or ``config.trials`` sampled norms."""
    if spec.family is Family.FINITE_SUPPORT:
        return np.linalg.norm(spec.atoms_array(), axis=1), spec.probs_array()

    def sampler(rng: np.random.Generator, count: int) -> np.ndarray:
        return np.linalg.norm(draw(spec, rng, count), axis=1)

    return collect_statistics(sampler, config, stream_index), None


def default_t_grid(spec: DistributionSpec, points: int = 20) -> List[float]:
    """Evenly spaced thresholds from 0.15 to 3 times the certified scale."""
    scale = certificate(spec).effective_sigma
    return [float(t) for t in np.linspace(0.15, 3.0, points) * scale]


def observed_t_grid(t_grid: Sequence[float], norms) -> List[float]:
    """Thresholds of ``t_grid`` that at least one norm reaches; the smallest if none do."""
    if not t_grid:
        raise ValidationError("t_grid must be non-empty")
    top = float(np.max(np.asarray(norms, dtype=float)))
    kept = [float(t) for t in t_grid if t <= top]
    return kept or [float(min(t_grid))]


@dataclass(frozen=True)
class TailCheck:
    estimate: TailEstimate
    certified: float

    @property
    def margin(self) -> float:
        return self.certified - self.estimate.upper

    @property
    def passed(self) -> bool:
        return self.margin >= 0.0

    def to_dict(self) -> dict:
        out = self.estimate.to_dict()
        out.update({"certified": self.certified, "margin": self.margin})
        return out


def certificate_tail_check(
    spec: DistributionSpec,
    t_grid: Sequence[float],
    config: TrialConfig,
    cert: Optional[NsgCertificate] = None,
    stream_index: int = 0,
) -> List[TailCheck]:
    """Compare Pr(||X|| >= t) bounds against the certificate at each t.

    ``cert`` overrides the family's analytic certificate (e.g. to test a wrong one).
    """
    cert = cert or certificate(spec)
    norms, probs = norm_sample(spec, config, stream_index)
    if probs is not None:
        ubs = tail_upper_bounds(norms, t_grid, config.alpha, probs)
        estimates = [TailEstimate.exact(t, ub) for t, ub in zip(t_grid, ubs)]
    else:
        estimates = [tail_from_values(norms, t, config.alpha) for t in t_grid]
    return [TailCheck(est, cert.tail_bound(est.threshold)) for est in estimates]


@dataclass
class EquivalenceReport:
    sigma_tail: float
    sigma_moment: float
    sigma_mgf: float
    window: Tuple[float, float] = EQUIVALENCE_WINDOW
    ratios: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        pairs = {
            "tail/moment": (self.sigma_tail, self.sigma_moment),
            "tail/mgf": (self.sigma_tail, self.sigma_mgf),
            "moment/mgf": (self.sigma_moment, self.sigma_mgf),
        }
        self.ratios = {k: (a / b if b > 0 else math.inf) for k, (a, b) in pairs.items()}

    @property
    def within_window(self) -> bool:
        lo, hi = self.window
        return all(lo <= r <= hi for r in self.ratios.values())

    def margin(self) -> float:
        """Smallest log-distance of a ratio to the window edges (negative if outside)."""
        lo, hi = self.window
        return min(min(math.log(r / lo), math.log(hi / r)) if 0 < r < math.inf else -math.inf
                   for r in self.ratios.values())

    def to_dict(self) -> dict:
        return {
            "sigma_tail": self.sigma_tail,
            "sigma_moment": self.sigma_moment,
            "sigma_mgf": self.sigma_mgf,
            "ratios": dict(self.ratios),
            "window": list(self.window),
            "within_window": self.within_window,
        }


def equivalence_from_norms(norms, t_grid: Sequence[float], alpha: float, probs=None,
                           p_max: int = MAX_MOMENT,
                           window: Tuple[float, float] = EQUIVALENCE_WINDOW) -> EquivalenceReport:
    return EquivalenceReport(
        sigma_tail=tail_sigma(norms, t_grid, alpha, probs),
        sigma_moment=moment_sigma(norms, p_max, probs),
        sigma_mgf=super_exp_sigma(norms, probs).sigma,
        window=window,
    )


def equivalence_report(
    spec: DistributionSpec,
    config: TrialConfig,
    t_grid: Optional[Sequence[float]] = None,
    window: Tuple[float, float] = EQUIVALENCE_WINDOW,
    stream_index: int = 0,
) -> EquivalenceReport:
    """sigma estimates from tails, moments and the super-exponential moment.

    Without an explicit ``t_grid`` the default thresholds are cut at the largest
    observed norm, past which every tail bound is a zero-hit bound.
    """
    norms, probs = norm_sample(spec, config, stream_index)
    if t_grid is None:
        t_grid = observed_t_grid(default_t_grid(spec), norms)
    report = equivalence_from_norms(norms, t_grid, config.alpha, probs,
                                    window=window)
    logger.info("equivalence %s d=%d: %s", spec.family.value, spec.d,
                ", ".join(f"{k}={v:.4f}" for k, v in report.ratios.items()))
    return report


def _unit(v, d: int) -> np.ndarray:
    vec = np.asarray(v, dtype=float).reshape(-1)
    if vec.shape[0] != d:
        raise ValidationError(f"v has dimension {vec.shape[0]}, spec has {d}")
    if abs(float(np.linalg.norm(vec)) - 1.0) > UNIT_TOL:
        raise ValidationError("v must be a unit vector")
    return vec


def symmetric_grid(values: Sequence[float]) -> List[float]:
    """``values`` together with their negatives, sorted, without duplicates."""
    return sorted({float(v) for v in values} | {-float(v) for v in values})


def projection_check(spec: DistributionSpec, v, theta_grid: Sequence[float], config: TrialConfig) -> float:
    """Smallest c with E exp(theta <v, X>) <= exp(theta^2 (c sigma)^2 / 2) on the grid."""
    vec = _unit(v, spec.d)
    sigma = certificate(spec).sigma
    if spec.family is Family.FINITE_SUPPORT:
        return projection_constant(spec.atoms_array() @ vec, theta_grid, sigma, spec.probs_array())

    def sampler(rng: np.random.Generator, count: int) -> np.ndarray:
        return draw(spec, rng, count) @ vec

    return projection_constant(collect_statistics(sampler, config), theta_grid, sigma)


def normsq_subexp_check(spec: DistributionSpec, lambda_grid: Sequence[float], config: TrialConfig) -> SubExpEstimate:
    """Sub-exponential constant of ||X||^2 on the admissible part of ``lambda_grid``."""
    norms, probs = norm_sample(spec, config)
    return subexp_constant(norms, lambda_grid, certificate(spec).sigma, probs)
