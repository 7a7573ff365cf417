"""Vector martingale difference sequences with adaptive step scales.

Each step draws X_i from a zero-mean certified base family and multiplies it
by sigma_i / base.sigma, where sigma_i is computed by an ``AdaptiveRule`` from
the partial sums S_0 = 0, S_1, ..., S_{i-1} only.  The conditional nSG
property therefore holds by construction.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .distributions import DistributionSpec, Family, SeedStream, certificate, draw
from .errors import ResourceError, ValidationError

logger = logging.getLogger(__name__)

MAX_PATHS = 10**6
SCALE_TOL = 1e-12


class RuleKind(str, Enum):
    CONSTANT = "Constant"
    DOUBLE_ON_THRESHOLD = "DoubleOnThreshold"
    HISTORY_NORM_SCALED = "HistoryNormScaled"


def row_norms(arr: np.ndarray) -> np.ndarray:
    """Euclidean norms of the rows of a 2-D array."""
    return np.sqrt(np.einsum("ij,ij->i", arr, arr))


@dataclass(frozen=True)
class AdaptiveRule:
    """Chooses sigma_i from the history of partial-sum norms.

    Constant(sigma):                      sigma_i = sigma
    DoubleOnThreshold(base, thresholds):  sigma_i = base * 2^k, k = #thresholds
                                          reached by max_{j<i} ||S_j||
    HistoryNormScaled(floor, cap, gain):  sigma_i = clip(floor + gain ||S_{i-1}||, floor, cap)
    """

    kind: RuleKind
    sigma: float = 1.0
    thresholds: Tuple[float, ...] = ()
    floor: float = 1.0
    cap: float = 1.0
    gain: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.kind, RuleKind):
            try:
                object.__setattr__(self, "kind", RuleKind(self.kind))
            except ValueError:
                raise ValidationError(f"Unknown rule kind {self.kind!r}")
        object.__setattr__(self, "thresholds", tuple(float(t) for t in self.thresholds))
        if self.kind in (RuleKind.CONSTANT, RuleKind.DOUBLE_ON_THRESHOLD) and not (self.sigma > 0):
            raise ValidationError(f"rule sigma must be positive, got {self.sigma!r}")
        if self.kind is RuleKind.DOUBLE_ON_THRESHOLD:
            if any(t < 0 for t in self.thresholds):
                raise ValidationError("DoubleOnThreshold thresholds must be nonnegative")
            if list(self.thresholds) != sorted(self.thresholds):
                raise ValidationError("DoubleOnThreshold thresholds must be sorted ascending")
        if self.kind is RuleKind.HISTORY_NORM_SCALED:
            if not (0 < self.floor <= self.cap):
                raise ValidationError(
                    f"HistoryNormScaled needs 0 < floor <= cap, got floor={self.floor}, cap={self.cap}"
                )
            if self.gain < 0:
                raise ValidationError(f"HistoryNormScaled gain must be nonnegative, got {self.gain!r}")

    @classmethod
    def constant(cls, sigma: float) -> "AdaptiveRule":
        return cls(RuleKind.CONSTANT, sigma=sigma)

    @classmethod
    def double_on_threshold(cls, base: float, thresholds: Sequence[float]) -> "AdaptiveRule":
        return cls(RuleKind.DOUBLE_ON_THRESHOLD, sigma=base, thresholds=tuple(thresholds))

    @classmethod
    def history_norm_scaled(cls, floor: float, cap: float, gain: float) -> "AdaptiveRule":
        return cls(RuleKind.HISTORY_NORM_SCALED, floor=floor, cap=cap, gain=gain)

    @property
    def max_sigma(self) -> float:
        if self.kind is RuleKind.CONSTANT:
            return self.sigma
        if self.kind is RuleKind.DOUBLE_ON_THRESHOLD:
            return self.sigma * 2.0 ** len(self.thresholds)
        return self.cap

    def sigmas(self, last_norm: np.ndarray, running_max: np.ndarray) -> np.ndarray:
        """Vectorized sigma_i given ||S_{i-1}|| and max_{j<i} ||S_j|| per path."""
        last_norm = np.asarray(last_norm, dtype=float)
        if self.kind is RuleKind.CONSTANT:
            out = np.full(last_norm.shape, self.sigma)
        elif self.kind is RuleKind.DOUBLE_ON_THRESHOLD:
            crossed = np.searchsorted(np.asarray(self.thresholds), running_max, side="right")
            out = self.sigma * np.power(2.0, crossed)
        else:
            out = np.clip(self.floor + self.gain * last_norm, self.floor, self.cap)
        if np.any(~(out > 0)):
            raise ValidationError("adaptive rule produced a nonpositive sigma")
        return out

    def to_dict(self) -> Dict[str, Any]:
        if self.kind is RuleKind.CONSTANT:
            return {"kind": self.kind.value, "sigma": self.sigma}
        if self.kind is RuleKind.DOUBLE_ON_THRESHOLD:
            return {"kind": self.kind.value, "base": self.sigma, "thresholds": list(self.thresholds)}
        return {"kind": self.kind.value, "floor": self.floor, "cap": self.cap, "gain": self.gain}

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "AdaptiveRule":
        kind = RuleKind(raw.get("kind", "Constant"))
        if kind is RuleKind.CONSTANT:
            return cls.constant(float(raw.get("sigma", 1.0)))
        if kind is RuleKind.DOUBLE_ON_THRESHOLD:
            return cls.double_on_threshold(float(raw.get("base", 1.0)), raw.get("thresholds", []))
        return cls.history_norm_scaled(
            float(raw["floor"]), float(raw["cap"]), float(raw.get("gain", 0.0))
        )


@dataclass(eq=False)
class MartingalePath:
    """One realized path: per-step sigma_i, increment x_i and partial sum S_i."""

    base: DistributionSpec
    sigmas: np.ndarray
    xs: np.ndarray
    partial_sums: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self.sigmas = np.asarray(self.sigmas, dtype=float).reshape(-1)
        self.xs = np.asarray(self.xs, dtype=float).reshape(len(self.sigmas), self.base.d)
        self.partial_sums = np.cumsum(self.xs, axis=0)

    @property
    def n(self) -> int:
        return len(self.sigmas)

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def steps(self) -> List[Tuple[float, np.ndarray, np.ndarray]]:
        return [(float(s), x, p) for s, x, p in zip(self.sigmas, self.xs, self.partial_sums)]

    @property
    def final_sum(self) -> np.ndarray:
        return self.partial_sums[-1] if self.n else np.zeros(self.d)

    @property
    def sigma_sq_sum(self) -> float:
        return math.fsum(float(s) * float(s) for s in self.sigmas)


def _check_base(base: DistributionSpec) -> None:
    if not isinstance(base, DistributionSpec):
        raise ValidationError("base must be a DistributionSpec")
    # steps are X / base.sigma, so the base must be certified at its own scale
    certified = certificate(base).sigma
    if certified > base.sigma * (1.0 + SCALE_TOL):
        raise ValidationError(
            f"base is certified at sigma={certified:.6g}, above its declared scale {base.sigma:.6g}"
        )


def _scale(sigma: np.ndarray, base: DistributionSpec) -> np.ndarray:
    return sigma / base.sigma


def simulate_path(rule: AdaptiveRule, base: DistributionSpec, n: int, stream: SeedStream) -> MartingalePath:
    """Draw one path of length ``n``; deterministic in (rule, base, n, stream)."""
    _check_base(base)
    if n < 0:
        raise ValidationError(f"n must be nonnegative, got {n!r}")
    rng = stream.generator()
    sigmas = np.empty(n)
    xs = np.empty((n, base.d))
    s = np.zeros((1, base.d))
    running = np.zeros(1)
    for i in range(n):
        sig = rule.sigmas(row_norms(s), running)
        sigmas[i] = sig[0]
        xs[i] = _scale(sig, base)[0] * draw(base, rng, 1)[0]
        s = s + xs[i]
        running = np.maximum(running, row_norms(s))
    return MartingalePath(base, sigmas, xs)


def replay_sigmas(rule: AdaptiveRule, path: MartingalePath) -> List[float]:
    """Recompute each sigma_i from the stored prefix S_0..S_{i-1}."""
    norms = row_norms(path.partial_sums) if path.n else np.zeros(0)
    out: List[float] = []
    last = 0.0
    running = 0.0
    for i in range(path.n):
        out.append(float(rule.sigmas(np.array([last]), np.array([running]))[0]))
        last = float(norms[i])
        running = max(running, last)
    return out


def audit_measurability(rule: AdaptiveRule, path: MartingalePath) -> bool:
    """True iff replaying the rule reproduces every stored sigma_i bit-exactly."""
    return replay_sigmas(rule, path) == [float(s) for s in path.sigmas]


def path_statistic(path: MartingalePath) -> Tuple[float, float]:
    """(sum sigma_i^2, ||sum x_i||); (0, 0) for the empty path."""
    if path.n == 0:
        return 0.0, 0.0
    return path.sigma_sq_sum, float(np.linalg.norm(path.final_sum))


def simulate_statistics(
    rule: AdaptiveRule,
    base: DistributionSpec,
    n: int,
    stream: SeedStream,
    paths: int,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Simulate ``paths`` independent paths at once.

    Returns (sum sigma_i^2, ||S_n||) arrays of length ``paths``.  ``rng``
    overrides the stream's own generator (used for per-batch streams).
    """
    _check_base(base)
    if paths < 1:
        raise ValidationError(f"paths must be positive, got {paths!r}")
    gen = rng if rng is not None else stream.generator()
    s = np.zeros((paths, base.d))
    last = np.zeros(paths)
    running = np.zeros(paths)
    sig_sq = np.zeros(paths)
    for _ in range(n):
        sig = rule.sigmas(last, running)
        s += _scale(sig, base)[:, None] * draw(base, gen, paths)
        sig_sq += sig * sig
        last = row_norms(s)
        running = np.maximum(running, last)
    return sig_sq, last


# ---------------------------------------------------------------------------
# Exact enumeration
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class PathDistribution:
    """Every path of a finite-support martingale with its probability."""

    base: DistributionSpec
    sigmas: np.ndarray
    atom_index: np.ndarray
    probs: np.ndarray

    def __len__(self) -> int:
        return len(self.probs)

    @property
    def n(self) -> int:
        return self.sigmas.shape[1]

    def path(self, j: int) -> MartingalePath:
        atoms = self.base.atoms_array()
        sig = self.sigmas[j]
        xs = _scale(sig, self.base)[:, None] * atoms[self.atom_index[j]]
        return MartingalePath(self.base, sig, xs.reshape(self.n, self.base.d))

    def paths(self) -> List[Tuple[MartingalePath, float]]:
        return [(self.path(j), float(self.probs[j])) for j in range(len(self))]

    def statistics(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(sum sigma_i^2, ||S_n||, probability) arrays over all paths."""
        atoms = self.base.atoms_array()
        factors = self.sigmas / self.base.sigma
        final = np.zeros((len(self), self.base.d))
        for i in range(self.n):
            final = final + factors[:, i, None] * atoms[self.atom_index[:, i]]
        return np.sum(self.sigmas**2, axis=1), row_norms(final), self.probs


def enumerate_paths(rule: AdaptiveRule, base: DistributionSpec, n: int) -> PathDistribution:
    """Exhaustive path distribution for a FiniteSupport base.

    Probabilities sum to 1 up to rounding; more than 10^6 paths raises.
    """
    if base.family is not Family.FINITE_SUPPORT:
        raise ValidationError("enumerate_paths needs a FiniteSupport base")
    _check_base(base)
    if n < 0:
        raise ValidationError(f"n must be nonnegative, got {n!r}")
    atoms, p = base.atoms_array(), base.probs_array()
    k = len(p)
    if k**n > MAX_PATHS:
        raise ResourceError(f"{k}^{n} paths exceeds the enumeration limit of {MAX_PATHS}")

    s = np.zeros((1, base.d))
    last = np.zeros(1)
    running = np.zeros(1)
    probs = np.ones(1)
    sigmas = np.zeros((1, 0))
    index = np.zeros((1, 0), dtype=np.int64)
    for _ in range(n):
        sig = rule.sigmas(last, running)
        paths = len(probs)
        steps = _scale(sig, base)[:, None, None] * atoms[None, :, :]
        s = (s[:, None, :] + steps).reshape(paths * k, base.d)
        probs = (probs[:, None] * p[None, :]).reshape(-1)
        sigmas = np.hstack([np.repeat(sigmas, k, axis=0), np.repeat(sig, k)[:, None]])
        index = np.hstack([np.repeat(index, k, axis=0), np.tile(np.arange(k), paths)[:, None]])
        last = row_norms(s)
        running = np.maximum(np.repeat(running, k), last)
    logger.debug("enumerated %d paths (n=%d, %d atoms)", len(probs), n, k)
    return PathDistribution(base, sigmas, index, probs)


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------

def path_to_frame(path: MartingalePath) -> pd.DataFrame:
    """Columns: step, sigma, x_1..x_d, sumnorm."""
    cols = ["step", "sigma"] + [f"x_{k + 1}" for k in range(path.d)] + ["sumnorm"]
    if path.n == 0:
        return pd.DataFrame(columns=cols)
    frame = pd.DataFrame(path.xs, columns=cols[2:-1])
    frame.insert(0, "sigma", path.sigmas)
    frame.insert(0, "step", np.arange(1, path.n + 1))
    frame["sumnorm"] = row_norms(path.partial_sums)
    return frame


def write_path_csv(path: MartingalePath, out: Union[str, Path]) -> Path:
    target = Path(out)
    target.parent.mkdir(parents=True, exist_ok=True)
    path_to_frame(path).to_csv(target, index=False)
    logger.info("wrote %d-step path to %s", path.n, target)
    return target
