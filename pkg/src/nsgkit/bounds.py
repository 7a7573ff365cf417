"""Evaluators for the vector-martingale concentration bounds.

Three bounds on ||sum X_i|| are provided, each holding with probability at
least 1 - delta under the nSG martingale condition:

    fixed theta:   c * theta * S + log(2d/delta) / theta
    Hoeffding:     c * sqrt(S * log(2d/delta))
    adaptive:      either S >= B, or (2c + 1) * sqrt(max(S, b) * iota)

where S = sum sigma_i^2 and iota = log(2d/delta) + log log(B/b).  Everything
here is pure; equal inputs give bit-equal outputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

from .errors import DomainError, UsageError, ValidationError


@dataclass(frozen=True)
class BoundQuery:
    """Inputs shared by the fixed-theta, optimal-theta and Hoeffding bounds."""

    n: int
    d: int
    delta: float
    sigma_sq_sum: float
    theta: Optional[float] = None
    c: float = 1.0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"BoundQuery.n must be a positive integer, got {self.n!r}")
        if self.d < 1:
            raise ValidationError(f"BoundQuery.d must be a positive integer, got {self.d!r}")
        if not (0.0 < self.delta < 1.0):
            raise ValidationError(f"BoundQuery.delta must lie in (0, 1), got {self.delta!r}")
        if not (self.sigma_sq_sum >= 0.0):
            raise ValidationError(
                f"BoundQuery.sigma_sq_sum must be nonnegative, got {self.sigma_sq_sum!r}"
            )
        if self.theta is not None and not (self.theta > 0.0):
            raise ValidationError(f"BoundQuery.theta must be positive, got {self.theta!r}")
        if not (self.c > 0.0):
            raise ValidationError(f"BoundQuery.c must be positive, got {self.c!r}")

    @classmethod
    def from_sigmas(cls, sigmas: List[float], d: int, delta: float, **kwargs) -> "BoundQuery":
        """Build a query from the individual sigma_i values."""
        return cls(n=max(len(sigmas), 1), d=d, delta=delta,
                   sigma_sq_sum=math.fsum(s * s for s in sigmas), **kwargs)


@dataclass(frozen=True)
class DoublingGrid:
    """Geometric grid psi_j = 2^(j-1) b with matched theta_j = sqrt(iota / psi_j)."""

    b: float
    B: float
    psi: List[float] = field(default_factory=list)
    theta_list: List[float] = field(default_factory=list)
    iota: float = 0.0

    @property
    def s(self) -> int:
        return len(self.psi)

    def to_dict(self) -> dict:
        return {"b": self.b, "B": self.B, "psi": list(self.psi),
                "theta": list(self.theta_list), "iota": self.iota, "s": self.s}


@dataclass(frozen=True)
class AdaptiveOutcome:
    """Either the variance budget was exceeded, or a bound value applies."""

    exceeded: bool
    value: Optional[float] = None

    @property
    def case(self) -> str:
        return "exceeded" if self.exceeded else "bound"

    def to_dict(self) -> dict:
        out: dict = {"case": self.case}
        if not self.exceeded:
            out["bound"] = self.value
        return out


def log_factor(d: int, delta: float) -> float:
    """Return ln(2d / delta); rejects ratios below 1."""
    if d < 1:
        raise DomainError(f"d must be a positive integer, got {d!r}")
    if not (delta > 0):
        raise DomainError(f"delta must be positive, got {delta!r}")
    if delta >= 2.0 * d:
        raise DomainError(
            f"log(2d/delta) must be positive: need delta < 2d, got d={d}, delta={delta}"
        )
    return math.log(2.0 * d / delta)


def _log_log_ratio(B: float, b: float) -> float:
    if not (b > 0) or not (B > b):
        raise DomainError(f"need B > b > 0, got b={b!r}, B={B!r}")
    ratio = B / b
    if ratio < math.e and not math.isclose(ratio, math.e, rel_tol=1e-12):
        raise DomainError(
            f"B/b = {ratio:.6g} is below e, so log log(B/b) < 0; enlarge B or shrink b"
        )
    return max(0.0, math.log(math.log(ratio)))


def iota(d: int, delta: float, B: float, b: float) -> float:
    """Return ln(2d/delta) + ln ln(B/b), requiring B/b >= e."""
    return log_factor(d, delta) + _log_log_ratio(B, b)


def fixed_theta_bound(q: BoundQuery) -> float:
    """c * theta * sum sigma_i^2 + log(2d/delta) / theta."""
    if q.theta is None:
        raise UsageError("fixed_theta_bound needs theta; use optimal_theta or hoeffding_bound")
    return q.c * q.theta * q.sigma_sq_sum + log_factor(q.d, q.delta) / q.theta


def optimal_theta(q: BoundQuery) -> float:
    """sqrt(log(2d/delta) / sum sigma_i^2), the theta that yields the Hoeffding form."""
    if q.sigma_sq_sum == 0.0:
        raise DomainError("optimal_theta is undefined when sum sigma_i^2 = 0; the bound is 0")
    return math.sqrt(log_factor(q.d, q.delta) / q.sigma_sq_sum)


def hoeffding_bound(q: BoundQuery) -> float:
    """c * sqrt(sum sigma_i^2 * log(2d/delta)); 0 for an empty sum."""
    lf = log_factor(q.d, q.delta)
    if q.sigma_sq_sum == 0.0:
        return 0.0
    return q.c * math.sqrt(q.sigma_sq_sum * lf)


def build_doubling_grid(b: float, B: float, d: int, delta: float) -> DoublingGrid:
    """Grid with s = floor(log2(B/b)) + 1 points, psi_s <= B < 2 psi_s."""
    io = iota(d, delta, B, b)
    psi: List[float] = [b]
    # Doubling is exact in binary floating point, so psi_j = 2^(j-1) b exactly.
    while psi[-1] * 2.0 <= B:
        psi.append(psi[-1] * 2.0)
    thetas = [math.sqrt(io / p) for p in psi]
    return DoublingGrid(b=b, B=B, psi=psi, theta_list=thetas, iota=io)


def grid_min_bound(sigma_sq_sum: float, grid: DoublingGrid, c: float = 1.0) -> float:
    """min_j [c theta_j S + iota / theta_j] over the grid (the union-bound form)."""
    if sigma_sq_sum < 0:
        raise DomainError(f"sum sigma_i^2 must be nonnegative, got {sigma_sq_sum!r}")
    return min(c * th * sigma_sq_sum + grid.iota / th for th in grid.theta_list)


def adaptive_bound(sigma_sq_sum: float, grid: DoublingGrid, c: float = 1.0) -> AdaptiveOutcome:
    """Two-case bound: Exceeded when S >= B, else (2c+1) sqrt(max(S, b) iota)."""
    if sigma_sq_sum < 0:
        raise DomainError(f"sum sigma_i^2 must be nonnegative, got {sigma_sq_sum!r}")
    if not (c > 0):
        raise DomainError(f"c must be positive, got {c!r}")
    if sigma_sq_sum >= grid.B:
        return AdaptiveOutcome(exceeded=True)
    return AdaptiveOutcome(
        exceeded=False,
        value=(2.0 * c + 1.0) * math.sqrt(max(sigma_sq_sum, grid.b) * grid.iota),
    )


def markov_tail(d: int, t: float) -> float:
    """min(1, 2d e^{-t}); the failure probability at deviation level t."""
    if d < 1:
        raise DomainError(f"d must be a positive integer, got {d!r}")
    return min(1.0, 2.0 * d * math.exp(-t))
