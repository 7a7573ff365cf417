"""Symmetric dilation of vectors and the matrix-MGF machinery built on it.

A vector x in R^d is embedded as the (d+1)x(d+1) symmetric matrix

    Y = [[0, x^T],
         [x, 0  ]]

whose spectrum is {+||x||, -||x||, 0 (d-1 times)} and which satisfies
Y^3 = ||x||^2 Y.  That identity gives exp(theta Y) in closed form, and the
exact Lieb / trace-exponential peeling checks below rely on it.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from .distributions import DistributionSpec, Family, SeedStream, certificate, sample
from .errors import DomainError, ResourceError, UsageError, ValidationError

logger = logging.getLogger(__name__)

SERIES_CUTOFF = 1e-8
DOMINANCE_TOL = 1e-10
SYMMETRY_TOL = 1e-14
EIG_FLOOR = 1e-300
MAX_PATHS = 10**6

MgfSource = Union[DistributionSpec, np.ndarray]


@dataclass(frozen=True, eq=False)
class DilationMatrix:
    """The symmetric embedding of a d-vector."""

    x: np.ndarray

    @property
    def dim(self) -> int:
        return self.x.shape[0] + 1

    @property
    def radius(self) -> float:
        return float(np.linalg.norm(self.x))

    @property
    def matrix(self) -> np.ndarray:
        m = np.zeros((self.dim, self.dim))
        m[0, 1:] = self.x
        m[1:, 0] = self.x
        return m

    def eigenvalues(self) -> np.ndarray:
        """Spectrum in ascending order: -r, 0 (d-1 times), r."""
        r = self.radius
        return np.concatenate(([-r], np.zeros(self.dim - 2), [r]))


def as_symmetric(m) -> np.ndarray:
    """Validate and return ``m`` as a dense symmetric float matrix."""
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {arr.shape}")
    scale = max(1.0, float(np.max(np.abs(arr)))) if arr.size else 1.0
    if np.max(np.abs(arr - arr.T), initial=0.0) > SYMMETRY_TOL * scale:
        raise ValidationError("matrix is not symmetric")
    return (arr + arr.T) / 2.0


def dilate(x) -> DilationMatrix:
    vec = np.asarray(x, dtype=float).reshape(-1)
    if vec.size < 1:
        raise ValidationError("dilate needs a vector of dimension d >= 1")
    return DilationMatrix(vec)


# ---------------------------------------------------------------------------
# Closed-form exponentials
# ---------------------------------------------------------------------------

def _exp_coefficients(r: np.ndarray, theta: float) -> Tuple[np.ndarray, np.ndarray]:
    """Coefficients (a, b) with exp(theta Y) = I + a Y + b Y^2 for ||x|| = r.

    a = sinh(theta r) / r and b = (cosh(theta r) - 1) / r^2, with a Taylor
    expansion below SERIES_CUTOFF.
    """
    r = np.asarray(r, dtype=float)
    small = r < SERIES_CUTOFF
    safe = np.where(small, 1.0, r)
    tr = theta * safe
    a = np.where(small, theta + theta**3 * r**2 / 6.0, np.sinh(tr) / safe)
    b = np.where(small, theta**2 / 2.0 + theta**4 * r**2 / 24.0, (np.cosh(tr) - 1.0) / safe**2)
    return a, b


def exp_dilation(x, theta: float) -> np.ndarray:
    """exp(theta * dilate(x)) via I + (sinh(theta r)/r) Y + ((cosh(theta r)-1)/r^2) Y^2."""
    y = dilate(x)
    a, b = _exp_coefficients(np.array(y.radius), theta)
    ym = y.matrix
    return np.eye(y.dim) + float(a) * ym + float(b) * (ym @ ym)


def trace_exp_dilation(x, theta: float) -> float:
    """tr exp(theta * dilate(x)) = 2 cosh(theta ||x||) + (d - 1)."""
    y = dilate(x)
    return 2.0 * math.cosh(theta * y.radius) + (y.dim - 2)


def sym_expm(m) -> np.ndarray:
    """Matrix exponential of a symmetric matrix by eigendecomposition."""
    w, v = linalg.eigh(as_symmetric(m))
    return (v * np.exp(w)) @ v.T


def sym_logm(m) -> np.ndarray:
    """Matrix logarithm of a symmetric positive-definite matrix."""
    w, v = linalg.eigh(as_symmetric(m))
    if np.min(w) <= 0:
        logger.debug("sym_logm: flooring eigenvalue %.3e to %.0e", float(np.min(w)), EIG_FLOOR)
    return (v * np.log(np.maximum(w, EIG_FLOOR))) @ v.T


def lambda_max(m) -> float:
    return float(linalg.eigh(as_symmetric(m), eigvals_only=True)[-1])


# ---------------------------------------------------------------------------
# MGF of the dilation
# ---------------------------------------------------------------------------

def _weighted_points(
    source: MgfSource,
    stream: Optional[SeedStream],
    count: Optional[int],
) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(source, DistributionSpec):
        if source.family is Family.FINITE_SUPPORT:
            return source.atoms_array(), source.probs_array()
        if stream is None or not count:
            raise UsageError(
                f"{source.family.value} has no exact MGF; pass a SeedStream and a sample count"
            )
        pts = sample(source, stream, count)
    else:
        pts = np.atleast_2d(np.asarray(source, dtype=float))
    if pts.shape[0] == 0:
        raise UsageError("empirical_mgf needs at least one sample")
    return pts, np.full(pts.shape[0], 1.0 / pts.shape[0])


def _mgf_from_points(points: np.ndarray, weights: np.ndarray, theta: float) -> np.ndarray:
    d = points.shape[1]
    r = np.linalg.norm(points, axis=1)
    a, b = _exp_coefficients(r, theta)
    out = np.eye(d + 1)
    out[0, 0] += float(np.sum(weights * b * r**2))
    off = (weights * a) @ points
    out[0, 1:] += off
    out[1:, 0] += off
    out[1:, 1:] += (points * (weights * b)[:, None]).T @ points
    return out


def empirical_mgf(
    source: MgfSource,
    theta: float,
    *,
    stream: Optional[SeedStream] = None,
    count: Optional[int] = None,
) -> np.ndarray:
    """E exp(theta Y): exact for FiniteSupport specs, a sample mean otherwise.

    ``source`` is a DistributionSpec or an (N, d) array of samples.  Non-finite
    specs are sampled from ``stream`` with ``count`` draws.
    """
    pts, w = _weighted_points(source, stream, count)
    return _mgf_from_points(pts, w, theta)


def scalar_dominates(m, s: float) -> bool:
    """True iff M <= s I in the PSD order, i.e. lambda_max(M) <= s + 1e-10."""
    return lambda_max(m) <= s + DOMINANCE_TOL


def mgf_constant(
    source: MgfSource,
    theta_grid: Sequence[float],
    *,
    sigma: Optional[float] = None,
    stream: Optional[SeedStream] = None,
    count: Optional[int] = None,
) -> float:
    """Smallest c with E exp(theta Y) <= exp(c theta^2 sigma^2) I on the grid.

    c = max_theta ln lambda_max(E exp(theta Y)) / (theta^2 sigma^2).  ``sigma``
    defaults to the certificate sigma of a spec and is required for raw samples.
    """
    if not theta_grid:
        raise ValidationError("theta_grid must be non-empty")
    if any(t == 0 for t in theta_grid):
        raise ValidationError("theta_grid entries must be nonzero")
    if sigma is None:
        if not isinstance(source, DistributionSpec):
            raise UsageError("mgf_constant on raw samples needs an explicit sigma")
        sigma = certificate(source).sigma
    pts, w = _weighted_points(source, stream, count)
    logs = [math.log(lambda_max(_mgf_from_points(pts, w, t))) for t in theta_grid]
    if all(v <= DOMINANCE_TOL for v in logs):
        return 0.0
    if not (sigma > 0):
        raise DomainError("mgf_constant is undefined for sigma = 0 with a nontrivial MGF")
    return max(v / (t * t * sigma * sigma) for v, t in zip(logs, theta_grid))


def series_domination_gap(p: int) -> float:
    """1/p! - p^p/(2p)!, nonnegative for every p >= 1."""
    if p < 1:
        raise ValidationError(f"p must be a positive integer, got {p!r}")
    log_lhs = p * math.log(p) - math.lgamma(2 * p + 1)
    log_rhs = -math.lgamma(p + 1)
    return math.exp(log_rhs) - math.exp(log_lhs)


# ---------------------------------------------------------------------------
# Exact trace inequalities
# ---------------------------------------------------------------------------

def lieb_check(a, atoms: Sequence[Tuple[object, float]]) -> float:
    """tr exp(A + log E e^Y) - E tr exp(A + Y) for a finite-support random Y.

    Lieb's concavity theorem makes this nonnegative; callers compare against
    -1e-9 to absorb rounding.
    """
    a = as_symmetric(a)
    m = a.shape[0]
    if not atoms:
        raise ValidationError("lieb_check needs at least one atom")
    probs = np.array([p for _, p in atoms], dtype=float)
    if np.any(probs < 0) or abs(float(probs.sum()) - 1.0) > 1e-12:
        raise ValidationError("atom probabilities must be nonnegative and sum to 1")
    mats = [as_symmetric(y) for y, _ in atoms]
    for y in mats:
        if y.shape != (m, m):
            raise ValidationError(f"atom shape {y.shape} does not match A's shape {(m, m)}")
    mean_exp = np.zeros((m, m))
    lhs_terms = np.empty(len(mats))
    for i, (y, p) in enumerate(zip(mats, probs)):
        mean_exp += p * sym_expm(y)
        lhs_terms[i] = p * np.trace(sym_expm(a + y))
    rhs = float(np.trace(sym_expm(a + sym_logm(mean_exp))))
    return rhs - float(np.sum(lhs_terms))


def _check_path_count(counts: Iterable[int]) -> int:
    total = 1
    for k in counts:
        total *= k
        if total > MAX_PATHS:
            raise ResourceError(f"exact enumeration needs more than {MAX_PATHS} paths")
    return total


def peeling_value_from_paths(
    final_sums: np.ndarray,
    sigma_sq_sums: np.ndarray,
    probs: np.ndarray,
    theta: float,
    c: float,
) -> float:
    """E tr exp(-c theta^2 S I + theta sum Y_i) over an exact path distribution.

    Uses sum Y_i = dilate(sum x_i) and tr exp(theta dilate(s)) = 2 cosh(theta ||s||) + d - 1.
    """
    sums = np.atleast_2d(np.asarray(final_sums, dtype=float))
    d = sums.shape[1]
    r = np.linalg.norm(sums, axis=1)
    traces = 2.0 * np.cosh(theta * r) + (d - 1)
    damp = np.exp(-c * theta * theta * np.asarray(sigma_sq_sums, dtype=float))
    return float(np.sum(np.asarray(probs, dtype=float) * damp * traces))


def peeling_check(
    step_supports: Sequence[DistributionSpec],
    theta: float,
    c: float,
    *,
    sigmas: Optional[Sequence[float]] = None,
    d: Optional[int] = None,
) -> float:
    """Exact E tr exp(-c theta^2 sum sigma_i^2 I + theta sum Y_i) for independent steps.

    Each step is a zero-mean FiniteSupport spec; sigma_i defaults to its
    certificate sigma.  The working matrix dimension is d + 1, so the peeling
    argument bounds the result by d + 1.
    """
    if not step_supports:
        if d is None:
            raise UsageError("peeling_check with no steps needs the dimension d")
        return float(d + 1)
    for spec in step_supports:
        if spec.family is not Family.FINITE_SUPPORT:
            raise ValidationError("peeling_check runs on FiniteSupport steps only")
    dim = step_supports[0].d
    if any(spec.d != dim for spec in step_supports):
        raise ValidationError("every step must share the same dimension")
    if sigmas is None:
        sigmas = [certificate(spec).sigma for spec in step_supports]
    if len(sigmas) != len(step_supports):
        raise ValidationError("sigmas must have one entry per step")
    _check_path_count(len(spec.support or ()) for spec in step_supports)

    sums = np.zeros((1, dim))
    probs = np.ones(1)
    for spec in step_supports:
        atoms, p = spec.atoms_array(), spec.probs_array()
        sums = (sums[:, None, :] + atoms[None, :, :]).reshape(-1, dim)
        probs = (probs[:, None] * p[None, :]).reshape(-1)
    sigma_sq = math.fsum(s * s for s in sigmas)
    value = peeling_value_from_paths(sums, np.full(len(probs), sigma_sq), probs, theta, c)
    logger.debug("peeling_check: %d paths, theta=%g, c=%g -> %.12g", len(probs), theta, c, value)
    return value


def peeling_check_paths(weighted_paths: Iterable[Tuple[object, float]], theta: float, c: float) -> float:
    """Peeling value over an exact path distribution with adaptive sigma_i.

    ``weighted_paths`` yields (path, probability) where each path exposes
    ``final_sum`` and ``sigma_sq_sum`` (see martingale.enumerate_paths).
    """
    rows = list(weighted_paths)
    if not rows:
        raise ValidationError("peeling_check_paths needs at least one path")
    sums = np.stack([np.asarray(p.final_sum, dtype=float) for p, _ in rows])  # type: ignore[attr-defined]
    sig = np.array([p.sigma_sq_sum for p, _ in rows], dtype=float)  # type: ignore[attr-defined]
    probs = np.array([w for _, w in rows], dtype=float)
    return peeling_value_from_paths(sums, sig, probs, theta, c)


def random_lieb_instance(
    rng: np.random.Generator, max_dim: int = 4, max_atoms: int = 3, scale: float = 1.0
) -> Tuple[np.ndarray, list]:
    """A random (A, atoms) pair with m <= max_dim and at most max_atoms atoms."""
    m = int(rng.integers(1, max_dim + 1))
    k = int(rng.integers(1, max_atoms + 1))

    def sym() -> np.ndarray:
        g = rng.normal(0.0, scale, (m, m))
        return (g + g.T) / 2.0

    probs = rng.dirichlet(np.ones(k))
    probs = probs / probs.sum()
    return sym(), [(sym(), float(p)) for p in probs]
