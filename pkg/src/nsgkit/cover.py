"""1/2-covers of the unit sphere and norm recovery through them.

A maximal 1/2-separated set on S^{d-1} is a 1/2-cover.  For any x and the
cover point v closest to x/||x||, <v, x> >= (7/8)||x||, so 2 max_i <v_i, x>
recovers ||x|| up to a factor of two.  Together with a union bound over the
cover this is what turns a (sigma/sqrt(d))-subGaussian vector into an
nSG(2 sqrt(2) sigma) one.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np

from .distributions import SeedStream
from .distributions.bounded import unit_directions
from .errors import DomainError, ResourceError, ValidationError

logger = logging.getLogger(__name__)

MAX_COVER_DIM = 12
DEFAULT_REJECTIONS = 10**5
DEFAULT_CERTIFY_DIRECTIONS = 10**4
UNIT_TOL = 1e-12
_BATCH = 4096
_MAX_SWEEPS = 50


def _max_dot_for_radius(radius: float) -> float:
    # ||u - v|| <= r  <=>  <u, v> >= 1 - r^2 / 2 for unit u, v
    return 1.0 - radius * radius / 2.0


@dataclass(frozen=True, eq=False)
class SphereCover:
    """Unit vectors on S^{d-1} intended to cover it at distance ``radius``."""

    d: int
    points: np.ndarray
    radius: float = 0.5
    certified_directions: int = 0

    def __post_init__(self) -> None:
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if self.d < 1:
            raise ValidationError(f"SphereCover.d must be a positive integer, got {self.d!r}")
        if pts.size == 0 or pts.shape[1] != self.d:
            raise ValidationError(f"cover points must be a non-empty (k, {self.d}) array")
        norms = np.linalg.norm(pts, axis=1)
        if np.max(np.abs(norms - 1.0)) > UNIT_TOL:
            raise ValidationError("every cover point must have unit norm")
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    def min_separation(self) -> float:
        """Smallest pairwise distance between cover points (inf for one point)."""
        if self.size < 2:
            return math.inf
        gram = self.points @ self.points.T
        np.fill_diagonal(gram, -np.inf)
        top = float(np.max(gram))
        return math.sqrt(max(0.0, 2.0 - 2.0 * top))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.d,
            "radius": self.radius,
            "size": self.size,
            "certified_directions": self.certified_directions,
            "points": self.points.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "SphereCover":
        try:
            pts = np.array(raw["points"], dtype=float)
            return cls(int(raw["d"]), pts, float(raw.get("radius", 0.5)),
                       int(raw.get("certified_directions", 0)))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed cover JSON: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "SphereCover":
        return cls.from_dict(json.loads(text))


def _greedy_pack(
    rng: np.random.Generator, d: int, max_rejections: int, threshold: float
) -> np.ndarray:
    kept = np.empty((0, d))
    consecutive = 0
    batches = 0
    while consecutive < max_rejections:
        batch = unit_directions(rng, _BATCH, d)
        batches += 1
        if kept.shape[0]:
            candidate = np.max(batch @ kept.T, axis=1) <= threshold
        else:
            candidate = np.ones(_BATCH, dtype=bool)
        added: List[np.ndarray] = []
        prev = 0
        stopped = False
        for i in np.flatnonzero(candidate):
            consecutive += int(i) - prev
            prev = int(i) + 1
            if consecutive >= max_rejections:
                stopped = True
                break
            u = batch[i]
            if added and max(float(u @ v) for v in added) > threshold:
                consecutive += 1
                continue
            added.append(u)
            consecutive = 0
        if not stopped:
            consecutive += _BATCH - prev
        if added:
            kept = np.vstack([kept, np.array(added)])
        logger.debug("greedy packing batch %d: %d points, %d consecutive rejections",
                     batches, kept.shape[0], consecutive)
    return kept


def _uncovered(points: np.ndarray, directions: np.ndarray, threshold: float) -> np.ndarray:
    return directions[np.max(directions @ points.T, axis=1) < threshold]


def build_half_cover(
    d: int,
    stream: SeedStream,
    *,
    max_rejections: int = DEFAULT_REJECTIONS,
    certify_directions: int = DEFAULT_CERTIFY_DIRECTIONS,
) -> SphereCover:
    """Greedy maximal 1/2-separated set on S^{d-1}, then a certification sweep.

    Candidates are kept when they are at least 1/2 from every kept point, until
    ``max_rejections`` consecutive candidates are rejected.  Fresh directions
    are then tested; any farther than 1/2 from the cover is added (it keeps the
    separation) and the sweep repeats until a sweep finds nothing uncovered.
    """
    if d < 1:
        raise ValidationError(f"d must be a positive integer, got {d!r}")
    if d > MAX_COVER_DIM:
        raise ResourceError(f"build_half_cover supports d <= {MAX_COVER_DIM}, got d={d}")
    if max_rejections < 1:
        raise ValidationError("max_rejections must be positive")
    threshold = _max_dot_for_radius(0.5)
    kept = _greedy_pack(stream.batch_generator(0), d, max_rejections, threshold)

    sweeps = 0
    if certify_directions > 0:
        while True:
            sweeps += 1
            sweep = unit_directions(stream.batch_generator(sweeps), certify_directions, d)
            missing = _uncovered(kept, sweep, threshold)
            if missing.shape[0] == 0:
                break
            logger.debug("certification sweep %d: %d uncovered directions", sweeps, missing.shape[0])
            for u in missing:
                if np.max(kept @ u) < threshold:
                    kept = np.vstack([kept, u])
            if sweeps >= _MAX_SWEEPS:
                logger.warning("cover for d=%d still had gaps after %d sweeps", d, sweeps)
                break

    size_bound = 5.0**d
    if kept.shape[0] > size_bound:
        logger.warning("cover size %d exceeds the volumetric bound 5^%d", kept.shape[0], d)
    logger.info("built 1/2-cover: d=%d, %d points, %d certification sweep(s)", d, kept.shape[0], sweeps)
    return SphereCover(d, kept, 0.5, certify_directions)


def covering_radius(cover: SphereCover, directions) -> float:
    """Largest distance from any of ``directions`` to its nearest cover point."""
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    if dirs.shape[1] != cover.d:
        raise ValidationError(f"directions have dimension {dirs.shape[1]}, cover has {cover.d}")
    nearest = np.max(dirs @ cover.points.T, axis=1)
    return float(np.sqrt(np.maximum(0.0, 2.0 - 2.0 * np.min(nearest))))


def norm_via_cover(x, cover: SphereCover) -> float:
    """2 max_i <v_i, x>, which lies in [||x||, 2||x||] for a 1/2-cover."""
    vec = np.asarray(x, dtype=float).reshape(-1)
    if vec.shape[0] != cover.d:
        raise ValidationError(f"x has dimension {vec.shape[0]}, cover has {cover.d}")
    return 2.0 * float(np.max(cover.points @ vec))


def norms_via_cover(xs, cover: SphereCover) -> np.ndarray:
    """Row-wise norm_via_cover for an (N, d) array."""
    arr = np.atleast_2d(np.asarray(xs, dtype=float))
    if arr.shape[1] != cover.d:
        raise ValidationError(f"x has dimension {arr.shape[1]}, cover has {cover.d}")
    return 2.0 * np.max(arr @ cover.points.T, axis=1)


def union_tail_bound(d: int, sigma: float, t: float, cover_size_bound: float = 4.0) -> float:
    """cover_size_bound^d * exp(-d t^2 / (8 sigma^2)).

    Pass ``cover_size_bound=5`` for the volumetric covering number.
    """
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t!r}")
    if not (sigma > 0):
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    return cover_size_bound**d * math.exp(-d * t * t / (8.0 * sigma * sigma))


def subgaussian_to_nsg(sigma: float) -> float:
    """nSG parameter 2 sqrt(2) sigma of a (sigma/sqrt(d))-subGaussian vector."""
    if not (sigma > 0):
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    return 2.0 * math.sqrt(2.0) * sigma
