"""Distribution specifications and norm-subGaussian certificates.

A ``DistributionSpec`` names one of the supported random-vector families,
its dimension and scale.  ``NsgCertificate`` records the analytic claim
Pr(||X - EX|| >= t) <= 2 exp(-t^2 / (2 (m sigma)^2)) that a family carries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..errors import ValidationError

PROB_TOL = 1e-12
MEAN_TOL = 1e-12


class Family(str, Enum):
    BOUNDED_SPHERE = "BoundedSphere"
    BOUNDED_BALL = "BoundedBall"
    AXIS_SUBGAUSSIAN = "AxisSubGaussian"
    ISOTROPIC_GAUSSIAN = "IsotropicGaussian"
    FINITE_SUPPORT = "FiniteSupport"


class Provenance(str, Enum):
    BOUNDED_CASE = "BoundedCase"
    AXIS_CASE = "AxisCase"
    ISOTROPIC_CASE = "IsotropicCase"
    ASSERTED = "Asserted"


Atom = Tuple[Tuple[float, ...], float]


@dataclass(frozen=True)
class DistributionSpec:
    """One random-vector family at dimension ``d`` and scale ``sigma``.

    ``support`` is only used by ``FiniteSupport`` and holds (vector, probability)
    pairs.  The support must be zero-mean.
    """

    family: Family
    d: int
    sigma: float
    support: Optional[Tuple[Atom, ...]] = None

    def __post_init__(self) -> None:
        if not isinstance(self.family, Family):
            try:
                object.__setattr__(self, "family", Family(self.family))
            except ValueError:
                raise ValidationError(f"Unknown distribution family {self.family!r}")
        if int(self.d) != self.d or self.d < 1:
            raise ValidationError(f"DistributionSpec.d must be a positive integer, got {self.d!r}")
        if not (self.sigma > 0) or not math.isfinite(self.sigma):
            raise ValidationError(f"DistributionSpec.sigma must be positive, got {self.sigma!r}")
        if self.family is Family.FINITE_SUPPORT:
            self._validate_support()
        elif self.support is not None:
            raise ValidationError(f"support is only allowed for FiniteSupport, not {self.family.value}")

    def _validate_support(self) -> None:
        if not self.support:
            raise ValidationError("FiniteSupport requires a non-empty support")
        atoms, probs = self.atoms_array(), self.probs_array()
        if atoms.shape != (len(self.support), self.d):
            raise ValidationError(
                f"every support vector must have dimension d={self.d}, got shape {atoms.shape}"
            )
        if np.any(probs < 0):
            raise ValidationError("FiniteSupport probabilities must be nonnegative")
        if abs(float(probs.sum()) - 1.0) > PROB_TOL:
            raise ValidationError(
                f"FiniteSupport probabilities must sum to 1, got {float(probs.sum())!r}"
            )
        mean_norm = float(np.linalg.norm(probs @ atoms))
        if mean_norm > MEAN_TOL:
            raise ValidationError(
                f"FiniteSupport must be zero-mean, mean vector has norm {mean_norm:.3e}"
            )

    # ------------------------------------------------------------------
    # Support helpers
    # ------------------------------------------------------------------

    def atoms_array(self) -> np.ndarray:
        """Return the support vectors as a (k, d) array."""
        if self.support is None:
            raise ValidationError(f"{self.family.value} has no finite support")
        return np.array([vec for vec, _ in self.support], dtype=float).reshape(len(self.support), -1)

    def probs_array(self) -> np.ndarray:
        if self.support is None:
            raise ValidationError(f"{self.family.value} has no finite support")
        return np.array([p for _, p in self.support], dtype=float)

    def scaled(self, factor: float) -> "DistributionSpec":
        """Return the same family with every sample multiplied by ``factor``."""
        if not (factor > 0):
            raise ValidationError(f"scale factor must be positive, got {factor!r}")
        support = None
        if self.support is not None:
            support = tuple(
                (tuple(float(v) * factor for v in vec), p) for vec, p in self.support
            )
        return DistributionSpec(self.family, self.d, self.sigma * factor, support)

    def with_dimension(self, d: int) -> "DistributionSpec":
        """Return the same family at dimension ``d`` (not defined for FiniteSupport)."""
        if self.family is Family.FINITE_SUPPORT:
            raise ValidationError("FiniteSupport specs carry their own dimension")
        return DistributionSpec(self.family, d, self.sigma)

    # ------------------------------------------------------------------
    # JSON
    # ------------------------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"family": self.family.value, "d": self.d, "sigma": self.sigma}
        if self.support is not None:
            out["support"] = [[list(vec), p] for vec, p in self.support]
        return out

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "DistributionSpec":
        unknown = set(raw) - {"family", "d", "sigma", "support"}
        if unknown:
            raise ValidationError(f"Unknown DistributionSpec fields: {sorted(unknown)}")
        for key in ("family", "d", "sigma"):
            if key not in raw:
                raise ValidationError(f"DistributionSpec is missing '{key}'")
        support = None
        if raw.get("support") is not None:
            try:
                support = tuple(
                    (tuple(float(v) for v in vec), float(p)) for vec, p in raw["support"]
                )
            except (TypeError, ValueError):
                raise ValidationError("support must be a list of [vector, probability] pairs")
        return cls(raw["family"], int(raw["d"]), float(raw["sigma"]), support)


@dataclass(frozen=True)
class NsgCertificate:
    """An analytic nSG(constant_multiplier * sigma) claim for a family."""

    sigma: float
    constant_multiplier: float
    provenance: Provenance = Provenance.ASSERTED

    def __post_init__(self) -> None:
        if not (self.sigma > 0):
            raise ValidationError(f"NsgCertificate.sigma must be positive, got {self.sigma!r}")
        if not (self.constant_multiplier > 0):
            raise ValidationError(
                f"NsgCertificate.constant_multiplier must be positive, got {self.constant_multiplier!r}"
            )

    @property
    def effective_sigma(self) -> float:
        return self.constant_multiplier * self.sigma

    def tail_bound(self, t: float) -> float:
        """Certified bound on Pr(||X - EX|| >= t), capped at 1."""
        s = self.effective_sigma
        return min(1.0, 2.0 * math.exp(-(t * t) / (2.0 * s * s)))


@dataclass
class SupportBuilder:
    """Accumulates (vector, probability) atoms for a FiniteSupport spec."""

    d: int
    atoms: List[Atom] = field(default_factory=list)

    def add(self, vector, probability: float) -> "SupportBuilder":
        self.atoms.append((tuple(float(v) for v in vector), float(probability)))
        return self

    def build(self, sigma: float = 1.0) -> DistributionSpec:
        return DistributionSpec(Family.FINITE_SUPPORT, self.d, sigma, tuple(self.atoms))
