"""Sampler interface for the certified random-vector families."""
from __future__ import annotations

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from ..distributions.spec import DistributionSpec, NsgCertificate


class VectorDistribution(ABC):
    """
    Base class for random-vector samplers.

    Each family (bounded sphere, bounded ball, axis subGaussian, isotropic
    Gaussian, finite support) implements its own sampler.  Samplers hold no
    mutable state beyond their spec, so one instance may be shared across
    threads as long as every thread draws from its own generator.
    """

    def __init__(self, spec: DistributionSpec):
        """
        Initialize the sampler.

        Args:
            spec: Validated distribution spec for this family
        """
        self.spec = spec

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def sigma(self) -> float:
        return self.spec.sigma

    @abstractmethod
    def draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """
        Draw ``count`` samples.

        Args:
            rng: The generator to consume
            count: Number of vectors to draw

        Returns:
            Array of shape (count, d)
        """

    @abstractmethod
    def certificate(self) -> NsgCertificate:
        """
        Return the analytic nSG certificate for this family.
        """

    def subgaussian_sigma(self) -> float:
        """Vector-subGaussian parameter of the family.

        The default covers the bounded families: for ||X|| <= sigma and a unit
        v, <v, X> lies in [-sigma, sigma], so Hoeffding's lemma gives sigma.
        """
        return self.sigma

    def _empty(self) -> np.ndarray:
        return np.zeros((0, self.d))
