"""Gaussian families: a scalar Gaussian on e_1, and isotropic Gaussian vectors."""
from __future__ import annotations

import math

import numpy as np

from ..base.distribution import VectorDistribution
from .spec import NsgCertificate, Provenance

ISOTROPIC_MULTIPLIER = 2.0 * math.sqrt(2.0)


class AxisSubGaussianSampler(VectorDistribution):
    """X = xi * e_1 with xi ~ N(0, sigma^2)."""

    def draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        out = np.zeros((count, self.d))
        if count:
            out[:, 0] = rng.normal(0.0, self.sigma, count)
        return out

    def certificate(self) -> NsgCertificate:
        return NsgCertificate(self.sigma, 1.0, Provenance.AXIS_CASE)


class IsotropicGaussianSampler(VectorDistribution):
    """i.i.d. N(0, sigma^2 / d) coordinates, so E||X||^2 = sigma^2.

    The vector is (sigma/sqrt(d))-subGaussian; the 1/2-cover argument in
    ``nsgkit.cover`` turns that into nSG(2*sqrt(2)*sigma).
    """

    def draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        if count == 0:
            return self._empty()
        return rng.normal(0.0, self.sigma / math.sqrt(self.d), (count, self.d))

    def certificate(self) -> NsgCertificate:
        return NsgCertificate(self.sigma, ISOTROPIC_MULTIPLIER, Provenance.ISOTROPIC_CASE)

    def subgaussian_sigma(self) -> float:
        return self.sigma / math.sqrt(self.d)
