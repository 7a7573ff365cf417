"""Bounded-norm families: uniform on the radius-sigma sphere or ball."""
from __future__ import annotations

import numpy as np

from ..base.distribution import VectorDistribution
from .spec import NsgCertificate, Provenance


def unit_directions(rng: np.random.Generator, count: int, d: int) -> np.ndarray:
    """Uniform points on the unit sphere S^{d-1} via normalized Gaussians."""
    g = rng.standard_normal((count, d))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    # Exact zeros have probability zero; guard anyway so we never divide by 0.
    norms[norms == 0.0] = 1.0
    return g / norms


class BoundedSphereSampler(VectorDistribution):
    """Uniform on the sphere of radius sigma; ||X|| = sigma exactly."""

    def draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        if count == 0:
            return self._empty()
        return self.sigma * unit_directions(rng, count, self.d)

    def certificate(self) -> NsgCertificate:
        return NsgCertificate(self.sigma, 1.0, Provenance.BOUNDED_CASE)


class BoundedBallSampler(VectorDistribution):
    """Uniform in the ball of radius sigma (radius sigma * u^(1/d))."""

    def draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        if count == 0:
            return self._empty()
        directions = unit_directions(rng, count, self.d)
        u = rng.random(count)
        radii = self.sigma * u ** (1.0 / self.d)
        return directions * radii[:, None]

    def certificate(self) -> NsgCertificate:
        return NsgCertificate(self.sigma, 1.0, Provenance.BOUNDED_CASE)
