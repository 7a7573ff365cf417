"""Finite-support families, used wherever an exact oracle is needed."""
from __future__ import annotations

import numpy as np

from ..base.distribution import VectorDistribution
from .spec import DistributionSpec, Family, NsgCertificate, Provenance, SupportBuilder


class FiniteSupportSampler(VectorDistribution):
    """Draws atoms of a zero-mean finite support with their probabilities."""

    def __init__(self, spec: DistributionSpec):
        super().__init__(spec)
        self._atoms = spec.atoms_array()
        self._probs = spec.probs_array()

    @property
    def atoms(self) -> np.ndarray:
        return self._atoms

    @property
    def probs(self) -> np.ndarray:
        return self._probs

    def max_atom_norm(self) -> float:
        return float(np.max(np.linalg.norm(self._atoms, axis=1)))

    def draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        if count == 0:
            return self._empty()
        idx = rng.choice(len(self._probs), size=count, p=self._probs / self._probs.sum())
        return self._atoms[idx].copy()

    def certificate(self) -> NsgCertificate:
        radius = self.max_atom_norm()
        # A support made only of the zero vector is nSG(s) for every s > 0.
        return NsgCertificate(radius if radius > 0 else self.sigma, 1.0, Provenance.BOUNDED_CASE)

    def subgaussian_sigma(self) -> float:
        return self.max_atom_norm()


def finite_support_rademacher(d: int, sigma: float = 1.0) -> DistributionSpec:
    """Uniform over the 2d axis atoms {+-sigma e_k}, each with probability 1/(2d)."""
    builder = SupportBuilder(d)
    p = 1.0 / (2 * d)
    for k in range(d):
        e = np.zeros(d)
        e[k] = sigma
        builder.add(e, p).add(-e, p)
    return builder.build(sigma)


def symmetric_support(vectors, probabilities=None) -> DistributionSpec:
    """Zero-mean support {+-v_j} with P(v_j) = P(-v_j) = probabilities[j] / 2."""
    vecs = np.atleast_2d(np.asarray(vectors, dtype=float))
    weights = (
        np.full(len(vecs), 1.0 / len(vecs))
        if probabilities is None
        else np.asarray(probabilities, dtype=float)
    )
    builder = SupportBuilder(vecs.shape[1])
    for v, w in zip(vecs, weights):
        builder.add(v, w / 2.0).add(-v, w / 2.0)
    radius = float(np.max(np.linalg.norm(vecs, axis=1)))
    return builder.build(radius if radius > 0 else 1.0)


def is_finite(spec: DistributionSpec) -> bool:
    return spec.family is Family.FINITE_SUPPORT
