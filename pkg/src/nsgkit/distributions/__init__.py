"""Seedable random-vector families with analytic nSG certificates."""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ..errors import ValidationError
from .finite_support import finite_support_rademacher, symmetric_support
from .seeding import SeedStream
from .spec import DistributionSpec, Family, NsgCertificate, Provenance, SupportBuilder

if TYPE_CHECKING:
    from ..base.distribution import VectorDistribution


def sampler_for(spec: DistributionSpec) -> "VectorDistribution":
    from ..factory import SamplerFactory
    return SamplerFactory.create_sampler(spec)


def draw(spec: DistributionSpec, rng: np.random.Generator, count: int) -> np.ndarray:
    """Draw ``count`` vectors of ``spec`` from an existing generator."""
    if count < 0:
        raise ValidationError(f"count must be nonnegative, got {count!r}")
    return sampler_for(spec).draw(rng, count)


def sample(spec: DistributionSpec, stream: SeedStream, count: int) -> np.ndarray:
    """Draw ``count`` vectors of ``spec`` from the stream; returns a (count, d) array.

    Equal (spec, stream, count) give bit-identical output.
    """
    if count < 1:
        raise ValidationError(f"count must be a positive integer, got {count!r}")
    return draw(spec, stream.generator(), count)


def certificate(spec: DistributionSpec) -> NsgCertificate:
    """The analytic nSG certificate of ``spec``'s family."""
    return sampler_for(spec).certificate()


def subgaussian_sigma(spec: DistributionSpec) -> float:
    """Vector-subGaussian parameter: sigma/sqrt(d) for the isotropic family.

    The families sit in the chain subGaussian(sigma/sqrt(d)) within
    nSG(O(sigma)) within subGaussian(sigma).
    """
    return sampler_for(spec).subgaussian_sigma()


__all__ = [
    'DistributionSpec',
    'Family',
    'NsgCertificate',
    'Provenance',
    'SeedStream',
    'SupportBuilder',
    'certificate',
    'draw',
    'finite_support_rademacher',
    'sample',
    'sampler_for',
    'subgaussian_sigma',
    'symmetric_support',
]
