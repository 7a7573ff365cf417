"""Factory for creating distribution specs and their samplers."""
from typing import Dict, Sequence, Type

from .base.distribution import VectorDistribution
from .distributions.bounded import BoundedBallSampler, BoundedSphereSampler
from .distributions.finite_support import FiniteSupportSampler, finite_support_rademacher
from .distributions.gaussian import AxisSubGaussianSampler, IsotropicGaussianSampler
from .distributions.spec import DistributionSpec, Family


class SamplerFactory:
    """
    Factory for creating samplers of different families.

    Makes it easy to build a spec by family name and get its sampler without
    importing the per-family classes directly.
    """

    _SAMPLERS: Dict[Family, Type[VectorDistribution]] = {
        Family.BOUNDED_SPHERE: BoundedSphereSampler,
        Family.BOUNDED_BALL: BoundedBallSampler,
        Family.AXIS_SUBGAUSSIAN: AxisSubGaussianSampler,
        Family.ISOTROPIC_GAUSSIAN: IsotropicGaussianSampler,
        Family.FINITE_SUPPORT: FiniteSupportSampler,
    }

    @staticmethod
    def create_sampler(spec: DistributionSpec) -> VectorDistribution:
        """
        Create the sampler for a validated spec.

        Args:
            spec: Distribution spec

        Returns:
            The VectorDistribution subclass instance for ``spec.family``
        """
        return SamplerFactory._SAMPLERS[spec.family](spec)

    @staticmethod
    def create_bounded_sphere(d: int, sigma: float = 1.0) -> DistributionSpec:
        return DistributionSpec(Family.BOUNDED_SPHERE, d, sigma)

    @staticmethod
    def create_bounded_ball(d: int, sigma: float = 1.0) -> DistributionSpec:
        return DistributionSpec(Family.BOUNDED_BALL, d, sigma)

    @staticmethod
    def create_axis_subgaussian(d: int, sigma: float = 1.0) -> DistributionSpec:
        return DistributionSpec(Family.AXIS_SUBGAUSSIAN, d, sigma)

    @staticmethod
    def create_isotropic_gaussian(d: int, sigma: float = 1.0) -> DistributionSpec:
        return DistributionSpec(Family.ISOTROPIC_GAUSSIAN, d, sigma)

    @staticmethod
    def create_rademacher(d: int, sigma: float = 1.0) -> DistributionSpec:
        """
        Create the axis-Rademacher finite support {+-sigma e_k}.

        Args:
            d: Dimension
            sigma: Atom norm

        Returns:
            FiniteSupport DistributionSpec with 2d equally likely atoms
        """
        return finite_support_rademacher(d, sigma)

    @staticmethod
    def create_from_name(family: str, d: int, sigma: float = 1.0) -> DistributionSpec:
        """
        Create a continuous family spec, or the Rademacher support, by name.

        Args:
            family: A Family value (e.g. "BoundedSphere") or "Rademacher"
            d: Dimension
            sigma: Scale

        Returns:
            DistributionSpec
        """
        if family.lower() == "rademacher":
            return finite_support_rademacher(d, sigma)
        return DistributionSpec(Family(family), d, sigma)

    @staticmethod
    def family_names() -> Sequence[str]:
        return [f.value for f in Family if f is not Family.FINITE_SUPPORT] + ["Rademacher"]
