"""Unit tests for nsgkit.factory (SamplerFactory)."""
import pytest

from nsgkit.distributions import Family
from nsgkit.distributions.bounded import BoundedBallSampler, BoundedSphereSampler
from nsgkit.distributions.finite_support import FiniteSupportSampler
from nsgkit.distributions.gaussian import AxisSubGaussianSampler, IsotropicGaussianSampler
from nsgkit.errors import ValidationError
from nsgkit.factory import SamplerFactory


class TestCreateSampler:
    @pytest.mark.parametrize("spec,cls", [
        (SamplerFactory.create_bounded_sphere(3), BoundedSphereSampler),
        (SamplerFactory.create_bounded_ball(3), BoundedBallSampler),
        (SamplerFactory.create_axis_subgaussian(3), AxisSubGaussianSampler),
        (SamplerFactory.create_isotropic_gaussian(3), IsotropicGaussianSampler),
        (SamplerFactory.create_rademacher(3), FiniteSupportSampler),
    ])
    def test_returns_family_sampler(self, spec, cls):
        assert isinstance(SamplerFactory.create_sampler(spec), cls)

    def test_sampler_keeps_spec(self):
        spec = SamplerFactory.create_bounded_ball(4, 2.0)
        sampler = SamplerFactory.create_sampler(spec)
        assert sampler.spec is spec
        assert sampler.d == 4
        assert sampler.sigma == 2.0


class TestCreateRademacher:
    def test_has_two_atoms_per_axis(self):
        spec = SamplerFactory.create_rademacher(3, 0.5)
        assert spec.family is Family.FINITE_SUPPORT
        assert len(spec.support) == 6
        assert spec.probs_array().tolist() == [pytest.approx(1 / 6)] * 6

    def test_atoms_have_norm_sigma(self):
        spec = SamplerFactory.create_rademacher(2, 0.5)
        assert {tuple(a) for a in spec.atoms_array()} == {
            (0.5, 0.0), (-0.5, 0.0), (0.0, 0.5), (0.0, -0.5)
        }


class TestCreateFromName:
    def test_family_value(self):
        spec = SamplerFactory.create_from_name("IsotropicGaussian", 5, 2.0)
        assert spec.family is Family.ISOTROPIC_GAUSSIAN
        assert (spec.d, spec.sigma) == (5, 2.0)

    def test_rademacher_is_case_insensitive(self):
        assert SamplerFactory.create_from_name("rademacher", 2) == SamplerFactory.create_rademacher(2)

    def test_unknown_name_raises(self):
        with pytest.raises(ValueError):
            SamplerFactory.create_from_name("Laplace", 2)

    def test_bad_dimension_raises(self):
        with pytest.raises(ValidationError):
            SamplerFactory.create_from_name("BoundedBall", 0)

    def test_family_names_lists_rademacher_not_finite_support(self):
        names = SamplerFactory.family_names()
        assert "Rademacher" in names
        assert "FiniteSupport" not in names
        assert "BoundedSphere" in names
