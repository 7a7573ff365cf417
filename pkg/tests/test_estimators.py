"""Unit tests for nsgkit.verify.estimators (equivalent nSG parameter estimates)."""
import math

import numpy as np
import pytest

from nsgkit.distributions import (
    DistributionSpec,
    Family,
    NsgCertificate,
    finite_support_rademacher,
    symmetric_support,
)
from nsgkit.errors import DomainError, UsageError, ValidationError
from nsgkit.verify import (
    EquivalenceReport,
    TrialConfig,
    certificate_tail_check,
    default_t_grid,
    equivalence_from_norms,
    equivalence_report,
    moment_profile,
    moment_sigma,
    normsq_subexp_check,
    observed_t_grid,
    projection_check,
    projection_constant,
    subexp_constant,
    super_exp_sigma,
    symmetric_grid,
    tail_sigma,
    tail_sigma_from_bounds,
)

SPHERE_4D = DistributionSpec(Family.BOUNDED_SPHERE, 4, 1.0)


# ---------------------------------------------------------------------------
# Moment and super-exponential forms
# ---------------------------------------------------------------------------

class TestMoments:
    def test_profile_of_unit_norms(self):
        profile = moment_profile(np.ones(10), 4)
        assert [p for p, _ in profile] == [1, 2, 3, 4]
        assert [v for _, v in profile] == pytest.approx([1 / math.sqrt(p) for p in range(1, 5)])

    def test_moment_sigma_weighted(self):
        norms = np.array([0.0, 2.0])
        assert moment_sigma(norms, 2, probs=[0.5, 0.5]) == pytest.approx(1.0)

    @pytest.mark.parametrize("p_max", [0, 21])
    def test_p_max_range(self, p_max):
        with pytest.raises(ValidationError):
            moment_profile(np.ones(3), p_max)

    def test_empty_sample(self):
        with pytest.raises(UsageError):
            moment_sigma([], 3)


class TestSuperExp:
    def test_constant_norm(self):
        assert super_exp_sigma(np.full(50, 2.0)).sigma == pytest.approx(2.0, rel=1e-9)

    def test_defining_equation_holds(self):
        norms = np.array([0.5, 1.0, 1.5])
        sigma = super_exp_sigma(norms).sigma
        assert np.mean(np.exp(norms**2 / sigma**2)) == pytest.approx(math.e, rel=1e-9)

    def test_all_zero_is_degenerate(self):
        est = super_exp_sigma(np.zeros(5))
        assert est.degenerate
        assert est.sigma == 0.0


# ---------------------------------------------------------------------------
# Tail form
# ---------------------------------------------------------------------------

class TestTailSigma:
    def test_from_bounds_inverts_certificate(self):
        t = 1.5
        ub = 2.0 * math.exp(-t * t / 2.0)
        assert tail_sigma_from_bounds([t], [ub]) == pytest.approx(1.0)

    def test_vacuous_points_skipped(self):
        assert tail_sigma_from_bounds([1.0, 2.0], [2.0, 2.0 * math.exp(-2.0)]) == pytest.approx(1.0)

    def test_all_vacuous(self):
        with pytest.raises(DomainError):
            tail_sigma_from_bounds([1.0], [2.0])

    def test_nonpositive_threshold(self):
        with pytest.raises(ValidationError):
            tail_sigma_from_bounds([0.0], [0.5])

    def test_exact_two_point(self):
        # ||X|| = 1 surely: Pr(||X|| >= 1) = 1 and 0 beyond
        value = tail_sigma(np.array([1.0]), [1.0, 2.0], probs=[1.0])
        assert value == pytest.approx(1.0 / math.sqrt(2.0 * math.log(2.0)))

    def test_empty_grid(self):
        with pytest.raises(ValidationError):
            tail_sigma(np.ones(3), [])


class TestCertificateTailCheck:
    def test_default_grid(self):
        grid = default_t_grid(SPHERE_4D)
        assert len(grid) == 20
        assert grid[0] == pytest.approx(0.15)
        assert grid[-1] == pytest.approx(3.0)

    def test_sphere_certificate_holds(self):
        checks = certificate_tail_check(SPHERE_4D, default_t_grid(SPHERE_4D), TrialConfig(trials=5000, seed=1))
        assert all(c.passed for c in checks)

    def test_halved_sigma_is_detected(self):
        wrong = NsgCertificate(0.5, 1.0)
        checks = certificate_tail_check(SPHERE_4D, default_t_grid(SPHERE_4D), TrialConfig(trials=2000), wrong)
        assert not all(c.passed for c in checks)
        assert min(c.margin for c in checks) < 0

    def test_finite_support_is_exact(self):
        spec = finite_support_rademacher(3)
        checks = certificate_tail_check(spec, [0.5, 1.0, 1.5], TrialConfig(trials=10))
        assert [c.estimate.point for c in checks] == pytest.approx([1.0, 1.0, 0.0])
        assert checks[0].estimate.trials == 0


# ---------------------------------------------------------------------------
# Projections and squared norm
# ---------------------------------------------------------------------------

class TestProjection:
    def test_rademacher_at_theta_one(self):
        c = projection_constant(np.array([1.0, -1.0]), [1.0], 1.0, probs=[0.5, 0.5])
        assert c == pytest.approx(math.sqrt(2.0 * math.log(math.cosh(1.0))))
        assert c == pytest.approx(0.93143, abs=1e-5)

    def test_projection_check_exact(self):
        c = projection_check(finite_support_rademacher(1), [1.0], [1.0], TrialConfig(trials=10))
        assert c == pytest.approx(0.93143, abs=1e-5)

    def test_rademacher_below_one_and_rising_to_one(self):
        spec = finite_support_rademacher(1)
        small = projection_check(spec, [1.0], [0.01], TrialConfig(trials=10))
        large = projection_check(spec, [1.0], [2.0], TrialConfig(trials=10))
        assert large < small < 1.0
        assert small == pytest.approx(1.0, abs=1e-4)

    def test_sampled_sphere_projection_bounded(self):
        c = projection_check(SPHERE_4D, [1.0, 0.0, 0.0, 0.0], symmetric_grid([0.5, 1.0]),
                             TrialConfig(trials=20_000, seed=3))
        assert 0.0 < c <= 1.0

    def test_non_unit_direction_rejected(self):
        with pytest.raises(ValidationError):
            projection_check(SPHERE_4D, [1.0, 1.0, 0.0, 0.0], [1.0], TrialConfig(trials=10))

    def test_zero_theta_rejected(self):
        with pytest.raises(ValidationError):
            projection_constant(np.ones(2), [0.0], 1.0)

    def test_symmetric_grid(self):
        assert symmetric_grid([0.5, 1.0, 0.5]) == [-1.0, -0.5, 0.5, 1.0]


class TestSubExp:
    def test_constant_norm_has_zero_constant(self):
        est = normsq_subexp_check(finite_support_rademacher(2), [-0.25, 0.25], TrialConfig(trials=10))
        assert est.c_hat == 0.0
        assert est.converged

    def test_two_point_fixed_point(self):
        norms = np.array([0.0, math.sqrt(2.0)])
        est = subexp_constant(norms, [-0.4, -0.2, 0.2, 0.4], 1.0, probs=[0.5, 0.5])
        assert est.converged
        assert est.c_hat == pytest.approx(math.sqrt(math.log(math.cosh(0.2))) / 0.2)
        assert est.rounds == 2

    def test_lambda_outside_admissible_range(self):
        with pytest.raises(ValidationError):
            subexp_constant(np.ones(3), [0.5], 1.0)

    def test_sigma_must_be_positive(self):
        with pytest.raises(DomainError):
            subexp_constant(np.ones(3), [0.1], 0.0)


# ---------------------------------------------------------------------------
# Equivalence
# ---------------------------------------------------------------------------

class TestEquivalence:
    def test_ratios_and_margin(self):
        report = EquivalenceReport(1.0, 2.0, 1.0)
        assert report.ratios == {"tail/moment": 0.5, "tail/mgf": 1.0, "moment/mgf": 2.0}
        assert report.within_window
        assert report.margin() == pytest.approx(math.log(2.0))

    def test_outside_window(self):
        report = EquivalenceReport(1.0, 10.0, 1.0)
        assert not report.within_window
        assert report.margin() < 0

    def test_sphere_within_window(self):
        report = equivalence_report(SPHERE_4D, TrialConfig(trials=5000, seed=2))
        assert report.within_window
        assert report.sigma_moment == pytest.approx(1.0)
        assert report.sigma_mgf == pytest.approx(1.0, rel=1e-9)

    def test_observed_grid_stops_at_largest_norm(self):
        assert observed_t_grid([0.5, 1.0, 1.5, 2.0], np.array([0.2, 1.2])) == [0.5, 1.0]
        assert observed_t_grid([0.5, 1.0], np.zeros(3)) == [0.5]
        with pytest.raises(ValidationError):
            observed_t_grid([], np.ones(2))

    def test_sphere_tail_sigma_ignores_unreached_thresholds(self):
        report = equivalence_report(SPHERE_4D, TrialConfig(trials=2000, seed=3))
        # the largest reached threshold is 0.9, where every sample hits
        assert report.sigma_tail == pytest.approx(0.9 / math.sqrt(2.0 * math.log(2.0)))

    def test_from_exact_norms(self):
        spec = symmetric_support([[1.0, 0.0], [0.0, 2.0]])
        norms = np.linalg.norm(spec.atoms_array(), axis=1)
        report = equivalence_from_norms(norms, [0.5, 1.0, 1.5, 2.5], 1e-3, probs=spec.probs_array())
        assert report.to_dict()["within_window"] is True
