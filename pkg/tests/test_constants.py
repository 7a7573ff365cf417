"""Unit tests for nsgkit.verify.constants (measured absolute constants)."""
import math

import numpy as np
import pytest

from nsgkit.distributions import DistributionSpec, Family, finite_support_rademacher
from nsgkit.errors import UnstableQuantileWarning, UsageError, ValidationError
from nsgkit.martingale import AdaptiveRule, enumerate_paths
from nsgkit.verify import (
    ConstantScenario,
    Method,
    Target,
    TrialConfig,
    estimate_constant,
    path_ratios,
    violation_rate,
    weighted_quantile,
)

RADEMACHER_1D = finite_support_rademacher(1)
EXACT_C_HAT = 2.0 / math.sqrt(4.0 * math.log(16.0))


@pytest.fixture
def rademacher_scenario():
    return ConstantScenario(base=RADEMACHER_1D, n_values=(4,), deltas=(0.125,))


@pytest.fixture
def sphere_scenario():
    return ConstantScenario(
        base=DistributionSpec(Family.BOUNDED_SPHERE, 2, 1.0),
        n_values=(16,),
        deltas=(0.05,),
    )


# ---------------------------------------------------------------------------
# Exact enumeration
# ---------------------------------------------------------------------------

class TestExactHoeffding:
    def test_rademacher_c_hat(self, rademacher_scenario):
        est = estimate_constant(Target.HOEFFDING, rademacher_scenario, TrialConfig(trials=10))
        assert est.c_hat == pytest.approx(0.60056, abs=1e-5)
        assert est.c_hat == pytest.approx(EXACT_C_HAT)
        assert est.method is Method.EXACT
        cell = est.cells[0]
        assert cell.trials == 16
        assert cell.violations == pytest.approx(0.125)
        assert not est.unstable

    def test_violation_rate_at_c_hat_is_at_most_delta(self, rademacher_scenario):
        rate = violation_rate(Target.HOEFFDING, rademacher_scenario, 4, 1, 0.125, EXACT_C_HAT + 1e-9,
                              TrialConfig(trials=10))
        assert rate.point <= 0.125

    def test_doubling_c_never_increases_violations(self, rademacher_scenario):
        cfg = TrialConfig(trials=10)
        for c in (0.1, 0.3, 0.5):
            lo = violation_rate(Target.HOEFFDING, rademacher_scenario, 4, 1, 0.125, c, cfg)
            hi = violation_rate(Target.HOEFFDING, rademacher_scenario, 4, 1, 0.125, 2 * c, cfg)
            assert hi.point <= lo.point

    def test_scale_invariance(self):
        scaled = ConstantScenario(base=RADEMACHER_1D.scaled(10.0), rule=AdaptiveRule.constant(10.0),
                                  n_values=(4,), deltas=(0.125,))
        est = estimate_constant(Target.HOEFFDING, scaled, TrialConfig(trials=10))
        assert est.c_hat == pytest.approx(EXACT_C_HAT)

    def test_norm_quantile_non_increasing_in_delta(self):
        _, norms, probs = enumerate_paths(AdaptiveRule.constant(1.0), RADEMACHER_1D, 6).statistics()
        quantiles = [weighted_quantile(norms, probs, 1.0 - dl) for dl in (0.01, 0.05, 0.1, 0.3, 0.6)]
        assert quantiles == sorted(quantiles, reverse=True)

    def test_adaptive_exact_is_clamped_nonnegative(self):
        scenario = ConstantScenario(base=RADEMACHER_1D, rule=AdaptiveRule.double_on_threshold(1.0, [2.0]),
                                    n_values=(6,), deltas=(0.1,), b=1.0, B=64.0)
        est = estimate_constant(Target.ADAPTIVE, scenario, TrialConfig(trials=10))
        assert est.c_hat >= 0.0
        assert est.method is Method.EXACT


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

class TestMonteCarlo:
    def test_reproducible(self, sphere_scenario):
        cfg = TrialConfig(trials=4000, seed=5, batch_size=1000)
        a = estimate_constant(Target.HOEFFDING, sphere_scenario, cfg)
        b = estimate_constant(Target.HOEFFDING, sphere_scenario, cfg)
        assert a.c_hat == b.c_hat
        assert a.method is Method.MONTE_CARLO

    def test_thread_count_does_not_change_estimate(self, sphere_scenario):
        one = estimate_constant(Target.HOEFFDING, sphere_scenario, TrialConfig(trials=4000, seed=6, threads=1))
        many = estimate_constant(Target.HOEFFDING, sphere_scenario, TrialConfig(trials=4000, seed=6, threads=3))
        assert one.c_hat == many.c_hat

    def test_empirical_violations_at_most_delta(self, sphere_scenario):
        est = estimate_constant(Target.HOEFFDING, sphere_scenario, TrialConfig(trials=4000, seed=1))
        assert est.cells[0].violations <= 0.05

    def test_unstable_quantile_warns(self, sphere_scenario, caplog):
        scenario = ConstantScenario(base=sphere_scenario.base, n_values=(4,), deltas=(0.01,))
        with pytest.warns(UnstableQuantileWarning):
            est = estimate_constant(Target.HOEFFDING, scenario, TrialConfig(trials=1000))
        assert est.unstable
        assert any("unstable" in r.message for r in caplog.records)

    def test_dimension_ratio_is_small(self):
        scenario = ConstantScenario(
            base=DistributionSpec(Family.BOUNDED_SPHERE, 2, 1.0),
            n_values=(64,),
            d_values=(2, 32),
            deltas=(0.05,),
        )
        est = estimate_constant(Target.HOEFFDING, scenario, TrialConfig(trials=4000, seed=2))
        ratios = est.dimension_ratios()
        assert list(ratios) == ["n=64,delta=0.05"]
        assert ratios["n=64,delta=0.05"] <= 1.5

    def test_main_lemma_with_fixed_theta(self, sphere_scenario):
        scenario = ConstantScenario(base=sphere_scenario.base, n_values=(16,), deltas=(0.05,), theta=0.5)
        est = estimate_constant(Target.MAIN_LEMMA, scenario, TrialConfig(trials=4000, seed=3))
        assert est.cells[0].theta == 0.5
        assert est.c_hat >= 0.0


# ---------------------------------------------------------------------------
# Other targets
# ---------------------------------------------------------------------------

class TestOtherTargets:
    def test_mgf_lemma_exact(self):
        scenario = ConstantScenario(base=RADEMACHER_1D)
        est = estimate_constant(Target.MGF_LEMMA, scenario, TrialConfig(trials=10))
        assert est.c_hat == pytest.approx(math.log(math.cosh(0.25)) / 0.0625)
        assert est.method is Method.EXACT

    def test_isotropic_example_below_certified_multiplier(self):
        scenario = ConstantScenario(base=DistributionSpec(Family.ISOTROPIC_GAUSSIAN, 4, 1.0))
        est = estimate_constant(Target.ISOTROPIC_EXAMPLE, scenario, TrialConfig(trials=20_000, seed=4))
        assert 0.0 < est.c_hat <= 2.0 * math.sqrt(2.0)

    def test_isotropic_example_needs_isotropic_base(self):
        scenario = ConstantScenario(base=DistributionSpec(Family.BOUNDED_BALL, 4, 1.0))
        with pytest.raises(ValidationError):
            estimate_constant(Target.ISOTROPIC_EXAMPLE, scenario, TrialConfig(trials=100))


# ---------------------------------------------------------------------------
# Per-path ratios and scenario validation
# ---------------------------------------------------------------------------

class TestPathRatios:
    def test_hoeffding_zero_variance_is_minus_inf(self, rademacher_scenario):
        r = path_ratios(Target.HOEFFDING, np.array([0.0, 4.0]), np.array([0.0, 2.0]), 1, 0.125,
                        rademacher_scenario)
        assert r[0] == -np.inf
        assert r[1] == pytest.approx(EXACT_C_HAT)

    def test_main_lemma_ratio_makes_bound_tight(self):
        scenario = ConstantScenario(base=RADEMACHER_1D, theta=0.5)
        lf = math.log(2.0 / 0.1)
        r = path_ratios(Target.MAIN_LEMMA, np.array([4.0]), np.array([6.0]), 1, 0.1, scenario)[0]
        assert r * 0.5 * 4.0 + lf / 0.5 == pytest.approx(6.0)

    def test_adaptive_budget_exceeded_is_minus_inf(self):
        scenario = ConstantScenario(base=RADEMACHER_1D, b=1.0, B=16.0)
        r = path_ratios(Target.ADAPTIVE, np.array([16.0, 4.0]), np.array([100.0, 0.0]), 1, 0.1, scenario)
        assert r[0] == -np.inf
        assert r[1] == pytest.approx(-0.5)

    def test_mgf_target_has_no_path_ratio(self, rademacher_scenario):
        with pytest.raises(UsageError):
            path_ratios(Target.MGF_LEMMA, np.ones(1), np.ones(1), 1, 0.1, rademacher_scenario)

    def test_finite_support_cannot_be_redimensioned(self):
        with pytest.raises(ValidationError):
            ConstantScenario(base=RADEMACHER_1D, d_values=(1, 2))

    @pytest.mark.parametrize("deltas", [(), (0.0,), (1.0,)])
    def test_bad_deltas(self, deltas):
        with pytest.raises(ValidationError):
            ConstantScenario(base=RADEMACHER_1D, deltas=deltas)

    def test_frame_and_dict(self, rademacher_scenario):
        est = estimate_constant(Target.HOEFFDING, rademacher_scenario, TrialConfig(trials=10))
        frame = est.to_frame()
        assert {"n", "d", "delta", "c_hat", "violations", "method"} <= set(frame.columns)
        out = est.to_dict()
        assert out["target"] == "Hoeffding"
        assert out["method"] == "ExactEnumeration"
        assert len(out["cells"]) == 1
