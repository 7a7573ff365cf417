"""Unit tests for nsgkit.dilation (closed-form exponentials, MGFs, trace checks)."""
import math

import numpy as np
import pytest
from scipy import linalg

from nsgkit.dilation import (
    DilationMatrix,
    as_symmetric,
    dilate,
    empirical_mgf,
    exp_dilation,
    lambda_max,
    lieb_check,
    mgf_constant,
    peeling_check,
    peeling_value_from_paths,
    random_lieb_instance,
    scalar_dominates,
    series_domination_gap,
    sym_expm,
    sym_logm,
    trace_exp_dilation,
)
from nsgkit.distributions import (
    DistributionSpec,
    Family,
    SeedStream,
    finite_support_rademacher,
    symmetric_support,
)
from nsgkit.errors import ResourceError, UsageError, ValidationError

COSH_1 = math.cosh(1.0)


# ---------------------------------------------------------------------------
# Dilation structure
# ---------------------------------------------------------------------------

class TestDilate:
    def test_matrix_layout(self):
        y = dilate([1.0, 2.0])
        assert y.dim == 3
        assert np.array_equal(y.matrix, np.array([[0, 1, 2], [1, 0, 0], [2, 0, 0]], dtype=float))

    def test_spectrum_matches_eigh(self):
        y = dilate([3.0, 0.0, 4.0])
        assert np.allclose(y.eigenvalues(), linalg.eigh(y.matrix, eigvals_only=True))
        assert y.radius == pytest.approx(5.0)

    def test_cube_identity(self):
        y = dilate([0.3, -1.2, 0.7])
        m = y.matrix
        assert np.allclose(m @ m @ m, y.radius**2 * m)

    def test_empty_vector_rejected(self):
        with pytest.raises(ValidationError):
            dilate([])

    def test_as_symmetric_rejects_asymmetric(self):
        with pytest.raises(ValidationError):
            as_symmetric([[0.0, 1.0], [0.0, 0.0]])

    def test_as_symmetric_rejects_non_square(self):
        with pytest.raises(ValidationError):
            as_symmetric(np.zeros((2, 3)))


class TestClosedFormExp:
    @pytest.mark.parametrize("x,theta", [
        ([1.0], 1.0),
        ([0.5, -0.25, 2.0], 0.7),
        ([3.0, 4.0], -0.3),
    ])
    def test_matches_generic_expm(self, x, theta):
        expected = linalg.expm(theta * dilate(x).matrix)
        assert np.allclose(exp_dilation(x, theta), expected, rtol=1e-12, atol=1e-12)

    def test_matches_power_series_on_random_vectors(self):
        rng = np.random.default_rng(20)
        for _ in range(500):
            d = int(rng.integers(1, 17))
            x = rng.normal(size=d)
            x *= rng.uniform(0.0, 4.0) / np.linalg.norm(x)
            theta = float(rng.uniform(-2.0, 2.0))
            m = theta * dilate(x).matrix
            term = np.eye(d + 1)
            series = term.copy()
            for k in range(1, 60):
                term = term @ m / k
                series += term
            assert np.allclose(exp_dilation(x, theta), series, rtol=1e-10, atol=1e-10)

    @pytest.mark.parametrize("x,theta", [
        ([1.0], 1.0),
        ([0.5, -0.25, 2.0], -1.5),
        ([3.0, 4.0, 0.0, 1.0], 0.9),
    ])
    def test_determinant_is_one(self, x, theta):
        assert np.linalg.det(exp_dilation(x, theta)) == pytest.approx(1.0, rel=1e-8)

    def test_series_branch_near_zero(self):
        x = [1e-10, 0.0]
        expected = linalg.expm(2.0 * dilate(x).matrix)
        assert np.allclose(exp_dilation(x, 2.0), expected, atol=1e-15)

    def test_zero_vector_gives_identity(self):
        assert np.array_equal(exp_dilation([0.0, 0.0], 5.0), np.eye(3))

    def test_trace_formula(self):
        x, theta = [1.0, 2.0, 2.0], 0.4
        assert trace_exp_dilation(x, theta) == pytest.approx(np.trace(exp_dilation(x, theta)))
        assert trace_exp_dilation(x, theta) == pytest.approx(2.0 * math.cosh(1.2) + 2.0)

    def test_sym_expm_logm_inverse(self):
        m = np.array([[2.0, 0.5], [0.5, 1.0]])
        assert np.allclose(sym_expm(sym_logm(m)), m)

    def test_sym_logm_floors_nonpositive_eigenvalues(self):
        out = sym_logm(np.diag([1.0, 0.0]))
        assert out[1, 1] == pytest.approx(math.log(1e-300))

    def test_lambda_max(self):
        assert lambda_max(np.diag([3.0, -7.0, 1.0])) == pytest.approx(3.0)


# ---------------------------------------------------------------------------
# MGF of the dilation
# ---------------------------------------------------------------------------

class TestEmpiricalMgf:
    def test_rademacher_exact_is_cosh_identity(self):
        spec = finite_support_rademacher(1)
        m = empirical_mgf(spec, 1.0)
        assert np.allclose(m, COSH_1 * np.eye(2))
        assert COSH_1 == pytest.approx(1.54308, abs=1e-5)

    def test_block_form_matches_average_of_exponentials(self):
        pts = np.array([[1.0, 0.0], [0.0, -2.0], [0.5, 0.5]])
        expected = np.mean([exp_dilation(p, 0.8) for p in pts], axis=0)
        assert np.allclose(empirical_mgf(pts, 0.8), expected)

    def test_continuous_family_needs_stream(self):
        spec = DistributionSpec(Family.BOUNDED_SPHERE, 2, 1.0)
        with pytest.raises(UsageError):
            empirical_mgf(spec, 1.0)

    def test_sampled_mgf_is_reproducible(self):
        spec = DistributionSpec(Family.BOUNDED_SPHERE, 2, 1.0)
        a = empirical_mgf(spec, 0.5, stream=SeedStream(3), count=1000)
        b = empirical_mgf(spec, 0.5, stream=SeedStream(3), count=1000)
        assert np.array_equal(a, b)

    def test_scalar_dominates(self):
        assert scalar_dominates(np.eye(2), 1.0)
        assert not scalar_dominates(np.diag([1.0, 1.1]), 1.0)

    def test_scalar_dominates_monotone_in_level(self):
        m = empirical_mgf(symmetric_support([[1.0, 0.0], [0.5, 2.0]]), 0.8)
        levels = np.linspace(0.5, 10.0, 200)
        flags = [scalar_dominates(m, s) for s in levels]
        first = flags.index(True)
        assert all(flags[first:])
        assert not any(flags[:first])

    @pytest.mark.parametrize("theta", [0.3, 1.0, 2.5])
    def test_symmetric_support_has_no_odd_part(self, theta):
        spec = symmetric_support([[1.0, 0.0, 0.0], [0.3, -2.0, 1.0]], [0.25, 0.75])
        assert np.allclose(empirical_mgf(spec, theta), empirical_mgf(spec, -theta), rtol=0, atol=1e-12)

    def test_mirrored_samples_have_no_odd_part(self):
        pts = np.random.default_rng(6).normal(size=(50, 4))
        both = np.vstack([pts, -pts])
        assert np.allclose(empirical_mgf(both, 0.7), empirical_mgf(both, -0.7), rtol=0, atol=1e-12)


class TestMgfConstant:
    def test_rademacher_exact_constant(self):
        c = mgf_constant(finite_support_rademacher(1), [1.0])
        assert c == pytest.approx(math.log(COSH_1))

    def test_constant_reproduces_domination(self):
        spec = symmetric_support([[1.0, 2.0], [0.5, 0.0]])
        grid = [-1.0, -0.3, 0.3, 1.0]
        c = mgf_constant(spec, grid)
        sigma = math.sqrt(5.0)
        for t in grid:
            assert scalar_dominates(empirical_mgf(spec, t), math.exp(c * t * t * sigma * sigma))

    def test_zero_support_gives_zero_constant(self):
        spec = DistributionSpec(Family.FINITE_SUPPORT, 2, 1.0, (((0.0, 0.0), 1.0),))
        assert mgf_constant(spec, [0.5, 1.0]) == 0.0

    def test_raw_samples_need_sigma(self):
        with pytest.raises(UsageError):
            mgf_constant(np.ones((3, 2)), [1.0])

    def test_zero_theta_rejected(self):
        with pytest.raises(ValidationError):
            mgf_constant(finite_support_rademacher(1), [0.0, 1.0])

    def test_empty_grid_rejected(self):
        with pytest.raises(ValidationError):
            mgf_constant(finite_support_rademacher(1), [])

    @pytest.mark.parametrize("p", [1, 2, 3, 5, 10, 40])
    def test_series_domination_gap_nonnegative(self, p):
        assert series_domination_gap(p) >= 0.0


# ---------------------------------------------------------------------------
# Lieb / peeling
# ---------------------------------------------------------------------------

class TestLiebCheck:
    def test_deterministic_atom_is_equality(self):
        a = np.array([[0.3, 0.1], [0.1, -0.2]])
        assert lieb_check(a, [(np.zeros((2, 2)), 1.0)]) == pytest.approx(0.0, abs=1e-12)

    def test_random_instances_nonnegative(self):
        rng = np.random.default_rng(123)
        for _ in range(50):
            a, atoms = random_lieb_instance(rng)
            assert lieb_check(a, atoms) >= -1e-9

    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(ValidationError):
            lieb_check(np.zeros((1, 1)), [(np.zeros((1, 1)), 0.5)])

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            lieb_check(np.zeros((2, 2)), [(np.zeros((3, 3)), 1.0)])

    def test_no_atoms_rejected(self):
        with pytest.raises(ValidationError):
            lieb_check(np.zeros((2, 2)), [])


class TestPeeling:
    def test_single_rademacher_step(self):
        value = peeling_check([finite_support_rademacher(1)], theta=1.0, c=0.5)
        assert value == pytest.approx(2.0 * COSH_1 * math.exp(-0.5))
        assert value <= 2.0

    def test_bounded_by_dimension_plus_one(self):
        steps = [finite_support_rademacher(2)] * 3
        for theta in (0.25, 0.5, 1.0, 2.0):
            assert peeling_check(steps, theta=theta, c=0.5) <= 3.0 + 1e-9

    def test_no_steps_returns_d_plus_one(self):
        assert peeling_check([], theta=1.0, c=1.0, d=4) == 5.0

    def test_no_steps_without_dimension_raises(self):
        with pytest.raises(UsageError):
            peeling_check([], theta=1.0, c=1.0)

    def test_continuous_step_rejected(self):
        with pytest.raises(ValidationError):
            peeling_check([DistributionSpec(Family.BOUNDED_SPHERE, 1, 1.0)], 1.0, 1.0)

    def test_enumeration_guard(self):
        steps = [finite_support_rademacher(1)] * 21
        with pytest.raises(ResourceError):
            peeling_check(steps, 1.0, 1.0)

    def test_value_from_paths_matches_manual_sum(self):
        sums = np.array([[2.0], [0.0], [-2.0]])
        probs = np.array([0.25, 0.5, 0.25])
        value = peeling_value_from_paths(sums, np.full(3, 2.0), probs, theta=1.0, c=0.5)
        expected = math.exp(-1.0) * (0.5 * 2.0 * math.cosh(2.0) + 0.5 * 2.0)
        assert value == pytest.approx(expected)


def test_dilation_matrix_is_frozen():
    y = DilationMatrix(np.array([1.0]))
    with pytest.raises(AttributeError):
        y.x = np.array([2.0])
