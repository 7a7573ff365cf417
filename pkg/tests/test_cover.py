"""Unit tests for nsgkit.cover (greedy 1/2-covers and norm recovery)."""
import logging
import math

import numpy as np
import pytest

from nsgkit.cover import (
    MAX_COVER_DIM,
    SphereCover,
    build_half_cover,
    covering_radius,
    norm_via_cover,
    norms_via_cover,
    subgaussian_to_nsg,
    union_tail_bound,
)
from nsgkit.distributions import SeedStream
from nsgkit.distributions.bounded import unit_directions
from nsgkit.errors import DomainError, ResourceError, ValidationError


@pytest.fixture(scope="module")
def cover_2d():
    return build_half_cover(2, SeedStream(4, 2), max_rejections=20_000, certify_directions=20_000)


@pytest.fixture(scope="module")
def cover_3d():
    return build_half_cover(3, SeedStream(4, 3), max_rejections=100_000, certify_directions=50_000)


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

class TestBuildHalfCover:
    def test_points_are_separated(self, cover_3d):
        assert cover_3d.min_separation() >= 0.5 - 1e-12

    def test_size_within_volumetric_bound(self, cover_2d, cover_3d):
        assert 1 <= cover_2d.size <= 5**2
        assert 1 <= cover_3d.size <= 5**3

    def test_fresh_directions_are_covered(self, cover_3d):
        directions = unit_directions(np.random.default_rng(99), 10_000, 3)
        assert covering_radius(cover_3d, directions) <= 0.5

    def test_circle_needs_at_least_seven_points(self, cover_2d):
        # each point covers an arc of angle 4 arcsin(1/4), just under 2 pi / 6
        assert cover_2d.size >= 7
        assert cover_2d.size >= math.ceil(math.pi / (2.0 * math.asin(0.25)))
        directions = unit_directions(np.random.default_rng(7), 10_000, 2)
        assert covering_radius(cover_2d, directions) <= 0.5

    def test_deterministic_for_equal_stream(self):
        a = build_half_cover(2, SeedStream(1), max_rejections=500, certify_directions=500)
        b = build_half_cover(2, SeedStream(1), max_rejections=500, certify_directions=500)
        assert np.array_equal(a.points, b.points)

    def test_one_dimension_is_two_points(self):
        cover = build_half_cover(1, SeedStream(0), max_rejections=100, certify_directions=100)
        assert sorted(cover.points[:, 0].tolist()) == pytest.approx([-1.0, 1.0])

    def test_dimension_cap(self):
        with pytest.raises(ResourceError):
            build_half_cover(MAX_COVER_DIM + 1, SeedStream(0))

    def test_logs_summary(self, caplog):
        with caplog.at_level(logging.INFO, logger="nsgkit.cover"):
            build_half_cover(2, SeedStream(5), max_rejections=200, certify_directions=200)
        assert any("built 1/2-cover" in r.message for r in caplog.records)


# ---------------------------------------------------------------------------
# SphereCover
# ---------------------------------------------------------------------------

class TestSphereCover:
    def test_non_unit_points_rejected(self):
        with pytest.raises(ValidationError):
            SphereCover(2, np.array([[1.0, 1.0]]))

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            SphereCover(3, np.array([[1.0, 0.0]]))

    def test_json_round_trip(self, cover_2d):
        restored = SphereCover.from_json(cover_2d.to_json())
        assert restored.d == 2
        assert np.allclose(restored.points, cover_2d.points)

    def test_malformed_json_rejected(self):
        with pytest.raises(ValidationError):
            SphereCover.from_dict({"points": [[1.0]]})

    def test_single_point_separation_is_inf(self):
        assert SphereCover(2, np.array([[1.0, 0.0]])).min_separation() == math.inf


# ---------------------------------------------------------------------------
# Norm recovery and union bound
# ---------------------------------------------------------------------------

class TestNormViaCover:
    def test_within_factor_two(self, cover_3d):
        xs = np.random.default_rng(7).normal(size=(1000, 3))
        est = norms_via_cover(xs, cover_3d)
        true = np.linalg.norm(xs, axis=1)
        assert np.all(est >= true - 1e-12)
        assert np.all(est <= 2.0 * true + 1e-12)

    def test_single_vector_matches_batch(self, cover_2d):
        x = np.array([0.3, -1.7])
        assert norm_via_cover(x, cover_2d) == pytest.approx(norms_via_cover(x[None, :], cover_2d)[0])

    def test_dimension_mismatch(self, cover_2d):
        with pytest.raises(ValidationError):
            norm_via_cover([1.0, 2.0, 3.0], cover_2d)


class TestUnionTailBound:
    def test_value(self):
        assert union_tail_bound(2, 1.0, 4.0) == pytest.approx(16.0 * math.exp(-4.0))
        assert union_tail_bound(2, 1.0, 4.0) == pytest.approx(0.29305, abs=1e-5)

    def test_volumetric_variant(self):
        assert union_tail_bound(2, 1.0, 4.0, cover_size_bound=5.0) == pytest.approx(25.0 * math.exp(-4.0))

    def test_negative_t_rejected(self):
        with pytest.raises(DomainError):
            union_tail_bound(2, 1.0, -1.0)

    def test_subgaussian_to_nsg(self):
        assert subgaussian_to_nsg(1.0) == pytest.approx(2.0 * math.sqrt(2.0))
