"""Shared pytest fixtures for the nsgkit test suite."""
from pathlib import Path

import pytest

from nsgkit.config import SEED_ENV
from nsgkit.distributions import DistributionSpec, Family, finite_support_rademacher

PROJECT_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(autouse=True)
def _no_seed_env(monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------

@pytest.fixture
def project_root():
    return PROJECT_ROOT


@pytest.fixture
def scenario_path():
    """Absolute path of a shipped scenario by stem."""
    def _path(name: str) -> str:
        return str(PROJECT_ROOT / "scenarios" / f"{name}.json")
    return _path


# ---------------------------------------------------------------------------
# Distributions
# ---------------------------------------------------------------------------

@pytest.fixture
def rademacher_1d():
    return finite_support_rademacher(1)


@pytest.fixture
def sphere_4d():
    return DistributionSpec(Family.BOUNDED_SPHERE, 4, 1.0)
