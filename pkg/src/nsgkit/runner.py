"""run_scenario(): the single engine entry point for verification runs.

External callers (the CLI, tests) build a RunConfig and call run_scenario().
The registry maps each suite name to its Suite class; adding a suite needs
only a new options model on RunConfig and one new entry in _REGISTRY.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Type

from .base.suite import CheckResult, Suite
from .config import NsgkitConfig, load_config_or_default, resolve_seed
from .errors import UsageError
from .scenario import SUITE_NAMES, RunConfig
from .suites import (
    AdaptiveSuite,
    CoverSuite,
    EquivalenceSuite,
    HoeffdingSuite,
    LiebSuite,
    MgfSuite,
    PeelingSuite,
    TailSuite,
)
from .verify import TrialConfig

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Registry: maps suite names to their Suite classes.
# ---------------------------------------------------------------------------

_REGISTRY: Dict[str, Type[Suite]] = {
    "tail":        TailSuite,
    "mgf":         MgfSuite,
    "lieb":        LiebSuite,
    "peeling":     PeelingSuite,
    "hoeffding":   HoeffdingSuite,
    "adaptive":    AdaptiveSuite,
    "equivalence": EquivalenceSuite,
    "cover":       CoverSuite,
}


@dataclass
class SuiteRunResult:
    """Return value of run_scenario()."""

    scenario: str
    seed: int
    trials: int
    alpha: float
    suites: List[Dict[str, Any]] = field(default_factory=list)
    checks: List[CheckResult] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.errors and all(c.passed for c in self.checks)

    @property
    def failed_checks(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]


def trial_config(config: RunConfig, app: NsgkitConfig) -> TrialConfig:
    seed = resolve_seed(None, config.seed, app)
    return TrialConfig(
        trials=config.trials,
        seed=seed,
        alpha=config.alpha,
        threads=config.threads if config.threads is not None else app.run.threads,
        batch_size=app.run.batch_size,
    )


def run_scenario(
    config: RunConfig,
    suites: Optional[Sequence[str]] = None,
    app: Optional[NsgkitConfig] = None,
) -> SuiteRunResult:
    """Run every requested suite of *config*.

    Args:
        config: The scenario; its ``suites`` list is used when *suites* is None.
        suites: Suite names to run, overriding the scenario's list.
        app: Project defaults; loaded from config.yaml when omitted.

    Returns:
        A ``SuiteRunResult`` with every check and any errors.  Per-suite
        exceptions are caught; the suite is added to errors and the loop
        continues.
    """
    app = app or load_config_or_default()
    names = list(suites if suites is not None else config.suites)
    if not names:
        raise UsageError(f"no suites requested; choose from {list(SUITE_NAMES)}")
    unknown = [n for n in names if n not in _REGISTRY]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; choose from {list(SUITE_NAMES)}")

    trial = trial_config(config, app)
    result = SuiteRunResult(config.name, trial.seed, trial.trials, trial.alpha)
    for name in names:
        try:
            suite = _REGISTRY[name](config.options_for(name), trial)
            rendered = suite.render()
        except Exception as exc:
            logger.error("Suite '%s' failed: %s", name, exc)
            result.errors.append(f"{name}: {exc}")
            continue
        result.suites.append(rendered)
        result.checks.extend(suite.run())
        level = logging.INFO if rendered["passed"] else logging.WARNING
        logger.log(level, "Suite %s: %s (min margin %.3g)", name,
                   "pass" if rendered["passed"] else "FAIL", rendered["min_margin"])
    return result
