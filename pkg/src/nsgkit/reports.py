"""Report models and writers.

Reports are pydantic models so the shipped JSON schemas under ``schemas/``
come straight from ``model_json_schema()``.  JSON output is sorted and
indented; tables go out as CSV through pandas.
"""
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict

from .runner import SuiteRunResult
from .scenario import RunConfig
from .verify import ConstantEstimate

logger = logging.getLogger(__name__)


class _Report(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CheckModel(_Report):
    name: str
    passed: bool
    margin: float
    details: Dict[str, Any] = {}


class SuiteModel(_Report):
    suite: str
    title: str
    passed: bool
    min_margin: float
    checks: List[CheckModel]


class VerifyReport(_Report):
    scenario: str
    seed: int
    trials: int
    alpha: float
    passed: bool
    suites: List[SuiteModel]
    errors: List[str] = []

    @classmethod
    def from_result(cls, result: SuiteRunResult) -> "VerifyReport":
        return cls(
            scenario=result.scenario,
            seed=result.seed,
            trials=result.trials,
            alpha=result.alpha,
            passed=result.passed,
            suites=[SuiteModel.model_validate(s) for s in result.suites],
            errors=list(result.errors),
        )


class BoundsReport(_Report):
    kind: str
    bound: Optional[float] = None
    case: Optional[str] = None
    inputs: Dict[str, Any]
    theta: Optional[float] = None
    iota: Optional[float] = None
    grid: Optional[Dict[str, Any]] = None


class ConstantReport(_Report):
    scenario: str
    target: str
    method: str
    grid: List[Dict[str, Any]]
    c_hat: float
    violations: float
    trials: int
    seed: int
    alpha: float
    unstable: bool
    dimension_ratios: Dict[str, float] = {}

    @classmethod
    def from_estimate(cls, scenario: str, est: ConstantEstimate) -> "ConstantReport":
        return cls(
            scenario=scenario,
            target=est.target.value,
            method=est.method.value,
            grid=[c.to_dict() for c in est.cells],
            c_hat=est.c_hat,
            violations=max((c.violations for c in est.cells), default=0.0),
            trials=est.trials,
            seed=est.seed,
            alpha=est.alpha,
            unstable=est.unstable,
            dimension_ratios=est.dimension_ratios(),
        )


SCHEMA_MODELS: Dict[str, Type[BaseModel]] = {
    "run_config": RunConfig,
    "verify_report": VerifyReport,
    "bounds_report": BoundsReport,
    "constant_report": ConstantReport,
}


def render_json(data: Union[BaseModel, Dict[str, Any], List[Any]]) -> str:
    if isinstance(data, BaseModel):
        data = data.model_dump(mode="json")
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def render_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n")


def checks_frame(result: SuiteRunResult) -> pd.DataFrame:
    """One row per check: name, passed, margin."""
    return pd.DataFrame(
        [{"name": c.name, "passed": c.passed, "margin": c.margin} for c in result.checks],
        columns=["name", "passed", "margin"],
    )


def write_output(text: str, out: Union[str, Path]) -> Path:
    """Write *text* to *out*, creating parent directories.  OSError propagates."""
    target = Path(out)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
    logger.info("wrote %s", target)
    return target


def schema_for(name: str) -> Dict[str, Any]:
    return SCHEMA_MODELS[name].model_json_schema()


def write_schemas(directory: Union[str, Path]) -> List[Path]:
    """Regenerate every ``<name>.schema.json`` file under *directory*."""
    paths = []
    for name in SCHEMA_MODELS:
        paths.append(write_output(render_json(schema_for(name)), Path(directory) / f"{name}.schema.json"))
    return paths
