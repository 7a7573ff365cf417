"""RunConfig contract: the public input model for verification runs.

A scenario file is a JSON object parsed into ``RunConfig``.  Each per-suite
options field set to ``None`` means "use that suite's defaults".  Unknown
fields are rejected everywhere, and a RunConfig round-trips through JSON
unchanged.

Callers (the CLI and tests) build a RunConfig and pass it to
``runner.run_scenario()``.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

import pydantic
from pydantic import BaseModel, ConfigDict, Field

from .distributions import DistributionSpec
from .errors import ValidationError
from .martingale import AdaptiveRule

SUITE_NAMES: Tuple[str, ...] = (
    "tail", "mgf", "lieb", "peeling", "hoeffding", "adaptive", "equivalence", "cover",
)


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SpecModel(_Strict):
    """JSON form of a DistributionSpec."""

    family: str
    d: int = Field(ge=1)
    sigma: float = Field(gt=0)
    support: Optional[List[Tuple[List[float], float]]] = None

    def to_spec(self) -> DistributionSpec:
        return DistributionSpec.from_dict(self.model_dump(exclude_none=True))

    @classmethod
    def of(cls, spec: DistributionSpec) -> "SpecModel":
        return cls.model_validate(spec.to_dict())


class RuleModel(_Strict):
    """JSON form of an AdaptiveRule."""

    kind: Literal["Constant", "DoubleOnThreshold", "HistoryNormScaled"] = "Constant"
    sigma: Optional[float] = None
    base: Optional[float] = None
    thresholds: Optional[List[float]] = None
    floor: Optional[float] = None
    cap: Optional[float] = None
    gain: Optional[float] = None

    def to_rule(self) -> AdaptiveRule:
        return AdaptiveRule.from_dict(self.model_dump(exclude_none=True))


def _sphere(d: int = 1) -> SpecModel:
    return SpecModel(family="BoundedSphere", d=d, sigma=1.0)


class TailOptions(_Strict):
    """Certificate soundness: tail frequencies against 2 exp(-t^2 / (2 (m sigma)^2))."""

    families: List[SpecModel] = Field(default_factory=lambda: [
        SpecModel(family="BoundedSphere", d=4, sigma=1.0),
        SpecModel(family="BoundedBall", d=4, sigma=1.0),
        SpecModel(family="AxisSubGaussian", d=4, sigma=1.0),
        SpecModel(family="IsotropicGaussian", d=2, sigma=1.0),
        SpecModel(family="IsotropicGaussian", d=4, sigma=1.0),
        SpecModel(family="IsotropicGaussian", d=8, sigma=1.0),
    ])
    t_points: int = Field(default=20, ge=1)
    certificate_scale: float = Field(default=1.0, gt=0)


class MgfOptions(_Strict):
    families: List[SpecModel] = Field(default_factory=lambda: [
        SpecModel(family="IsotropicGaussian", d=4, sigma=1.0),
        SpecModel(family="BoundedSphere", d=4, sigma=1.0),
    ])
    exact: List[SpecModel] = Field(default_factory=list)
    theta_grid: List[float] = Field(default_factory=lambda: [-1.0, -0.5, -0.25, 0.25, 0.5, 1.0])
    max_constant: float = Field(default=4.0, gt=0)


class LiebOptions(_Strict):
    instances: int = Field(default=200, ge=1)
    max_dim: int = Field(default=4, ge=1)
    max_atoms: int = Field(default=3, ge=1)
    scale: float = Field(default=1.0, gt=0)
    tolerance: float = Field(default=1e-9, ge=0)


class PeelingOptions(_Strict):
    steps: int = Field(default=3, ge=0)
    dims: List[int] = Field(default_factory=lambda: [1, 2, 3])
    max_atoms: int = Field(default=4, ge=2)
    instances: int = Field(default=5, ge=1)
    thetas: List[float] = Field(default_factory=lambda: [0.5, 1.0])
    rule: Optional[RuleModel] = None
    tolerance: float = Field(default=1e-9, ge=0)


class HoeffdingOptions(_Strict):
    base: SpecModel = Field(default_factory=_sphere)
    d_values: List[int] = Field(default_factory=lambda: [2, 8, 32])
    n_values: List[int] = Field(default_factory=lambda: [64, 256, 1024])
    delta: float = Field(default=0.01, gt=0, lt=1)
    c: float = Field(default=2.0, gt=0)
    max_dimension_ratio: float = Field(default=1.5, gt=0)


class AdaptiveOptions(_Strict):
    base: SpecModel = Field(default_factory=lambda: _sphere(2))
    rule: RuleModel = Field(default_factory=lambda: RuleModel(
        kind="DoubleOnThreshold", base=1.0, thresholds=[4.0, 8.0, 16.0]))
    n: int = Field(default=64, ge=0)
    b: float = Field(default=1.0, gt=0)
    B: float = Field(default=1024.0, gt=0)
    delta: float = Field(default=0.01, gt=0, lt=1)
    c: float = Field(default=2.0, gt=0)


class EquivalenceOptions(_Strict):
    families: List[str] = Field(default_factory=lambda: ["BoundedSphere", "IsotropicGaussian"])
    d_values: List[int] = Field(default_factory=lambda: [1, 4, 16])
    sigma: float = Field(default=1.0, gt=0)
    window: Tuple[float, float] = (0.25, 4.0)


class CoverOptions(_Strict):
    dims: List[int] = Field(default_factory=lambda: [2, 3])
    test_directions: int = Field(default=10_000, ge=1)
    norm_tests: int = Field(default=1_000, ge=1)
    max_rejections: int = Field(default=100_000, ge=1)


class ConstantOptions(_Strict):
    """Grid for estimate-constant."""

    target: Literal["MainLemma", "Hoeffding", "Adaptive", "MgfLemma", "IsotropicExample"] = "Hoeffding"
    base: SpecModel = Field(default_factory=_sphere)
    rule: RuleModel = Field(default_factory=lambda: RuleModel(kind="Constant", sigma=1.0))
    n_values: List[int] = Field(default_factory=lambda: [64])
    d_values: List[int] = Field(default_factory=list)
    deltas: List[float] = Field(default_factory=lambda: [0.01])
    theta: Optional[float] = Field(default=None, gt=0)
    b: float = Field(default=1.0, gt=0)
    B: float = Field(default=1024.0, gt=0)


class RunConfig(_Strict):
    """Complete input contract for one nsgkit run."""

    name: str = ""
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)
    trials: int = Field(default=100_000, ge=1)
    alpha: float = Field(default=1e-3, gt=0, lt=1)
    threads: Optional[int] = Field(default=None, ge=1)
    format: Literal["json", "csv"] = "json"
    out: Optional[str] = None
    strict: bool = False
    suites: List[str] = Field(default_factory=list)
    # --- per-suite options; None means defaults ---
    tail: Optional[TailOptions] = None
    mgf: Optional[MgfOptions] = None
    lieb: Optional[LiebOptions] = None
    peeling: Optional[PeelingOptions] = None
    hoeffding: Optional[HoeffdingOptions] = None
    adaptive: Optional[AdaptiveOptions] = None
    equivalence: Optional[EquivalenceOptions] = None
    cover: Optional[CoverOptions] = None
    constant: Optional[ConstantOptions] = None

    def options_for(self, suite: str) -> BaseModel:
        """The options model for ``suite``, falling back to its defaults."""
        current = getattr(self, suite)
        if current is not None:
            return current
        defaults = {
            "tail": TailOptions, "mgf": MgfOptions, "lieb": LiebOptions,
            "peeling": PeelingOptions, "hoeffding": HoeffdingOptions,
            "adaptive": AdaptiveOptions, "equivalence": EquivalenceOptions,
            "cover": CoverOptions, "constant": ConstantOptions,
        }
        return defaults[suite]()

    def with_overrides(self, **overrides) -> "RunConfig":
        """Apply non-None overrides (e.g. from flags) with full validation."""
        merged = self.model_dump()
        merged.update({k: v for k, v in overrides.items() if v is not None})
        return parse_run_config(merged)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True)


def parse_run_config(raw: Union[dict, str]) -> RunConfig:
    """Validate a dict or JSON text into a RunConfig, raising nsgkit's ValidationError."""
    try:
        if isinstance(raw, str):
            config = RunConfig.model_validate_json(raw)
        else:
            config = RunConfig.model_validate(raw)
    except pydantic.ValidationError as exc:
        raise ValidationError(f"invalid scenario: {exc}") from exc
    unknown = [s for s in config.suites if s not in SUITE_NAMES]
    if unknown:
        raise ValidationError(f"unknown suite(s) {unknown}; choose from {list(SUITE_NAMES)}")
    return config


def load_scenario(path: Union[str, Path]) -> RunConfig:
    """Read a scenario JSON file.  A missing file raises FileNotFoundError."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Scenario file not found: {path}")
    text = path.read_text(encoding="utf-8")
    try:
        json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc
    config = parse_run_config(text)
    if not config.name:
        config = config.model_copy(update={"name": path.stem})
    return config
