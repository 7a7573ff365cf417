"""Unit tests for nsgkit.scenario (RunConfig contract and scenario files)."""
import json
from pathlib import Path

import pytest

from nsgkit.distributions import Family
from nsgkit.errors import ValidationError
from nsgkit.martingale import RuleKind
from nsgkit.scenario import (
    SUITE_NAMES,
    HoeffdingOptions,
    RuleModel,
    RunConfig,
    SpecModel,
    TailOptions,
    load_scenario,
    parse_run_config,
)

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


# ---------------------------------------------------------------------------
# parse_run_config
# ---------------------------------------------------------------------------

class TestParseRunConfig:
    def test_defaults(self):
        cfg = parse_run_config({})
        assert cfg.trials == 100_000
        assert cfg.alpha == 1e-3
        assert cfg.seed is None
        assert cfg.suites == []

    def test_unknown_top_level_field_rejected(self):
        with pytest.raises(ValidationError):
            parse_run_config({"trails": 10})

    def test_unknown_nested_field_rejected(self):
        with pytest.raises(ValidationError):
            parse_run_config({"tail": {"t_points": 5, "colour": "red"}})

    def test_unknown_suite_rejected(self):
        with pytest.raises(ValidationError, match="unknown suite"):
            parse_run_config({"suites": ["tail", "magic"]})

    @pytest.mark.parametrize("raw", [
        {"trials": 0},
        {"alpha": 1.0},
        {"seed": -1},
        {"threads": 0},
        {"format": "xml"},
    ])
    def test_range_checks(self, raw):
        with pytest.raises(ValidationError):
            parse_run_config(raw)

    def test_accepts_json_text(self):
        cfg = parse_run_config('{"name": "x", "suites": ["lieb"]}')
        assert cfg.name == "x"
        assert cfg.suites == ["lieb"]

    def test_json_round_trip(self):
        cfg = parse_run_config({
            "name": "rt", "seed": 12, "suites": ["tail", "hoeffding"],
            "tail": {"t_points": 7}, "hoeffding": {"d_values": [2, 4]},
        })
        assert parse_run_config(cfg.to_json()) == cfg


class TestRunConfig:
    def test_options_for_defaults(self):
        cfg = RunConfig()
        assert cfg.options_for("tail") == TailOptions()
        assert cfg.options_for("hoeffding") == HoeffdingOptions()

    def test_options_for_explicit(self):
        cfg = parse_run_config({"tail": {"t_points": 3}})
        assert cfg.options_for("tail").t_points == 3

    def test_with_overrides_skips_none(self):
        cfg = RunConfig(seed=4, trials=10).with_overrides(seed=None, trials=20)
        assert cfg.seed == 4
        assert cfg.trials == 20

    def test_with_overrides_validates(self):
        with pytest.raises(ValidationError):
            RunConfig().with_overrides(trials=-5)

    def test_every_suite_has_options(self):
        cfg = RunConfig()
        for name in SUITE_NAMES:
            assert cfg.options_for(name) is not None


class TestModels:
    def test_spec_model_to_spec(self):
        spec = SpecModel(family="FiniteSupport", d=1, sigma=1.0,
                         support=[([1.0], 0.5), ([-1.0], 0.5)]).to_spec()
        assert spec.family is Family.FINITE_SUPPORT
        assert SpecModel.of(spec).to_spec() == spec

    def test_rule_model_to_rule(self):
        rule = RuleModel(kind="DoubleOnThreshold", base=1.0, thresholds=[2.0, 4.0]).to_rule()
        assert rule.kind is RuleKind.DOUBLE_ON_THRESHOLD
        assert rule.max_sigma == 4.0


# ---------------------------------------------------------------------------
# Scenario files
# ---------------------------------------------------------------------------

class TestLoadScenario:
    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_scenario(tmp_path / "absent.json")

    def test_bad_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ValidationError):
            load_scenario(path)

    def test_name_defaults_to_stem(self, tmp_path):
        path = tmp_path / "my-run.json"
        path.write_text(json.dumps({"suites": ["lieb"]}), encoding="utf-8")
        assert load_scenario(path).name == "my-run"

    @pytest.mark.parametrize("path", sorted(SCENARIO_DIR.glob("*.json")), ids=lambda p: p.stem)
    def test_shipped_scenarios_load(self, path):
        cfg = load_scenario(path)
        assert cfg.name == path.stem

    @pytest.mark.parametrize("name", ["tail", "hoeffding", "adaptive", "equivalence"])
    def test_monte_carlo_scenarios_run_at_full_size(self, name):
        assert load_scenario(SCENARIO_DIR / f"{name}.json").trials >= 100_000
