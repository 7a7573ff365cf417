"""Project defaults for nsgkit runs.

Reads config.yaml from the project root and exposes typed dataclasses.
Command-line flags and scenario files override these values.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml
from dotenv import load_dotenv

from .errors import UsageError

# Project root is three levels above this file:
#   src/nsgkit/config.py  →  src/nsgkit/  →  src/  →  project root
_PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent
_CONFIG_PATH = _PROJECT_ROOT / "config.yaml"

SEED_ENV = "NSG_SEED"


@dataclass
class RunSection:
    """Monte Carlo defaults shared by every command."""
    seed: int = 0
    trials: int = 100_000
    alpha: float = 1e-3
    threads: Optional[int] = None
    batch_size: int = 1 << 16


@dataclass
class CoverSection:
    """Greedy 1/2-cover construction settings."""
    max_rejections: int = 100_000
    test_directions: int = 10_000


@dataclass
class OutputSection:
    """Default report format."""
    format: str = "json"


@dataclass
class NsgkitConfig:
    run: RunSection = field(default_factory=RunSection)
    cover: CoverSection = field(default_factory=CoverSection)
    output: OutputSection = field(default_factory=OutputSection)


def _parse_run(raw: dict) -> RunSection:
    threads = raw.get("threads")
    return RunSection(
        seed=int(raw.get("seed", 0)),
        trials=int(raw.get("trials", 100_000)),
        alpha=float(raw.get("alpha", 1e-3)),
        threads=int(threads) if threads is not None else None,
        batch_size=int(raw.get("batch_size", 1 << 16)),
    )


def _parse_cover(raw: dict) -> CoverSection:
    return CoverSection(
        max_rejections=int(raw.get("max_rejections", 100_000)),
        test_directions=int(raw.get("test_directions", 10_000)),
    )


def _parse_output(raw: dict) -> OutputSection:
    return OutputSection(
        format=str(raw.get("format", "json")),
    )


def load_config(path: Path = _CONFIG_PATH) -> NsgkitConfig:
    """Load and parse config.yaml.

    Args:
        path: Path to the YAML config file. Defaults to <project_root>/config.yaml.

    Returns:
        Fully populated NsgkitConfig.

    Raises:
        FileNotFoundError: If the config file does not exist.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {path}")

    with open(path, "r", encoding="utf-8") as f:
        raw = yaml.safe_load(f)

    if raw is None:
        raw = {}

    return NsgkitConfig(
        run=_parse_run(raw.get("run", {}) or {}),
        cover=_parse_cover(raw.get("cover", {}) or {}),
        output=_parse_output(raw.get("output", {}) or {}),
    )


def load_config_or_default(path: Optional[Path] = None) -> NsgkitConfig:
    try:
        return load_config(path or _CONFIG_PATH)
    except FileNotFoundError:
        return NsgkitConfig()


def resolve_seed(flag: Optional[int], scenario: Optional[int], config: NsgkitConfig) -> int:
    """Seed precedence: --seed flag, scenario file, NSG_SEED (.env allowed), config.yaml."""
    if flag is not None:
        return flag
    if scenario is not None:
        return scenario
    load_dotenv()
    env = os.environ.get(SEED_ENV, "").strip()
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an unsigned integer, got {env!r}")
    return config.run.seed
