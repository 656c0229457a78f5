"""Experiment configuration: parsing, defaults, serialization, hashing.

Configs are YAML documents validated by pydantic models.  Unknown keys are
rejected with the offending key path; parsing fills defaults explicitly so
that parse -> serialize -> parse is the identity.
"""
from __future__ import annotations

import hashlib
import json
from typing import Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field

from .ensemble import Observable
from .generators import GeneratorConfig

ExperimentName = Literal[
    "hurst-without-lrd",
    "hurst-without-1f",
    "1f-without-lrd",
    "fgn-baseline",
    "aging-spectrum",
    "eb-dichotomy",
    "custom",
]

# generator block merged in when a named experiment's config omits it
EXPERIMENT_DEFAULT_GENERATOR: dict[str, dict] = {
    "fgn-baseline": {"kind": "fgn"},
    "hurst-without-lrd": {"kind": "trend_noise"},
    "hurst-without-1f": {"kind": "lorenz"},
    "1f-without-lrd": {"kind": "renewal", "theta": 0.5, "n": 2**16},
    "aging-spectrum": {"kind": "renewal", "theta": 0.5, "n": 2**16},
    "eb-dichotomy": {"kind": "renewal", "theta": 0.5, "n": 2**16},
}


class DiagnosticsBlock(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    estimators: tuple[Literal["periodogram", "acf", "rs", "dfa", "gph"], ...] = ("rs", "dfa", "gph")
    rs_windows: Optional[tuple[int, ...]] = None
    dfa_windows: Optional[tuple[int, ...]] = None
    dfa_order: int = Field(1, ge=1, le=2)
    gph_bandwidth: Optional[int] = None
    acf_max_lag: int = Field(50, ge=1)
    band: Optional[tuple[float, float]] = None


class EnsembleBlock(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n_realizations: int = Field(100, ge=2)
    windows: tuple[int, ...] = (2**12, 2**13, 2**14, 2**15, 2**16)
    observable: Observable = Observable(kind="band_power")


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    experiment: ExperimentName
    generator: Optional[GeneratorConfig] = None
    diagnostics: DiagnosticsBlock = DiagnosticsBlock()
    ensemble: Optional[EnsembleBlock] = None
    output_dir: Optional[str] = None
    base_seed: int = 0


def parse_config(text: str) -> ExperimentConfig:
    """Parse a YAML experiment config; fill named-experiment defaults explicitly."""
    data = yaml.safe_load(text)
    if not isinstance(data, dict):
        raise ValueError("config must be a YAML mapping")
    name = data.get("experiment")
    if isinstance(name, str) and "generator" not in data and name in EXPERIMENT_DEFAULT_GENERATOR:
        data = dict(data, generator=EXPERIMENT_DEFAULT_GENERATOR[name])
    return ExperimentConfig.model_validate(data)


def serialize_config(cfg: ExperimentConfig) -> str:
    """YAML round-trip form with every default made explicit."""
    return yaml.safe_dump(cfg.model_dump(mode="json"), sort_keys=True)


def config_hash(cfg: ExperimentConfig) -> str:
    canonical = json.dumps(cfg.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]
