"""Pipeline configuration: one canonical JSON document drives every stage."""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ValidationError
from .profiling import IndicatorSpec, default_indicators
from .scoring import NORMALIZATION_SCOPES, SCOPE_PER_INDICATOR

PROVIDER_HASH = "hash"
PROVIDER_IMPORT = "import"
PROVIDER_SIDECAR = "sidecar"
PROVIDERS = (PROVIDER_HASH, PROVIDER_IMPORT, PROVIDER_SIDECAR)

CONFIG_ENV_VAR = "FUNDMATCH_CONFIG"
DEFAULT_CONFIG_NAME = "config.json"

# Parameters /recompute may override; embeddings stay fixed.
RECOMPUTE_KEYS = frozenset(
    {
        "reference_year",
        "population_min_pubs",
        "indicators",
        "percentile_cutoff",
        "top_fraction_denominator",
        "normalization_scope",
    }
)


@dataclass
class PipelineConfig:
    reference_year: int = 2025
    population_min_pubs: int = 3
    indicators: list[IndicatorSpec] = field(default_factory=default_indicators)
    percentile_cutoff: float = 95.0
    top_fraction_denominator: int = 3
    normalization_scope: str = SCOPE_PER_INDICATOR
    provider: str = PROVIDER_HASH
    provider_options: dict[str, str] = field(default_factory=dict)
    seed: int = 0

    def validate(self) -> None:
        if not 0.0 < self.percentile_cutoff <= 100.0:
            raise ValidationError(
                f"percentile_cutoff must be in (0, 100], got {self.percentile_cutoff}"
            )
        if self.top_fraction_denominator < 2:
            raise ValidationError(
                f"top_fraction_denominator must be >= 2, got {self.top_fraction_denominator}"
            )
        if self.normalization_scope not in NORMALIZATION_SCOPES:
            raise ValidationError(f"unknown normalization_scope {self.normalization_scope!r}")
        if self.provider not in PROVIDERS:
            raise ValidationError(f"unknown provider {self.provider!r}")
        if self.population_min_pubs < 0:
            raise ValidationError("population_min_pubs must be >= 0")
        names = [i.name for i in self.indicators]
        if len(set(names)) != len(names):
            raise ValidationError("indicator names must be unique")
        for ind in self.indicators:
            ind.validate()

    def to_dict(self) -> dict:
        return {
            "reference_year": self.reference_year,
            "population_min_pubs": self.population_min_pubs,
            "indicators": [
                {
                    "name": i.name,
                    "author_filter": i.author_filter,
                    "window_years": i.window_years,
                    "min_pubs": i.min_pubs,
                }
                for i in self.indicators
            ],
            "percentile_cutoff": self.percentile_cutoff,
            "top_fraction_denominator": self.top_fraction_denominator,
            "normalization_scope": self.normalization_scope,
            "provider": self.provider,
            "provider_options": dict(sorted(self.provider_options.items())),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "PipelineConfig":
        unknown = set(obj) - set(cls().to_dict())
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls()
        if "reference_year" in obj:
            cfg.reference_year = int(obj["reference_year"])
        if "population_min_pubs" in obj:
            cfg.population_min_pubs = int(obj["population_min_pubs"])
        if "indicators" in obj:
            cfg.indicators = [
                IndicatorSpec(
                    name=str(i["name"]),
                    author_filter=str(i["author_filter"]),
                    window_years=int(i["window_years"]),
                    min_pubs=int(i["min_pubs"]),
                )
                for i in obj["indicators"]
            ]
        if "percentile_cutoff" in obj:
            cfg.percentile_cutoff = float(obj["percentile_cutoff"])
        if "top_fraction_denominator" in obj:
            cfg.top_fraction_denominator = int(obj["top_fraction_denominator"])
        if "normalization_scope" in obj:
            cfg.normalization_scope = str(obj["normalization_scope"])
        if "provider" in obj:
            cfg.provider = str(obj["provider"])
        if "provider_options" in obj:
            cfg.provider_options = {str(k): str(v) for k, v in obj["provider_options"].items()}
        if "seed" in obj:
            cfg.seed = int(obj["seed"])
        cfg.validate()
        return cfg

    def with_overrides(self, overrides: dict) -> "PipelineConfig":
        """New config with recompute-safe overrides applied; rejects anything else."""
        bad = set(overrides) - RECOMPUTE_KEYS
        if bad:
            raise ValidationError(f"overrides not allowed: {sorted(bad)}")
        merged = self.to_dict()
        merged.update(overrides)
        return PipelineConfig.from_dict(merged)

    def digest(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def save_config(cfg: PipelineConfig, path: str | Path) -> None:
    cfg.validate()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(cfg.to_dict(), fh, indent=2, ensure_ascii=False)
        fh.write("\n")


def load_config(path: str | Path) -> PipelineConfig:
    p = Path(path)
    if not p.is_file():
        raise OSError(f"cannot read config {p}")
    with open(p, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config {p} is not valid JSON: {exc}") from None
    return PipelineConfig.from_dict(obj)


def resolve_config_path(explicit: str | None, run_dir: str | Path) -> Path:
    """--config flag beats FUNDMATCH_CONFIG beats <run_dir>/config.json."""
    if explicit:
        return Path(explicit)
    env = os.environ.get(CONFIG_ENV_VAR)
    if env:
        return Path(env)
    return Path(run_dir) / DEFAULT_CONFIG_NAME
