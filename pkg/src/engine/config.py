"""Run configuration: YAML file, then command-line overrides, validated by pydantic."""

import os
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from core.errors import ConfigurationError
from mutators.catalog import parse_mask
from testsuite.runner import DEFAULT_BASELINE_FUEL, FuelPolicy

FIXED_TIMESTAMP_ENV = "MVM_FIXED_TIMESTAMP"
COMMANDS = ("repair", "mutation-score", "coverage", "verify", "render", "report")


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="ignore")

    command: str = "repair"
    subjects: List[Path] = Field(default_factory=list)
    mutators: str = "all"
    fuel_mult: int = Field(10, ge=1)
    fuel_floor: int = Field(10_000, ge=1)
    baseline_fuel: int = Field(DEFAULT_BASELINE_FUEL, ge=1)
    jobs: int = Field(1, ge=1)
    out: Optional[Path] = None
    machine_readable: bool = False
    include_diffs: bool = False
    fixed_timestamp: Optional[str] = None
    logs_dir: Path = Path("logs")
    log_level: str = "INFO"

    @field_validator("command")
    @classmethod
    def _known_command(cls, value: str) -> str:
        if value not in COMMANDS:
            raise ValueError(f"unknown command {value!r}")
        return value

    @field_validator("mutators")
    @classmethod
    def _known_mask(cls, value: str) -> str:
        try:
            parse_mask(value)
        except ConfigurationError as exc:
            raise ValueError(str(exc)) from None
        return value

    @field_validator("log_level")
    @classmethod
    def _upper(cls, value: str) -> str:
        return value.upper()

    @property
    def mask(self) -> FrozenSet[str]:
        return parse_mask(self.mutators)

    @property
    def fuel_policy(self) -> FuelPolicy:
        return FuelPolicy(self.fuel_mult, self.fuel_floor)


def read_config_file(path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigurationError(f"config {path} must be a mapping")
    return data


def build_config(overrides: Dict[str, Any], config_path: Optional[str] = None) -> RunConfig:
    """File values overridden by every non-None command-line value.

    MVM_FIXED_TIMESTAMP (process environment or `.env`) fills the timestamp
    when neither source sets it.
    """
    load_dotenv()
    values = read_config_file(config_path) if config_path else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    if not values.get("fixed_timestamp") and os.getenv(FIXED_TIMESTAMP_ENV):
        values["fixed_timestamp"] = os.getenv(FIXED_TIMESTAMP_ENV)
    try:
        return RunConfig.model_validate(values)
    except ValidationError as exc:
        raise ConfigurationError(f"invalid configuration: {exc}") from None
