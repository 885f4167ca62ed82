"""Run configuration for the command-line experiments.

A :class:`RunConfig` is built from, in increasing precedence: defaults, the
``HDS_FALLCAST_SEED`` environment variable (seed only), a YAML (or JSON)
config file, and command-line flags. Unknown keys are rejected at every
level, including inside the nested ``hyper``, ``synth`` and ``scale``
mappings.

Example config::

    schema_version: 1
    seed: 7
    k_folds: 10
    models:
      - threshold:theta=20
      - kind: gru
        settings: {hidden_size: 32}
    hyper: {lr0: 0.01, max_epochs: 100}
    synth: {n_fall: 100, n_nofall: 1000}

License: MIT

Copyright (c) 2025 Jim Schilling
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

import yaml

from .constants import SEED_ENV_VAR
from .encounter_io import read_text
from .exceptions import HdsFallcastConfigError, HdsFallcastError
from .hds_core import ScaleConfig
from .models import ModelSpec
from .seqnet import HyperParams
from .synth import SynthConfig

SCHEMA_VERSION = 1


def _model_spec(entry: Any) -> ModelSpec:
    if isinstance(entry, ModelSpec):
        return entry
    if isinstance(entry, str):
        return ModelSpec.parse(entry)
    if isinstance(entry, Mapping) and set(entry) <= {"kind", "settings", "label"} and "kind" in entry:
        return ModelSpec(kind=entry["kind"], settings=dict(entry.get("settings") or {}), label=entry.get("label"))
    raise HdsFallcastConfigError(
        f"cannot read model entry {entry!r}",
        error_code="invalid-model-entry",
        details={"expected": "'kind[:key=value,...]' or {kind, settings, label}"},
    )


def _nested(value: Any, cls: type, name: str) -> Any:
    if isinstance(value, cls):
        return value
    if not isinstance(value, Mapping):
        raise HdsFallcastConfigError(f"'{name}' must be a mapping", error_code="invalid-config-type")
    unknown = set(value) - {f.name for f in fields(cls)}
    if unknown:
        raise HdsFallcastConfigError(
            f"unknown keys in '{name}': {', '.join(sorted(unknown))}",
            error_code="unknown-key",
            details={"section": name, "keys": sorted(unknown)},
        )
    if cls is SynthConfig:
        return SynthConfig.from_dict(dict(value))
    return cls(**value)


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by every subcommand.

    Args:
        schema_version: Must be 1.
        data: Input encounter CSV, when the command reads one.
        out: Output directory.
        seed: Root seed for every random stream.
        workers: Fold-level worker processes.
        k_folds: Cross-validation folds.
        models: Model specs compared on shared folds.
        theta: Threshold applied to ``threshold`` specs that do not set one.
        trials: Random-search trials per model.
        hyper: Base hyperparameters for recurrent models; a spec's own settings win.
        synth: Generator settings for ``synth``.
        scale: Score scale used when the data has no metadata sidecar.
        gradcheck_tolerance: Pass mark for ``gradcheck``.

    Raises:
        HdsFallcastConfigError: On any invalid value.
    """

    schema_version: int = SCHEMA_VERSION
    data: str | None = None
    out: str = "out"
    seed: int = 0
    workers: int = 1
    k_folds: int = 10
    models: tuple[ModelSpec, ...] = (ModelSpec("threshold"),)
    theta: int | None = None
    trials: int = 10
    hyper: HyperParams = field(default_factory=HyperParams)
    synth: SynthConfig = field(default_factory=SynthConfig)
    scale: ScaleConfig = field(default_factory=ScaleConfig)
    gradcheck_tolerance: float = 1e-4

    def __post_init__(self) -> None:
        if self.schema_version != SCHEMA_VERSION:
            raise HdsFallcastConfigError(
                f"unsupported schema_version {self.schema_version!r}, expected {SCHEMA_VERSION}",
                error_code="schema-version",
            )
        checks = {
            "seed must be a non-negative integer": isinstance(self.seed, int) and self.seed >= 0,
            "workers must be positive": self.workers >= 1,
            "k_folds must be at least 2": self.k_folds >= 2,
            "trials must be positive": self.trials >= 1,
            "models must not be empty": len(self.models) > 0,
            "gradcheck_tolerance must be positive": self.gradcheck_tolerance > 0,
        }
        problems = [message for message, ok in checks.items() if not ok]
        if problems:
            raise HdsFallcastConfigError("; ".join(problems), error_code="invalid-config")
        if self.theta is not None and not self.scale.contains(self.theta):
            raise HdsFallcastConfigError(
                f"theta {self.theta} outside [{self.scale.s_min}, {self.scale.s_max}]",
                error_code="theta-out-of-range",
            )

    @classmethod
    def from_params(cls, **kwargs: Any) -> RunConfig:
        """Build from a flat mapping whose nested sections may be plain dicts.

        Raises:
            HdsFallcastConfigError: On unknown keys or invalid values.
        """
        valid = {f.name for f in fields(cls)}
        unknown = set(kwargs) - valid
        if unknown:
            raise HdsFallcastConfigError(
                f"unknown configuration keys: {', '.join(sorted(unknown))}",
                error_code="unknown-key",
                details={"keys": sorted(unknown)},
            )
        values = dict(kwargs)
        if "models" in values:
            entries = values["models"]
            entries = [entries] if isinstance(entries, (str, Mapping)) else entries
            values["models"] = tuple(_model_spec(entry) for entry in entries)
        for name, section in (("hyper", HyperParams), ("synth", SynthConfig), ("scale", ScaleConfig)):
            if name in values:
                values[name] = _nested(values[name], section, name)
        try:
            return cls(**values)
        except TypeError as e:
            raise HdsFallcastConfigError(f"invalid configuration: {e}", error_code="invalid-config") from e

    @classmethod
    def read_file(cls, file_path: Path | str) -> dict[str, Any]:
        """Parse a YAML config file into a mapping without building the config.

        Raises:
            HdsFallcastConfigError: If the file is unreadable, not YAML, or not a mapping.
        """
        try:
            text = "\n".join(read_text(file_path))
        except HdsFallcastError as e:
            raise HdsFallcastConfigError(
                f"cannot read config file '{file_path}': {e.message}", error_code="config-not-found"
            ) from e
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise HdsFallcastConfigError(f"invalid YAML in '{file_path}': {e}", error_code="invalid-yaml") from e
        if not isinstance(data, dict):
            raise HdsFallcastConfigError(
                "config file must contain a top-level mapping", error_code="invalid-config-type"
            )
        return data

    @classmethod
    def from_file(cls, file_path: Path | str) -> RunConfig:
        return cls.from_params(**cls.read_file(file_path))

    def model_specs(self) -> list[ModelSpec]:
        """Specs with the run seed applied, ``theta`` filled in and ``hyper`` merged into recurrent kinds."""
        base_hyper = {k: v for k, v in self.hyper.to_dict().items() if k != "seed"}
        specs = []
        for spec in self.models:
            settings = dict(spec.settings)
            if spec.is_sequence:
                settings = {**base_hyper, **settings}
            elif spec.kind == "threshold" and self.theta is not None:
                settings.setdefault("theta", self.theta)
            label = spec.label or spec.name
            specs.append(ModelSpec(kind=spec.kind, settings=settings, seed=self.seed, label=label))
        return specs

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "data": self.data,
            "out": self.out,
            "seed": self.seed,
            "workers": self.workers,
            "k_folds": self.k_folds,
            "models": [{"kind": m.kind, "settings": dict(m.settings), "label": m.label} for m in self.models],
            "theta": self.theta,
            "trials": self.trials,
            "hyper": self.hyper.to_dict(),
            "synth": self.synth.to_dict(),
            "scale": self.scale.to_dict(),
            "gradcheck_tolerance": self.gradcheck_tolerance,
        }


def load_run_config(
    config_path: Path | str | None,
    overrides: Mapping[str, Any],
    environ: Mapping[str, str],
) -> RunConfig:
    """Merge defaults, environment seed, config file and CLI overrides.

    ``None`` values in ``overrides`` mean "not given".

    Raises:
        HdsFallcastConfigError: On any invalid layer.
    """
    params: dict[str, Any] = {}
    env_seed = environ.get(SEED_ENV_VAR)
    if env_seed is not None and env_seed.strip():
        try:
            params["seed"] = int(env_seed)
        except ValueError as e:
            raise HdsFallcastConfigError(
                f"{SEED_ENV_VAR} must be an integer, got {env_seed!r}", error_code="invalid-seed"
            ) from e
    if config_path is not None:
        params.update(RunConfig.read_file(config_path))
    params.update({key: value for key, value in overrides.items() if value is not None})
    return RunConfig.from_params(**params)
