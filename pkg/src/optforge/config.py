"""Experiment configuration: YAML schema, validation, defaults, serialization.

The YAML document has two top-level blocks::

    parameters:
      <name>:
        type: default          # reserved, accepted and ignored
        searchable: true
        integer: false
        category: agent        # optional: agent | environment | policy
        user_preference: 0.9   # value used when the parameter is not searched
        start: 0.9             # inclusive lower bound
        stop: 0.95             # inclusive upper bound
    study:
      optimizer: tpe           # random | tpe | pso
      direction: maximize
      n_trials: 400            # budget for random/tpe
      n_generations: 20        # budget for pso ...
      population_size: 20      # ... together with this
      workers: 1
      seed: 0
      evaluator_command: "..."
      study_path: ./studies/demo
      evaluator_timeout: null  # optional, seconds
      pruning: {enabled: true, min_completed_trials: 50, min_reports: 48}
      tpe: {n_startup_trials: 50, n_ei_candidates: 80, multivariate: true}
      pso: {w: 0.9694, c1: 0.099381, c2: 0.099381}

Unknown keys anywhere are rejected with an error naming the key.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import yaml

from .errors import ConfigError
from .space import ParameterSpec, SearchSpace

OPTIMIZERS = ("random", "tpe", "pso")
DIRECTIONS = ("maximize", "minimize")

_PARAM_KEYS = {"type", "searchable", "integer", "category", "user_preference", "start", "stop"}
_STUDY_KEYS = {
    "optimizer",
    "direction",
    "n_trials",
    "n_generations",
    "population_size",
    "workers",
    "seed",
    "evaluator_command",
    "study_path",
    "evaluator_timeout",
    "pruning",
    "tpe",
    "pso",
}
_PRUNING_KEYS = {"enabled", "min_completed_trials", "min_reports"}
_TPE_KEYS = {"n_startup_trials", "n_ei_candidates", "multivariate"}
_PSO_KEYS = {"w", "c1", "c2"}

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class PruningConfig:
    enabled: bool = True
    min_completed_trials: int = 50
    min_reports: int = 48

    def __post_init__(self) -> None:
        if self.min_completed_trials < 1:
            raise ConfigError("pruning.min_completed_trials must be positive")
        if self.min_reports < 1:
            raise ConfigError("pruning.min_reports must be positive")


@dataclass(frozen=True)
class TpeConfig:
    n_startup_trials: int = 50
    n_ei_candidates: int = 80
    multivariate: bool = True
    gamma_cap: int = 25
    gamma_fraction: float = 0.25

    def __post_init__(self) -> None:
        if self.n_startup_trials < 1:
            raise ConfigError("tpe.n_startup_trials must be positive")
        if self.n_ei_candidates < 1:
            raise ConfigError("tpe.n_ei_candidates must be positive")
        if self.gamma_cap < 1:
            raise ConfigError("tpe.gamma_cap must be positive")
        if not (0.0 < self.gamma_fraction < 1.0):
            raise ConfigError("tpe.gamma_fraction must lie in (0, 1)")


@dataclass(frozen=True)
class PsoConfig:
    w: float = 0.9694
    c1: float = 0.099381
    c2: float = 0.099381
    population_size: int = 20
    n_generations: int = 20
    vmax_fraction: float = 0.5

    def __post_init__(self) -> None:
        if self.population_size < 1:
            raise ConfigError("pso population_size must be positive")
        if self.n_generations < 1:
            raise ConfigError("pso n_generations must be positive")
        if self.vmax_fraction <= 0:
            raise ConfigError("pso vmax_fraction must be positive")


@dataclass(frozen=True)
class StudyConfig:
    optimizer: str
    direction: str = "maximize"
    n_trials: int = 400
    workers: int = 1
    seed: int = 0
    evaluator_command: str | None = None
    study_path: Path | None = None
    evaluator_timeout: float | None = None
    pruning: PruningConfig | None = None
    tpe: TpeConfig = field(default_factory=TpeConfig)
    pso: PsoConfig = field(default_factory=PsoConfig)

    def __post_init__(self) -> None:
        if self.optimizer not in OPTIMIZERS:
            raise ConfigError(f"unknown optimizer {self.optimizer!r}")
        if self.direction not in DIRECTIONS:
            raise ConfigError(f"unknown direction {self.direction!r}")
        if self.n_trials < 1:
            raise ConfigError("n_trials must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be positive")
        if not (0 <= self.seed <= MAX_SEED):
            raise ConfigError("seed must fit in 64 unsigned bits")
        if self.optimizer == "pso" and self.pruning is not None and self.pruning.enabled:
            raise ConfigError("pruning is not supported with the pso optimizer")
        if self.evaluator_timeout is not None and self.evaluator_timeout <= 0:
            raise ConfigError("evaluator_timeout must be positive")

    @property
    def budget(self) -> int:
        """Total number of trials the study will run."""
        if self.optimizer == "pso":
            return self.pso.population_size * self.pso.n_generations
        return self.n_trials

    @property
    def pruning_enabled(self) -> bool:
        return self.pruning is not None and self.pruning.enabled


def _require_mapping(obj: Any, where: str) -> Mapping:
    if not isinstance(obj, Mapping):
        raise ConfigError(f"{where} must be a mapping")
    return obj


def _reject_unknown(block: Mapping, allowed: set[str], where: str) -> None:
    for key in block:
        if key not in allowed:
            raise ConfigError(f"unknown field {key!r} in {where}")


def _as_bool(value: Any, where: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{where} must be a boolean, got {value!r}")
    return value


def _as_number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{where} must be finite")
    return float(value)


def _as_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer, got {value!r}")
    return value


def _parse_parameter(name: str, block: Any) -> ParameterSpec:
    block = _require_mapping(block, f"parameters.{name}")
    _reject_unknown(block, _PARAM_KEYS, f"parameters.{name}")
    if "start" not in block or "stop" not in block:
        raise ConfigError(f"parameters.{name}: start and stop are required")
    integer = _as_bool(block.get("integer", False), f"parameters.{name}.integer")
    searchable = _as_bool(block.get("searchable", True), f"parameters.{name}.searchable")
    lower = _as_number(block["start"], f"parameters.{name}.start")
    upper = _as_number(block["stop"], f"parameters.{name}.stop")
    if lower > upper:
        raise ConfigError(f"parameters.{name}: lower > upper ({lower} > {upper})")
    fixed = block.get("user_preference")
    if fixed is not None:
        fixed = _as_number(fixed, f"parameters.{name}.user_preference")
    category = block.get("category", "agent")
    return ParameterSpec(
        name=name,
        kind="integer" if integer else "float",
        lower=lower,
        upper=upper,
        searchable=searchable,
        category=category,
        fixed_value=fixed,
    )


def _parse_study(block: Any) -> StudyConfig:
    block = _require_mapping(block, "study")
    _reject_unknown(block, _STUDY_KEYS, "study")
    if "optimizer" not in block:
        raise ConfigError("study.optimizer is required")
    optimizer = block["optimizer"]
    if optimizer not in OPTIMIZERS:
        raise ConfigError(f"unknown optimizer {optimizer!r}")

    if optimizer == "pso":
        if "n_trials" in block:
            raise ConfigError("study.n_trials does not apply to the pso optimizer")
    else:
        for key in ("n_generations", "population_size"):
            if key in block:
                raise ConfigError(f"study.{key} only applies to the pso optimizer")

    pruning = None
    if "pruning" in block and block["pruning"] is not None:
        pblock = _require_mapping(block["pruning"], "study.pruning")
        _reject_unknown(pblock, _PRUNING_KEYS, "study.pruning")
        pruning = PruningConfig(
            enabled=_as_bool(pblock.get("enabled", True), "study.pruning.enabled"),
            min_completed_trials=_as_int(
                pblock.get("min_completed_trials", 50), "study.pruning.min_completed_trials"
            ),
            min_reports=_as_int(pblock.get("min_reports", 48), "study.pruning.min_reports"),
        )

    tpe = TpeConfig()
    if "tpe" in block and block["tpe"] is not None:
        tblock = _require_mapping(block["tpe"], "study.tpe")
        _reject_unknown(tblock, _TPE_KEYS, "study.tpe")
        tpe = TpeConfig(
            n_startup_trials=_as_int(
                tblock.get("n_startup_trials", 50), "study.tpe.n_startup_trials"
            ),
            n_ei_candidates=_as_int(
                tblock.get("n_ei_candidates", 80), "study.tpe.n_ei_candidates"
            ),
            multivariate=_as_bool(tblock.get("multivariate", True), "study.tpe.multivariate"),
        )

    pso_kwargs: dict[str, Any] = {}
    if "pso" in block and block["pso"] is not None:
        sblock = _require_mapping(block["pso"], "study.pso")
        _reject_unknown(sblock, _PSO_KEYS, "study.pso")
        for key in _PSO_KEYS:
            if key in sblock:
                pso_kwargs[key] = _as_number(sblock[key], f"study.pso.{key}")
    if "population_size" in block:
        pso_kwargs["population_size"] = _as_int(
            block["population_size"], "study.population_size"
        )
    if "n_generations" in block:
        pso_kwargs["n_generations"] = _as_int(block["n_generations"], "study.n_generations")
    pso = PsoConfig(**pso_kwargs)

    timeout = block.get("evaluator_timeout")
    if timeout is not None:
        timeout = _as_number(timeout, "study.evaluator_timeout")

    study_path = block.get("study_path")
    if study_path is not None and not isinstance(study_path, str):
        raise ConfigError("study.study_path must be a string path")

    evaluator_command = block.get("evaluator_command")
    if evaluator_command is not None and not isinstance(evaluator_command, str):
        raise ConfigError("study.evaluator_command must be a string")

    return StudyConfig(
        optimizer=optimizer,
        direction=block.get("direction", "maximize"),
        n_trials=_as_int(block.get("n_trials", 400), "study.n_trials")
        if optimizer != "pso"
        else 400,
        workers=_as_int(block.get("workers", 1), "study.workers"),
        seed=_as_int(block.get("seed", 0), "study.seed"),
        evaluator_command=evaluator_command,
        study_path=Path(study_path) if study_path else None,
        evaluator_timeout=timeout,
        pruning=pruning,
        tpe=tpe,
        pso=pso,
    )


def parse_config(yaml_text: str) -> tuple[SearchSpace, StudyConfig]:
    """Parse and validate a full experiment definition."""
    try:
        doc = yaml.safe_load(yaml_text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed YAML: {exc}") from exc
    if doc is None:
        raise ConfigError("empty configuration")
    doc = _require_mapping(doc, "configuration")
    _reject_unknown(doc, {"parameters", "study"}, "configuration")
    if "parameters" not in doc:
        raise ConfigError("configuration requires a parameters block")
    if "study" not in doc:
        raise ConfigError("configuration requires a study block")

    params_block = _require_mapping(doc["parameters"], "parameters")
    specs = tuple(_parse_parameter(name, block) for name, block in params_block.items())
    space = SearchSpace(params=specs)
    study = _parse_study(doc["study"])
    return space, study


def config_to_dict(space: SearchSpace, study: StudyConfig) -> dict:
    """Canonical plain-dict form of a validated configuration."""
    parameters = {}
    for spec in space:
        block: dict[str, Any] = {
            "searchable": spec.searchable,
            "integer": spec.kind == "integer",
            "category": spec.category,
            "start": spec.lower,
            "stop": spec.upper,
        }
        if spec.fixed_value is not None:
            block["user_preference"] = spec.fixed_value
        parameters[spec.name] = block

    study_block: dict[str, Any] = {
        "optimizer": study.optimizer,
        "direction": study.direction,
        "workers": study.workers,
        "seed": study.seed,
        "tpe": {
            "n_startup_trials": study.tpe.n_startup_trials,
            "n_ei_candidates": study.tpe.n_ei_candidates,
            "multivariate": study.tpe.multivariate,
        },
        "pso": {"w": study.pso.w, "c1": study.pso.c1, "c2": study.pso.c2},
    }
    if study.optimizer == "pso":
        study_block["n_generations"] = study.pso.n_generations
        study_block["population_size"] = study.pso.population_size
    else:
        study_block["n_trials"] = study.n_trials
    if study.pruning is not None:
        study_block["pruning"] = {
            "enabled": study.pruning.enabled,
            "min_completed_trials": study.pruning.min_completed_trials,
            "min_reports": study.pruning.min_reports,
        }
    if study.evaluator_command is not None:
        study_block["evaluator_command"] = study.evaluator_command
    if study.study_path is not None:
        study_block["study_path"] = str(study.study_path)
    if study.evaluator_timeout is not None:
        study_block["evaluator_timeout"] = study.evaluator_timeout
    return {"parameters": parameters, "study": study_block}


def serialize_config(space: SearchSpace, study: StudyConfig) -> str:
    """YAML text such that parse_config(serialize_config(...)) round-trips."""
    return yaml.safe_dump(config_to_dict(space, study), sort_keys=False)
