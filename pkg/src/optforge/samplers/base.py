"""Unified ask/tell interface shared by the three suggestion strategies.

A sampler is owned by a single coordinating agent: suggest/observe calls are
assumed to arrive in a total order. Objectives are normalized internally to a
"loss" (lower is better) so direction handling lives in exactly one place.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ..config import StudyConfig
from ..errors import BudgetExhausted
from ..space import SearchSpace, decode_value, vector_from_raw

# Worst representable finite loss; keeps history objectives finite as required.
WORST_LOSS = sys.float_info.max


def to_loss(objective: float | None, direction: str) -> float:
    """Map a raw objective to minimize-space; non-finite values become worst."""
    if objective is None or not math.isfinite(objective):
        return WORST_LOSS
    return -objective if direction == "maximize" else objective


@dataclass(frozen=True)
class Suggestion:
    trial_id: int
    params: dict[str, float | int]


@dataclass(frozen=True)
class Outcome:
    """Terminal result of one trial, as seen by the sampler."""

    kind: str  # completed | pruned | failed
    objective: float | None = None
    last_report: float | None = None


@dataclass
class TrialHistory:
    """Observed data, kept in observation order with trial ids for tie-breaks."""

    completed: list[tuple[int, dict[str, float | int], float]] = field(default_factory=list)
    pruned: list[tuple[int, dict[str, float | int], float | None]] = field(default_factory=list)
    running: dict[int, dict[str, float | int]] = field(default_factory=dict)

    def record(self, trial_id: int, params: dict, outcome: Outcome, direction: str) -> None:
        self.running.pop(trial_id, None)
        if outcome.kind == "completed":
            objective = outcome.objective
            if objective is None or not math.isfinite(objective):
                # Worst finite value under the study direction.
                objective = -WORST_LOSS if direction == "maximize" else WORST_LOSS
            self.completed.append((trial_id, params, objective))
        elif outcome.kind == "pruned":
            self.pruned.append((trial_id, params, outcome.last_report))
        elif outcome.kind == "failed":
            self.pruned.append((trial_id, params, None))
        else:
            raise ValueError(f"unknown outcome kind {outcome.kind!r}")


def sample_random(space: SearchSpace, rng: np.random.Generator) -> dict[str, float | int]:
    """Uniform draw over the space: floats from [lower, upper], integers from
    the inclusive whole-number range, fixed parameters at their fixed value."""
    raw: dict[str, float] = {}
    for spec in space.searchable:
        if spec.kind == "integer":
            raw[spec.name] = float(rng.integers(int(spec.lower), int(spec.upper), endpoint=True))
        else:
            raw[spec.name] = float(rng.uniform(spec.lower, spec.upper))
    return vector_from_raw(space, raw)


class Sampler:
    """Base ask/tell sampler: budget accounting and idempotent observes."""

    def __init__(self, space: SearchSpace, config: StudyConfig) -> None:
        self.space = space
        self.config = config
        self.direction = config.direction
        self.budget = config.budget
        self.n_created = 0
        self._params: dict[int, dict[str, float | int]] = {}
        self._observed: set[int] = set()
        self.history = TrialHistory()

    # -- ask ---------------------------------------------------------------
    def suggest(self) -> Suggestion | None:
        """Next suggestion, or None when temporarily blocked (PSO barrier).

        Raises BudgetExhausted once all budgeted trial ids are handed out.
        """
        if self.n_created >= self.budget:
            raise BudgetExhausted(f"budget of {self.budget} trials exhausted")
        params = self._next_params()
        if params is None:
            return None
        trial_id = self.n_created
        self.n_created += 1
        self._params[trial_id] = params
        self.history.running[trial_id] = params
        return Suggestion(trial_id=trial_id, params=params)

    # -- tell --------------------------------------------------------------
    def observe(self, trial_id: int, outcome: Outcome) -> dict | None:
        """Record a terminal outcome. Idempotent per trial id.

        Returns an optional event dict (PSO emits generation advancement).
        """
        if trial_id not in self._params:
            raise ValueError(f"observe for unknown trial id {trial_id}")
        if trial_id in self._observed:
            return None
        self._observed.add(trial_id)
        self.history.record(trial_id, self._params[trial_id], outcome, self.direction)
        return self._on_observe(trial_id, outcome)

    # -- resume ------------------------------------------------------------
    def preload(
        self,
        created: Mapping[int, dict[str, float | int]],
        outcomes: Mapping[int, Outcome],
    ) -> None:
        """Rebuild sampler state from journaled trials (ids must be dense)."""
        for trial_id in sorted(created):
            if trial_id != self.n_created:
                raise ValueError(f"non-contiguous trial ids in journal at {trial_id}")
            self.n_created += 1
            self._params[trial_id] = dict(created[trial_id])
            self.history.running[trial_id] = self._params[trial_id]
        for trial_id in sorted(outcomes):
            self._observed.add(trial_id)
            self.history.record(
                trial_id, self._params[trial_id], outcomes[trial_id], self.direction
            )
        self._after_preload(outcomes)

    # -- strategy hooks ----------------------------------------------------
    def _next_params(self) -> dict[str, float | int] | None:
        raise NotImplementedError

    def _on_observe(self, trial_id: int, outcome: Outcome) -> dict | None:
        return None

    def _after_preload(self, outcomes: Mapping[int, Outcome]) -> None:
        pass


def resumed_rng(seed: int, n_created: int) -> np.random.Generator:
    """Deterministic generator for a sampler resumed after n_created trials."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(n_created,)))


def project_vector(space: SearchSpace, raw: Mapping[str, float]) -> dict[str, float | int]:
    """Clamp/round a raw searchable-dimension mapping into a full vector."""
    return vector_from_raw(space, raw)


def searchable_bounds(space: SearchSpace) -> tuple[list[str], np.ndarray, np.ndarray]:
    names = [spec.name for spec in space.searchable]
    lowers = np.array([spec.lower for spec in space.searchable], dtype=float)
    uppers = np.array([spec.upper for spec in space.searchable], dtype=float)
    return names, lowers, uppers


def array_to_vector(space: SearchSpace, arr: np.ndarray) -> dict[str, float | int]:
    """Full parameter vector from an array over searchable dims (projected)."""
    names = [spec.name for spec in space.searchable]
    raw = {name: float(arr[i]) for i, name in enumerate(names)}
    return vector_from_raw(space, raw)


__all__ = [
    "Outcome",
    "Sampler",
    "Suggestion",
    "TrialHistory",
    "WORST_LOSS",
    "array_to_vector",
    "sample_random",
    "searchable_bounds",
    "to_loss",
    "resumed_rng",
]


def _unused(spec_decode=decode_value):  # pragma: no cover
    return spec_decode
