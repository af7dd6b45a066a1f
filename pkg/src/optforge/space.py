"""Typed parameter space: bounded float/integer parameters and vectors over them.

Parameter values live in plain dicts (name -> number); integers are carried as
Python ints so downstream serialization never emits a fractional part.
"""
from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass, field, replace
from typing import Iterator, Mapping

from .errors import ConfigError

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

KINDS = ("float", "integer")
CATEGORIES = ("agent", "environment", "policy")


@dataclass(frozen=True)
class ParameterSpec:
    """One optimizable (or fixed) parameter with inclusive bounds."""

    name: str
    kind: str
    lower: float
    upper: float
    searchable: bool = True
    category: str = "agent"
    fixed_value: float | None = None

    def __post_init__(self) -> None:
        if not _NAME_RE.match(self.name):
            raise ConfigError(f"parameter name {self.name!r} is not a valid identifier")
        if self.kind not in KINDS:
            raise ConfigError(f"parameter {self.name!r}: unknown kind {self.kind!r}")
        if self.category not in CATEGORIES:
            raise ConfigError(
                f"parameter {self.name!r}: unknown category {self.category!r}"
            )
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ConfigError(f"parameter {self.name!r}: bounds must be finite")
        if self.lower > self.upper:
            raise ConfigError(
                f"parameter {self.name!r}: lower > upper ({self.lower} > {self.upper})"
            )
        if self.kind == "integer":
            if self.lower != int(self.lower) or self.upper != int(self.upper):
                raise ConfigError(
                    f"parameter {self.name!r}: integer bounds must be whole numbers"
                )
        if not self.searchable:
            if self.fixed_value is None:
                raise ConfigError(
                    f"parameter {self.name!r}: searchable=false requires a fixed value"
                )
        if self.fixed_value is not None:
            if not math.isfinite(self.fixed_value):
                raise ConfigError(f"parameter {self.name!r}: fixed value must be finite")
            if not (self.lower <= self.fixed_value <= self.upper):
                raise ConfigError(
                    f"parameter {self.name!r}: fixed value {self.fixed_value} "
                    f"outside [{self.lower}, {self.upper}]"
                )
            if self.kind == "integer" and self.fixed_value != int(self.fixed_value):
                raise ConfigError(
                    f"parameter {self.name!r}: integer fixed value must be whole"
                )

    @property
    def range(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class SearchSpace:
    """Ordered collection of parameter specs; order is declaration order."""

    params: tuple[ParameterSpec, ...]
    _by_name: dict[str, ParameterSpec] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_name: dict[str, ParameterSpec] = {}
        for spec in self.params:
            if spec.name in by_name:
                raise ConfigError(f"duplicate parameter name {spec.name!r}")
            by_name[spec.name] = spec
        object.__setattr__(self, "_by_name", by_name)

    def __iter__(self) -> Iterator[ParameterSpec]:
        return iter(self.params)

    def __len__(self) -> int:
        return len(self.params)

    def __getitem__(self, name: str) -> ParameterSpec:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown parameter {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    @property
    def dimension(self) -> int:
        return sum(1 for spec in self.params if spec.searchable)

    @property
    def searchable(self) -> tuple[ParameterSpec, ...]:
        return tuple(spec for spec in self.params if spec.searchable)

    def names(self) -> tuple[str, ...]:
        return tuple(spec.name for spec in self.params)


def decode_value(spec: ParameterSpec, raw: float) -> float | int:
    """Project a raw real onto the spec: clamp to bounds, round integers.

    Rounding is half-away-from-zero, applied after clamping.
    """
    if not math.isfinite(raw):
        raise ValueError(f"parameter {spec.name!r}: raw value must be finite")
    value = min(max(float(raw), spec.lower), spec.upper)
    if spec.kind == "integer":
        rounded = math.floor(value + 0.5) if value >= 0 else math.ceil(value - 0.5)
        return int(min(max(rounded, spec.lower), spec.upper))
    return value


def fix_parameters(space: SearchSpace, overrides: Mapping[str, float]) -> SearchSpace:
    """Return a space where each overridden parameter is pinned to its override.

    Overridden specs become searchable=false with fixed_value set; everything
    else is untouched, so the dimension shrinks by the number of overrides that
    hit searchable parameters.
    """
    for name, value in overrides.items():
        if name not in space:
            raise ConfigError(f"cannot fix unknown parameter {name!r}")
        spec = space[name]
        if not (spec.lower <= value <= spec.upper):
            raise ConfigError(
                f"override for {name!r} ({value}) outside [{spec.lower}, {spec.upper}]"
            )
    new_specs = []
    for spec in space:
        if spec.name in overrides:
            value = overrides[spec.name]
            if spec.kind == "integer":
                value = decode_value(spec, value)
            new_specs.append(replace(spec, searchable=False, fixed_value=float(value)))
        else:
            new_specs.append(spec)
    return SearchSpace(params=tuple(new_specs))


def vector_from_raw(space: SearchSpace, raw: Mapping[str, float]) -> dict[str, float | int]:
    """Assemble a full parameter vector: projected raws for searchable params,
    fixed values for the rest."""
    vector: dict[str, float | int] = {}
    for spec in space:
        if spec.searchable:
            vector[spec.name] = decode_value(spec, raw[spec.name])
        else:
            assert spec.fixed_value is not None
            vector[spec.name] = decode_value(spec, spec.fixed_value)
    return vector


def validate_vector(space: SearchSpace, vector: Mapping[str, float]) -> None:
    """Raise ValueError unless the vector covers the space exactly and in-bounds."""
    seen = set()
    for name, value in vector.items():
        if name not in space:
            raise ValueError(f"vector has unknown parameter {name!r}")
        spec = space[name]
        seen.add(name)
        if not math.isfinite(value):
            raise ValueError(f"parameter {name!r}: non-finite value {value!r}")
        if not (spec.lower <= value <= spec.upper):
            raise ValueError(
                f"parameter {name!r}: {value} outside [{spec.lower}, {spec.upper}]"
            )
        if spec.kind == "integer" and value != int(value):
            raise ValueError(f"parameter {name!r}: {value} is not a whole number")
        if not spec.searchable and value != spec.fixed_value:
            raise ValueError(
                f"parameter {name!r}: fixed parameter must carry {spec.fixed_value}"
            )
    missing = set(space.names()) - seen
    if missing:
        raise ValueError(f"vector missing parameters: {sorted(missing)}")


def space_to_payload(space: SearchSpace) -> list[dict]:
    """JSON-friendly encoding of a space, stable across runs."""
    out = []
    for spec in space:
        out.append(
            {
                "name": spec.name,
                "kind": spec.kind,
                "category": spec.category,
                "searchable": spec.searchable,
                "lower": spec.lower,
                "upper": spec.upper,
                "fixed_value": spec.fixed_value,
            }
        )
    return out


def space_from_payload(payload: list[dict]) -> SearchSpace:
    specs = tuple(
        ParameterSpec(
            name=item["name"],
            kind=item["kind"],
            category=item.get("category", "agent"),
            searchable=item["searchable"],
            lower=item["lower"],
            upper=item["upper"],
            fixed_value=item.get("fixed_value"),
        )
        for item in payload
    )
    return SearchSpace(params=specs)


def space_hash(space: SearchSpace) -> str:
    """Stable digest of the space definition, used to guard resumes."""
    blob = json.dumps(space_to_payload(space), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]
