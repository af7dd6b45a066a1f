"""optforge: low-code black-box optimization over external evaluator programs.

Heavy submodules are imported lazily so that child evaluator processes (which
only need :mod:`optforge.benchmarks.evaluator`) start fast.
"""
from __future__ import annotations

__version__ = "0.1.0"

_LAZY = {
    "ParameterSpec": "optforge.space",
    "SearchSpace": "optforge.space",
    "decode_value": "optforge.space",
    "fix_parameters": "optforge.space",
    "StudyConfig": "optforge.config",
    "TpeConfig": "optforge.config",
    "PsoConfig": "optforge.config",
    "PruningConfig": "optforge.config",
    "parse_config": "optforge.config",
    "serialize_config": "optforge.config",
    "run_study": "optforge.orchestrator",
    "resume_study": "optforge.orchestrator",
}


def __getattr__(name: str):
    module = _LAZY.get(name)
    if module is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    import importlib

    return getattr(importlib.import_module(module), name)


def __dir__():
    return sorted(set(globals()) | set(_LAZY))
