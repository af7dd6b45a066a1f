"""Exception hierarchy shared across the engine."""
from __future__ import annotations


class ForgeError(Exception):
    """Base class for all engine errors."""


class ConfigError(ForgeError):
    """Invalid experiment configuration (bad YAML, bounds, names, ...)."""


class SpaceMismatchError(ConfigError):
    """Config given at resume time does not match the one in the journal."""


class StorageError(ForgeError):
    """Journal is unreadable, corrupt, or cannot be written."""


class StudySealedError(StorageError):
    """Append attempted on a study whose budget is fully consumed."""


class ProtocolError(ForgeError):
    """Evaluator violated the wire protocol; fails the trial, not the study."""


class BudgetExhausted(ForgeError):
    """Signal raised by suggest() once every budgeted trial id is handed out."""
