"""
Exception types shared by the library services.

Every service validates its inputs eagerly and raises one of these; the CLI
maps ValueError subclasses to the usage/input exit code.
"""

from typing import Any, Dict, Optional


class InputRejectedError(ValueError):
    """Input violates an operation's contract (shape, count, symmetry, normalization)."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.details = details or {}


class UnsupportedSizeError(ValueError):
    """Requested degree, arity or table size is outside the supported envelope."""


class ConsistencyError(RuntimeError):
    """An internal cross-check between two code paths failed."""
