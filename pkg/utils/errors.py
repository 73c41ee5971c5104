"""
Exception hierarchy for the topic modeling engine.
Library code raises these; main.py maps them to exit codes.
"""

from pathlib import Path
from typing import Optional


class GhldaError(Exception):
    """Base class for all engine errors."""


class ConfigurationError(GhldaError, ValueError):
    """Invalid configuration or hyperparameters."""


class IngestionError(GhldaError, ValueError):
    """Corpus ingestion produced an unusable result."""


class EmbeddingParseError(IngestionError):
    """Malformed embedding file."""

    def __init__(self, message: str, path: Optional[Path] = None, line_number: Optional[int] = None):
        self.path = path
        self.line_number = line_number
        location = ""
        if path is not None:
            location = f"{path}"
            if line_number is not None:
                location += f":{line_number}"
            location += ": "
        super().__init__(f"{location}{message}")


class NumericalError(GhldaError, ArithmeticError):
    """Matrix or special-function domain failure."""


class CholeskyDowndateError(NumericalError):
    """A rank-one downdate lost positive-definiteness."""


class TreeStateError(GhldaError, RuntimeError):
    """Topic tree bookkeeping violated an invariant."""


class CheckpointError(GhldaError):
    """Checkpoint cannot be loaded or does not match the corpus."""
