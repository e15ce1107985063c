"""Core types and exceptions."""

from .exceptions import (
    ConfigurationError,
    DimensionMismatchError,
    DivergenceError,
    GameLoadError,
    GneError,
    InvalidGameError,
    OracleFault,
    ProtocolError,
    ZeroMatrixError,
)
from .types import ErrorDict, LogEntry

__all__ = [
    # Types
    "ErrorDict",
    "LogEntry",
    # Exceptions
    "ConfigurationError",
    "DimensionMismatchError",
    "DivergenceError",
    "GameLoadError",
    "GneError",
    "InvalidGameError",
    "OracleFault",
    "ProtocolError",
    "ZeroMatrixError",
]
