"""Source package for the zero-order GNE solver."""

from .config import settings
from .core import (
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

__all__ = [
    # Configuration
    "settings",
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
