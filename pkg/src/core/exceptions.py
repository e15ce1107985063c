"""Custom exception hierarchy for the GNE solver.

Provides structured exceptions with error codes and recovery hints.
"""

from .types import ErrorDict


class GneError(Exception):
    """Base exception for solver errors.

    Attributes:
        message: Human-readable error message.
        code: Machine-readable error code.
        recoverable: Whether the error is potentially recoverable.
    """

    def __init__(
        self,
        message: str,
        code: str,
        recoverable: bool = True,
    ) -> None:
        super().__init__(message)
        self.message = message
        self.code = code
        self.recoverable = recoverable

    def __str__(self) -> str:
        return f"[{self.code}] {self.message}"

    def to_dict(self) -> ErrorDict:
        """Convert exception to dictionary for JSON serialization.

        Returns:
            Dictionary with error details.
        """
        return {
            "error": self.code,
            "message": self.message,
            "recoverable": self.recoverable,
        }


class DimensionMismatchError(GneError):
    """Operands have incompatible shapes.

    Raised by the dense kernels, the game oracles and the KKT evaluations.
    """

    def __init__(
        self,
        operation: str,
        expected: object,
        got: object,
    ) -> None:
        message = f"{operation}: expected {expected}, got {got}"
        super().__init__(message, "DIMENSION", recoverable=False)
        self.operation = operation
        self.expected = expected
        self.got = got


class ZeroMatrixError(GneError):
    """Every singular value is below the rank tolerance."""

    def __init__(self, shape: tuple[int, ...]) -> None:
        message = f"matrix of shape {shape} is numerically zero"
        super().__init__(message, "ZERO_MATRIX", recoverable=False)
        self.shape = shape


class ConfigurationError(GneError):
    """Invalid configuration.

    Raised when solver or run configuration is invalid or missing required values.
    """

    def __init__(self, message: str) -> None:
        super().__init__(message, "CONFIG", recoverable=False)


class GameLoadError(GneError):
    """Game document could not be read, parsed or validated."""

    def __init__(
        self,
        source: str,
        message: str,
        cause: Exception | None = None,
    ) -> None:
        full_message = f"Cannot load game from {source}: {message}"
        super().__init__(full_message, "GAME_LOAD", recoverable=False)
        self.source = source
        self.cause = cause


class OracleFault(GneError):
    """A player's oracle returned a non-finite value.

    Raised by the zero-order round so the faulty player can be named.
    """

    def __init__(self, player: int, detail: str) -> None:
        message = f"player {player}: {detail}"
        super().__init__(message, "ORACLE_FAULT", recoverable=True)
        self.player = player


class ProtocolError(GneError):
    """Aggregator round violated the synchronous protocol."""

    def __init__(self, player: int, detail: str) -> None:
        message = f"player {player}: {detail}"
        super().__init__(message, "PROTOCOL", recoverable=False)
        self.player = player


class DivergenceError(GneError):
    """Iterates stopped being finite or the gap blew up.

    Usually means the step size is too large for the instance.
    """

    def __init__(self, iteration: int, detail: str = "non-finite value") -> None:
        message = f"diverged at iteration {iteration}: {detail}"
        super().__init__(message, "DIVERGED", recoverable=True)
        self.iteration = iteration


class InvalidGameError(GneError):
    """Operation requires a game that passes validation."""

    def __init__(self, issues: list[str]) -> None:
        message = "game failed validation: " + "; ".join(issues)
        super().__init__(message, "INVALID_GAME", recoverable=False)
        self.issues = issues
