"""TypedDict definitions for machine-readable output.

Covers the JSON shapes emitted outside pydantic models: serialized errors
and structured log lines.
"""

from typing import Any, TypedDict

try:
    from typing import NotRequired
except ImportError:  # Python < 3.11
    from typing_extensions import NotRequired


class ErrorDict(TypedDict):
    """Serialized GneError."""

    error: str
    message: str
    recoverable: bool


class LogEntry(TypedDict):
    """One JSON log line.

    ``run_id`` is present for records emitted inside a solver run.
    """

    timestamp: str
    level: str
    logger: str
    message: str
    module: str
    function: str
    line: int
    run_id: NotRequired[str]
    extra: NotRequired[dict[str, Any]]
    exception: NotRequired[str]
