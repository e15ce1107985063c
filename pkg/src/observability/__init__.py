"""Observability: structured logging."""

from .logging import (
    ConsoleFormatter,
    JSONFormatter,
    RunIdFilter,
    RunLoggerAdapter,
    get_logger,
    setup_logging,
)

__all__ = [
    "ConsoleFormatter",
    "JSONFormatter",
    "RunIdFilter",
    "RunLoggerAdapter",
    "get_logger",
    "setup_logging",
]
