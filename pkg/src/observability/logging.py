"""Logging setup for solver runs and audits.

Console lines are human-readable and carry the run ID of the seed that
emitted them; ``--log-json`` or ``GNE_LOG_JSON`` switches to one JSON object
per line. A log file, when configured, is always JSON.
"""

import json
import logging
import sys
from collections.abc import MutableMapping
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from ..config import GneSettings
from ..core.types import LogEntry

UTC = timezone.utc  # datetime.UTC is 3.11+

NO_RUN = "-"


class JSONFormatter(logging.Formatter):
    """One JSON object per record, keys as in ``LogEntry``."""

    def format(self, record: logging.LogRecord) -> str:
        entry: LogEntry = {
            "timestamp": datetime.fromtimestamp(record.created, UTC).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }
        run_id = getattr(record, "run_id", None)
        if run_id is not None and run_id != NO_RUN:
            entry["run_id"] = run_id
        extra = getattr(record, "extra", None)
        if extra:
            entry["extra"] = extra
        if record.exc_info:
            entry["exception"] = self.formatException(record.exc_info)
        return json.dumps(entry, default=str)


class ConsoleFormatter(logging.Formatter):
    """Plain text with the level name colored when stderr is a terminal."""

    COLORS = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[35m",
    }
    RESET = "\033[0m"

    def format(self, record: logging.LogRecord) -> str:
        if not sys.stderr.isatty():
            return super().format(record)
        # Color a copy; other handlers see the same record.
        colored = logging.makeLogRecord(record.__dict__)
        color = self.COLORS.get(record.levelname, "")
        colored.levelname = f"{color}{record.levelname}{self.RESET}"
        return super().format(colored)


class RunIdFilter(logging.Filter):
    """Give records outside a solver run a placeholder run ID."""

    def filter(self, record: logging.LogRecord) -> bool:
        if not hasattr(record, "run_id"):
            record.run_id = NO_RUN
        return True


def _level(name: str) -> int:
    # getLevelNamesMapping is 3.11+; it returns a copy of _nameToLevel
    mapping = getattr(logging, "getLevelNamesMapping", lambda: logging._nameToLevel)()
    return mapping.get(name.upper(), logging.INFO)


def setup_logging(
    level: str | None = None,
    json_format: bool | None = None,
    log_file: Path | str | None = None,
    service_name: str = "gne",
) -> None:
    """Configure the root logger.

    Arguments win over ``GNE_LOG_LEVEL``, ``GNE_LOG_JSON`` and
    ``GNE_LOG_FILE``; unknown level names fall back to INFO. Calling it again
    replaces the previous handlers.

    Args:
        level: Level name.
        json_format: JSON lines on stderr instead of plain text.
        log_file: Path of a JSON log file; parent directories are created.
        service_name: Prefix of plain-text lines.
    """
    current = GneSettings()
    log_level = _level(level or current.log_level)
    if json_format is None:
        json_format = current.log_json
    if log_file is None:
        log_file = current.log_file

    root = logging.getLogger()
    root.setLevel(log_level)
    root.handlers.clear()

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(log_level)
    console.addFilter(RunIdFilter())
    if json_format:
        console.setFormatter(JSONFormatter())
    else:
        console.setFormatter(
            ConsoleFormatter(
                fmt=f"%(asctime)s {service_name} %(levelname)s %(name)s [%(run_id)s] %(message)s",
                datefmt="%H:%M:%S",
            )
        )
    root.addHandler(console)

    if log_file:
        path = Path(log_file)
        path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(path, mode="a", encoding="utf-8")
        file_handler.setLevel(log_level)
        file_handler.setFormatter(JSONFormatter())
        root.addHandler(file_handler)

    logging.getLogger("matplotlib").setLevel(logging.WARNING)
    logging.getLogger("PIL").setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


class RunLoggerAdapter(logging.LoggerAdapter):
    """Stamps every record of one solver run with its run ID.

    Run IDs look like ``first-order`` or ``zero-order-seed7``; with several
    worker processes writing to one terminal they are the only way to tell
    the seeds apart.
    """

    def __init__(self, logger: logging.Logger, run_id: str):
        super().__init__(logger, {"run_id": run_id})

    @property
    def run_id(self) -> str:
        return str((self.extra or {}).get("run_id", NO_RUN))

    def process(
        self, msg: str, kwargs: MutableMapping[str, Any]
    ) -> tuple[str, MutableMapping[str, Any]]:
        extra = dict(kwargs.get("extra") or {})
        extra["run_id"] = self.run_id
        kwargs["extra"] = extra
        return msg, kwargs
