"""Tests for src/observability/logging.py.

Tests logging configuration including:
- JSON formatter
- Console formatter with colors
- setup_logging precedence (arguments, GNE_ environment, defaults)
- RunLoggerAdapter run IDs
"""

import json
import logging
import os
import sys
from pathlib import Path
from unittest.mock import patch

from src.observability.logging import (
    ConsoleFormatter,
    JSONFormatter,
    RunIdFilter,
    RunLoggerAdapter,
    get_logger,
    setup_logging,
)


def _record(msg: str = "Test message", args: tuple = (), level: int = logging.INFO) -> logging.LogRecord:
    return logging.LogRecord(
        name="test.logger",
        level=level,
        pathname="test.py",
        lineno=42,
        msg=msg,
        args=args,
        exc_info=None,
    )


class TestJSONFormatter:
    """Tests for JSONFormatter class."""

    def test_formats_basic_record(self) -> None:
        """Should format log record as JSON."""
        data = json.loads(JSONFormatter().format(_record()))

        assert data["level"] == "INFO"
        assert data["logger"] == "test.logger"
        assert data["message"] == "Test message"
        assert data["line"] == 42
        assert "timestamp" in data
        assert "run_id" not in data

    def test_formats_message_with_args(self) -> None:
        """Should interpolate message arguments."""
        data = json.loads(JSONFormatter().format(_record("t=%d", (42,))))
        assert data["message"] == "t=42"

    def test_includes_run_id(self) -> None:
        """Should include run_id when set on the record."""
        record = _record()
        record.run_id = "zero-order-seed7"
        data = json.loads(JSONFormatter().format(record))
        assert data["run_id"] == "zero-order-seed7"

    def test_includes_exception_info(self) -> None:
        """Should include the formatted exception."""
        try:
            raise ValueError("boom")
        except ValueError:
            record = logging.LogRecord("t", logging.ERROR, "t.py", 1, "failed", (), sys.exc_info())
        data = json.loads(JSONFormatter().format(record))
        assert "ValueError: boom" in data["exception"]

    def test_handles_non_serializable_objects(self) -> None:
        """Non-JSON values in extra fall back to str()."""
        record = _record()
        record.extra = {"path": Path("traces")}
        data = json.loads(JSONFormatter().format(record))
        assert data["extra"]["path"] == "traces"


class TestConsoleFormatter:
    """Tests for ConsoleFormatter class."""

    def test_adds_colors_in_tty(self) -> None:
        """Should wrap the level in ANSI codes when stderr is a TTY."""
        formatter = ConsoleFormatter(fmt="%(levelname)s %(message)s")
        with patch.object(sys.stderr, "isatty", return_value=True):
            result = formatter.format(_record(level=logging.WARNING))
        assert "\033[33m" in result

    def test_no_colors_in_non_tty(self) -> None:
        """Should not add ANSI codes when stderr is not a TTY."""
        formatter = ConsoleFormatter(fmt="%(levelname)s %(message)s")
        with patch.object(sys.stderr, "isatty", return_value=False):
            result = formatter.format(_record())
        assert result == "INFO Test message"


class TestSetupLogging:
    """Tests for setup_logging function."""

    def teardown_method(self) -> None:
        """Clean up logging handlers after each test."""
        root_logger = logging.getLogger()
        root_logger.handlers.clear()
        root_logger.setLevel(logging.WARNING)

    def test_sets_log_level(self) -> None:
        """Should set the specified log level."""
        with patch.dict(os.environ, {}, clear=True):
            setup_logging(level="DEBUG")
        assert logging.getLogger().level == logging.DEBUG

    def test_argument_wins_over_environment(self) -> None:
        """An explicit level beats GNE_LOG_LEVEL."""
        with patch.dict(os.environ, {"GNE_LOG_LEVEL": "WARNING"}):
            setup_logging(level="DEBUG")
        assert logging.getLogger().level == logging.DEBUG

    def test_reads_level_from_environment(self) -> None:
        """Without an argument, GNE_LOG_LEVEL is used."""
        with patch.dict(os.environ, {"GNE_LOG_LEVEL": "WARNING"}):
            setup_logging()
        assert logging.getLogger().level == logging.WARNING

    def test_uses_json_format_from_env(self) -> None:
        """GNE_LOG_JSON enables the JSON formatter."""
        with patch.dict(os.environ, {"GNE_LOG_JSON": "true"}, clear=True):
            setup_logging()
        assert isinstance(logging.getLogger().handlers[0].formatter, JSONFormatter)

    def test_invalid_log_level_defaults_to_info(self) -> None:
        """Unknown level names fall back to INFO."""
        with patch.dict(os.environ, {}, clear=True):
            setup_logging(level="LOUD")
        assert logging.getLogger().level == logging.INFO

    def test_creates_file_handler_and_directory(self, tmp_path: Path) -> None:
        """A log file gets a JSON file handler; parents are created."""
        log_file = tmp_path / "logs" / "run.log"
        with patch.dict(os.environ, {}, clear=True):
            setup_logging(log_file=log_file)

        file_handlers = [h for h in logging.getLogger().handlers if isinstance(h, logging.FileHandler)]
        assert len(file_handlers) == 1
        assert isinstance(file_handlers[0].formatter, JSONFormatter)
        assert log_file.parent.exists()

    def test_reduces_plotting_noise(self) -> None:
        """matplotlib logs only warnings and above."""
        with patch.dict(os.environ, {}, clear=True):
            setup_logging(level="DEBUG")
        assert logging.getLogger("matplotlib").level >= logging.WARNING

    def test_clears_existing_handlers(self) -> None:
        """Repeated setup does not stack handlers."""
        with patch.dict(os.environ, {}, clear=True):
            setup_logging()
            setup_logging()
        assert len(logging.getLogger().handlers) == 1


class TestRunLoggerAdapter:
    """Tests for RunLoggerAdapter."""

    def test_returns_logger_with_name(self) -> None:
        """get_logger returns the named logger."""
        assert get_logger("src.solvers").name == "src.solvers"

    def test_adds_run_id_to_records(self) -> None:
        """Every record carries the run ID."""
        logger = logging.getLogger("test.run_adapter")
        records: list[logging.LogRecord] = []

        class Collect(logging.Handler):
            def emit(self, record: logging.LogRecord) -> None:
                records.append(record)

        handler = Collect()
        logger.addHandler(handler)
        logger.setLevel(logging.INFO)
        try:
            RunLoggerAdapter(logger, "first-order").info("start")
        finally:
            logger.removeHandler(handler)

        assert records[0].run_id == "first-order"

    def test_preserves_existing_extra(self) -> None:
        """Caller-provided extra keys survive."""
        adapter = RunLoggerAdapter(logging.getLogger("x"), "zero-order-seed1")
        _, kwargs = adapter.process("msg", {"extra": {"t": 5}})
        assert kwargs["extra"] == {"t": 5, "run_id": "zero-order-seed1"}


class TestRunIdFilter:
    """Tests for RunIdFilter and the console line format."""

    def test_fills_placeholder(self) -> None:
        """Records outside a run get '-'."""
        record = _record()
        assert RunIdFilter().filter(record)
        assert record.run_id == "-"

    def test_keeps_existing_run_id(self) -> None:
        """Run IDs set by the adapter are not overwritten."""
        record = _record()
        record.run_id = "zero-order-seed3"
        RunIdFilter().filter(record)
        assert record.run_id == "zero-order-seed3"

    def test_placeholder_not_in_json(self) -> None:
        """JSON lines only carry real run IDs."""
        record = _record()
        RunIdFilter().filter(record)
        assert "run_id" not in json.loads(JSONFormatter().format(record))

    def test_color_does_not_leak_to_other_handlers(self) -> None:
        """The record's level name is left untouched."""
        record = _record(level=logging.ERROR)
        with patch.object(sys.stderr, "isatty", return_value=True):
            ConsoleFormatter(fmt="%(levelname)s").format(record)
        assert record.levelname == "ERROR"
