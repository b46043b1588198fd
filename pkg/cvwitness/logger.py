"""
cvwitness Logger Module

Provides the centralized logging setup for the cvwitness package.
Supports text and JSON output, with the level and format taken from environment variables.
Records go to stderr so that CSV and report output on stdout stays machine-readable.
"""

import logging
import os
import sys
from typing import ClassVar

TEXT_DATEFMT = "%Y-%m-%d %H:%M:%S"


class _ComponentFilter(logging.Filter):
    """Attach the component name to every record passing through a handler."""

    def __init__(self, component: str):
        super().__init__()
        self.component = component

    def filter(self, record: logging.LogRecord) -> bool:
        record.component = self.component
        return True


class WitnessLogger:
    """
    Centralized logger factory for cvwitness components.

    Every component (phase_space, sampling, cli, ...) gets a logger named
    ``cvwitness.<component>`` with one stderr handler configured from
    ``WITNESS_LOG_LEVEL`` and ``WITNESS_LOG_FORMAT``.
    """

    _loggers: ClassVar[dict[str, logging.Logger]] = {}
    _configured: ClassVar[bool] = False

    @classmethod
    def get_logger(cls, name: str) -> logging.Logger:
        """
        Get or create the logger for a component.

        Args:
            name: Component name such as 'phase_space' or 'sampling'

        Returns:
            Configured logging.Logger instance
        """
        full_name = f"cvwitness.{name}"

        if full_name not in cls._loggers:
            logger = logging.getLogger(full_name)
            cls._configure_logger(logger, name)
            cls._loggers[full_name] = logger

        return cls._loggers[full_name]

    @staticmethod
    def _resolve_level() -> tuple[int, str | None]:
        level_name = os.getenv("WITNESS_LOG_LEVEL", "INFO").upper()
        level = logging.getLevelName(level_name)
        if isinstance(level, int):
            return level, None
        return logging.INFO, level_name

    @classmethod
    def _configure_logger(cls, logger: logging.Logger, component: str) -> None:
        """
        Attach a handler and formatter to a freshly created logger.

        Args:
            logger: Logger instance to configure
            component: Component name used in the formatted output
        """
        if logger.handlers:
            return

        log_level, invalid_name = cls._resolve_level()
        log_format_type = os.getenv("WITNESS_LOG_FORMAT", "text").lower()

        logger.setLevel(log_level)
        # Records are emitted here; the root handler would duplicate them.
        logger.propagate = False

        handler = logging.StreamHandler(sys.stderr)
        handler.setLevel(log_level)
        handler.addFilter(_ComponentFilter(component))

        if log_format_type == "json":
            handler.setFormatter(cls._get_json_formatter(component))
        else:
            handler.setFormatter(cls._get_text_formatter(component))

        logger.addHandler(handler)

        if invalid_name is not None:
            logger.warning(f"Invalid WITNESS_LOG_LEVEL '{invalid_name}', using INFO")

    @staticmethod
    def _get_text_formatter(component: str) -> logging.Formatter:
        fmt = f"[{component.upper()}] %(asctime)s - %(levelname)s - %(message)s"
        return logging.Formatter(fmt, datefmt=TEXT_DATEFMT)

    @staticmethod
    def _get_json_formatter(component: str) -> logging.Formatter:
        """
        Create a JSON formatter.

        Falls back to the text formatter if python-json-logger is not installed.

        Args:
            component: Component name for the fallback format

        Returns:
            Configured JSON formatter (or text if unavailable)
        """
        try:
            from pythonjsonlogger.json import JsonFormatter

            return JsonFormatter(
                "%(timestamp)s %(levelname)s %(component)s %(message)s",
                rename_fields={"levelname": "level", "name": "logger"},
                timestamp=True,
            )
        except ImportError:
            return WitnessLogger._get_text_formatter(component)

    @classmethod
    def configure_root_logger(cls) -> None:
        """
        Configure the root logger once at CLI startup.

        Third-party warnings (numpy, scipy) then share the same stderr stream and level.
        """
        if cls._configured:
            return

        root_logger = logging.getLogger()
        log_level, _ = cls._resolve_level()
        root_logger.setLevel(log_level)

        for handler in root_logger.handlers[:]:
            root_logger.removeHandler(handler)

        handler = logging.StreamHandler(sys.stderr)
        handler.setLevel(log_level)
        handler.setFormatter(
            logging.Formatter(
                "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
                datefmt=TEXT_DATEFMT,
            )
        )
        root_logger.addHandler(handler)

        cls._configured = True

    @classmethod
    def reset(cls) -> None:
        """
        Drop cached loggers and their handlers so the next call re-reads the environment.

        Used by tests that change WITNESS_LOG_LEVEL or WITNESS_LOG_FORMAT.
        """
        for logger in cls._loggers.values():
            for handler in logger.handlers[:]:
                logger.removeHandler(handler)
        cls._loggers.clear()
        cls._configured = False
