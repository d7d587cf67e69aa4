"""Structured logging configuration for the three-center integral tooling.

Every library module and the bench CLI share one log format so that a
benchmark run can be followed line by line across quadrature, auxiliary
function and summation stages.
"""

import logging
import os
import sys
from typing import Optional

LOG_LEVEL_ENV = "THREECENTER_LOG_LEVEL"


def _level_from_env(default: int) -> int:
    """Resolve the log level named in the environment, if any."""
    name = os.environ.get(LOG_LEVEL_ENV, "").strip().upper()
    if not name:
        return default
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else default


def setup_logger(
    name: str,
    level: Optional[int] = None,
    log_file: Optional[str] = None
) -> logging.Logger:
    """Configure a structured logger.

    Args:
        name: Logger name (typically module name)
        level: Logging level; defaults to the environment setting or INFO
        log_file: Optional file path for file logging

    Returns:
        Configured logger instance
    """
    if level is None:
        level = _level_from_env(logging.INFO)
    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Remove existing handlers to avoid duplicates
    logger.handlers.clear()
    logger.propagate = False

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setLevel(level)

    # Format: timestamp - name - level - message
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%dT%H:%M:%S'
    )
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def set_level(level: int, log_file: Optional[str] = None) -> None:
    """Re-level every logger created through :func:`setup_logger`.

    Used by the CLI ``--verbose`` and ``--log-file`` flags after the library
    modules have already been imported.
    """
    for logger_name in list(logging.root.manager.loggerDict):
        logger = logging.getLogger(logger_name)
        if logger.handlers and not logger.propagate:
            setup_logger(logger_name, level=level, log_file=log_file)
