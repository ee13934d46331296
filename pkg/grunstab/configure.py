"""Configure logging, tracebacks and the console for the command-line interface."""

from enum import Enum
from logging import Logger

import logging

from typing import Tuple

from rich.console import Console
from rich.logging import RichHandler
from rich.traceback import install

from grunstab import constants


class DebugLevel(str, Enum):
    """The predefined levels for debugging."""

    DEBUG = constants.logging.Debug
    INFO = constants.logging.Info
    WARNING = constants.logging.Warning
    ERROR = constants.logging.Error
    CRITICAL = constants.logging.Critical


def _stderr_console() -> Console:
    """Create a console on standard error; standard output carries the JSON and CSV data."""
    return Console(stderr=True)


def configure_tracebacks() -> None:
    """Configure stack tracebacks arising from a crash to use rich."""
    # note that an early crash, before this function runs, still
    # produces the plain Python traceback
    install(console=_stderr_console())


def configure_logging(
    debug_level: str = constants.logging.Default_Logging_Level,
) -> logging.Logger:
    """Configure standard Python logging package to use rich."""
    logging.basicConfig(
        level=debug_level,
        format=constants.logging.Format,
        datefmt="[%X]",
        handlers=[RichHandler(console=_stderr_console())],
        force=True,
    )
    # numpy and scipy report numerical trouble (for instance a slow quadrature
    # or an overflow) as warnings; route them through the same handler
    logging.captureWarnings(True)
    logger = logging.getLogger(constants.logging.Rich)
    logger.setLevel(debug_level)
    return logger


def setup_console() -> Console:
    """Return a console for progress bars without touching the logging setup."""
    return _stderr_console()


def setup(debug_level: DebugLevel) -> Tuple[Console, Logger]:
    """Perform the setup steps and return a Console and a Logger for terminal-based display."""
    configure_tracebacks()
    logger = configure_logging(debug_level.value)
    console = _stderr_console()
    logger.debug(f"Logging at level {debug_level.value}")
    return console, logger
