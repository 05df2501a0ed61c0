"""
Logging Configuration Module

One loguru sink for the whole run. Records carry the process id because
capture preprocessing may log from worker processes.
"""

import sys
from typing import Optional, TextIO

from loguru import logger

from traffic_graph.exceptions import ConfigurationError

__all__ = ["logger", "configure_logging", "LOG_LEVELS", "DEFAULT_FORMAT"]

LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")

DEFAULT_FORMAT = (
    "<green>{time:HH:mm:ss.SSS}</green> "
    "<level>{level: <7}</level> "
    "<dim>[{process}]</dim> "
    "<cyan>{name}</cyan>:<cyan>{line}</cyan> - "
    "<level>{message}</level>"
)


def configure_logging(
    level: str = "INFO",
    format: Optional[str] = None,
    colorize: bool = True,
    serialize: bool = False,
    sink: Optional[TextIO] = None,
) -> int:
    """
    Replace every loguru sink with a single one

    Args:
        level: One of LOG_LEVELS, any case
        format: loguru format string; DEFAULT_FORMAT when None
        colorize: ANSI colours (ignored when serializing)
        serialize: One JSON object per record
        sink: Text stream to write to; stderr when None, so stdout stays free for reports

    Returns:
        The loguru handler id

    Raises:
        ConfigurationError: Unknown level

    Example:
        >>> import io
        >>> buf = io.StringIO()
        >>> _ = configure_logging("debug", format="{level}|{message}", colorize=False, sink=buf)
        >>> logger.debug("kept {} flow(s)", 3)
        >>> buf.getvalue()
        'DEBUG|kept 3 flow(s)\\n'
    """
    name = level.upper()
    if name not in LOG_LEVELS:
        raise ConfigurationError(f"Unknown log level '{level}', expected one of: {', '.join(LOG_LEVELS)}", "log-level")

    logger.remove()
    return logger.add(
        sink if sink is not None else sys.stderr,
        format=format or DEFAULT_FORMAT,
        level=name,
        colorize=colorize and not serialize,
        serialize=serialize,
        backtrace=False,
        diagnose=False,
    )
