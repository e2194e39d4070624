"""
Logging utilities for the qktdiscord package.
"""

import logging
import sys
from typing import Optional, Union


def setup_logging(
    level: Union[int, str] = logging.INFO, log_file: Optional[str] = None
) -> logging.Logger:
    """
    Set up logging for the application.

    Logs go to stderr so that datasets written to stdout stay clean.

    Args:
        level: The logging level (default: INFO)
        log_file: Optional file path to log to

    Returns:
        Logger: The package root logger
    """
    handlers = [logging.StreamHandler(sys.stderr)]

    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
        force=True,
    )

    logger = logging.getLogger("qktdiscord")
    level_name = level if isinstance(level, str) else logging.getLevelName(level)
    logger.info(f"Logging initialized at level {level_name}")

    return logger


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger for the specified name.

    Args:
        name: The logger name

    Returns:
        Logger: Configured logger instance
    """
    return logging.getLogger(f"qktdiscord.{name}")
