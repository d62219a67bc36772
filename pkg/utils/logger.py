"""Logging configuration for the eigenvector laboratory."""

import logging
import os
import sys
from typing import Optional


def parse_level(name: Optional[str], default: int = logging.INFO) -> int:
    """Level number for a name such as "warning"; unknown or empty names give the default."""
    level = getattr(logging, name.strip().upper(), None) if name else None
    return level if isinstance(level, int) else default


# Global log level; EigenvectorLab re-reads EVLAB_LOG_LEVEL once .env is loaded
LOG_LEVEL = parse_level(os.getenv("EVLAB_LOG_LEVEL"))

LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s:%(lineno)d | %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def get_logger(name: str, level: Optional[int] = None) -> logging.Logger:
    """
    Get a logger writing to stdout.

    Args:
        name: Logger name (typically __name__ of the module)
        level: Optional log level override

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(level or LOG_LEVEL)

    # One handler per logger, however often it is requested
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stdout)
        handler.setLevel(level or LOG_LEVEL)
        handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
        logger.addHandler(handler)
        logger.propagate = False

    return logger


def set_level(level: int) -> None:
    """Apply a log level to every logger created through get_logger."""
    global LOG_LEVEL
    LOG_LEVEL = level
    for logger in logging.Logger.manager.loggerDict.values():
        if isinstance(logger, logging.Logger) and logger.handlers:
            logger.setLevel(level)
            for handler in logger.handlers:
                handler.setLevel(level)


def log_error(logger: logging.Logger, error: Exception, node: str) -> None:
    """Log a node failure with its traceback; the node records the message in state."""
    logger.error(f"❌ [{node}] {type(error).__name__}: {error}", exc_info=True)
