"""Utility modules for the eigenvector laboratory."""

from utils.logger import get_logger
from utils.errors import EvlabError

__all__ = ["get_logger", "EvlabError"]
