"""
Utility functions for the qktdiscord package.
"""

from qktdiscord.utils.logging import setup_logging, get_logger
from qktdiscord.utils.formatting import ColorFormatter, JSONEncoder, format_table, format_run_summary
from qktdiscord.utils.rng import make_rng

__all__ = [
    "setup_logging",
    "get_logger",
    "ColorFormatter",
    "JSONEncoder",
    "format_table",
    "format_run_summary",
    "make_rng",
]
