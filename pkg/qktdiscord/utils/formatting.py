"""
Output formatting utilities for the qktdiscord package.
"""

import json
import math
from enum import Enum
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np
from colorama import Fore, Style


class ColorFormatter:
    """Utility class for adding color to terminal output."""

    @classmethod
    def success(cls, text: str) -> str:
        """Format text as success (green)."""
        return f"{Fore.GREEN}{text}{Style.RESET_ALL}"

    @classmethod
    def warning(cls, text: str) -> str:
        """Format text as warning (yellow)."""
        return f"{Fore.YELLOW}{text}{Style.RESET_ALL}"

    @classmethod
    def error(cls, text: str) -> str:
        """Format text as error (red)."""
        return f"{Fore.RED}{text}{Style.RESET_ALL}"

    @classmethod
    def info(cls, text: str) -> str:
        """Format text as info (blue)."""
        return f"{Fore.BLUE}{text}{Style.RESET_ALL}"

    @classmethod
    def highlight(cls, text: str) -> str:
        """Format text as highlighted (bold)."""
        return f"{Style.BRIGHT}{text}{Style.RESET_ALL}"


class JSONEncoder(json.JSONEncoder):
    """JSON encoder for numpy scalars and arrays, complex numbers, enums and result objects."""

    def default(self, obj: Any) -> Any:
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.bool_):
            return bool(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, complex):
            return {"re": obj.real, "im": obj.imag}
        if isinstance(obj, Enum):
            return obj.value
        if hasattr(obj, "to_dict") and callable(getattr(obj, "to_dict")):
            return obj.to_dict()
        return super().default(obj)


def _short(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return "nan" if math.isnan(value) else f"{value:.6g}"
    return str(value)


def format_table(columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> str:
    """Plain fixed-width table; error cells are coloured red."""
    body: List[List[str]] = [[_short(row.get(name)) for name in columns] for row in rows]
    widths = [len(name) for name in columns]
    for line in body:
        widths = [max(width, len(cell)) for width, cell in zip(widths, line)]

    header = "  ".join(ColorFormatter.highlight(name.ljust(w)) for name, w in zip(columns, widths))
    lines = [header]
    for line in body:
        cells = []
        for name, cell, width in zip(columns, line, widths):
            padded = cell.ljust(width)
            cells.append(ColorFormatter.error(padded) if name == "error" and cell != "-" else padded)
        lines.append("  ".join(cells))
    return "\n".join(lines)


def format_run_summary(metadata: Dict[str, Any], rows: int) -> str:
    """
    One-screen summary of a run for the terminal.

    Args:
        metadata: RunOutput metadata
        rows: Number of rows emitted

    Returns:
        str: Formatted summary
    """
    scenario = metadata.get("scenario", {})
    title = scenario.get("name") or metadata.get("kind", "run")
    output = [ColorFormatter.highlight(f"{title}: {rows} rows")]

    if "regime" in metadata:
        output.append(f"Regime: {ColorFormatter.info(str(metadata['regime']))}")
    if metadata.get("mean_final_F") is not None:
        output.append(f"Mean F over final window: {metadata['mean_final_F']:.6g}")

    revivals = metadata.get("revivals")
    if revivals:
        times = revivals.get("revival_times", [])
        if times:
            output.append(ColorFormatter.success(f"Revivals at n = {times}"))
        else:
            output.append(ColorFormatter.warning("No revivals detected"))

    change = metadata.get("sudden_change")
    if change:
        first = change.get("first_crossing")
        output.append(f"Sudden change: {first if first is not None else 'none'}")

    discrepancy = metadata.get("max_oracle_discrepancy")
    if discrepancy is not None:
        output.append(f"Max |Q_closed - Q_numeric|: {discrepancy:.3e}")

    return "\n".join(output)
