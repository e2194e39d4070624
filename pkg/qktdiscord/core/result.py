"""
Result containers for simulation runs and parameter sweeps.

A :class:`RunOutput` is a table (one row per kick) plus a metadata mapping.
It renders to CSV (``#``-prefixed metadata lines, then a header and rows with
floats at 15 significant digits) or to JSON, and writes atomically.
"""

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Any, ClassVar, Dict, List, Optional, Sequence

import numpy as np

from qktdiscord.core.errors import NumericalInvariantError, OutputError
from qktdiscord.utils.formatting import JSONEncoder
from qktdiscord.utils.logging import get_logger

logger = get_logger("result")

CSV_COLUMNS = ("n", "F", "alpha", "Q", "CC", "REE", "concurrence", "MI", "l1", "l2", "l3", "l4")
CC_IDENTITY_TOLERANCE = 1e-9
FORMATS = ("csv", "json")


def format_value(value: Any) -> str:
    """Render one CSV cell."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.15g}"
    return str(value)


@dataclass
class RunOutput:
    """
    Tabular output of one run.

    Attributes:
        columns: Column names in emission order
        rows: One mapping per row, keyed by column name
        metadata: Scenario echo and derived reports (JSON-serializable)
    """

    columns: List[str]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        """
        Values of one column as an array.

        Raises:
            KeyError: If the column is not part of this output
        """
        if name not in self.columns:
            raise KeyError(f"Column '{name}' not in output (have {', '.join(self.columns)})")
        return np.array([row.get(name) for row in self.rows])

    def check_cc_identity(self, tolerance: float = CC_IDENTITY_TOLERANCE) -> None:
        """
        Re-check CC = MI - Q on every row carrying all three columns.

        Raises:
            NumericalInvariantError: On the worst violating row
        """
        if not all(name in self.columns for name in ("Q", "CC", "MI")):
            return
        worst = 0.0
        for row in self.rows:
            worst = max(worst, abs(row["CC"] - (row["MI"] - row["Q"])))
        if worst > tolerance:
            raise NumericalInvariantError("cc_identity", worst, tolerance)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "metadata": self.metadata,
            "columns": list(self.columns),
            "rows": [[row.get(name) for name in self.columns] for row in self.rows],
        }

    def to_csv(self) -> str:
        buffer = io.StringIO()
        for key in sorted(self.metadata):
            value = json.dumps(self.metadata[key], sort_keys=True, cls=JSONEncoder)
            buffer.write(f"# {key}: {value}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_value(row.get(name)) for name in self.columns])
        return buffer.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, cls=JSONEncoder) + "\n"

    def render(self, format: str = "csv") -> str:
        if format not in FORMATS:
            raise ValueError(f"Unknown output format: {format}")
        return self.to_csv() if format == "csv" else self.to_json()

    def write(self, path: str, format: str = "csv") -> str:
        """
        Write atomically: render, write a temporary sibling, then rename.

        Returns:
            str: The path written

        Raises:
            OutputError: If the file cannot be written
            NumericalInvariantError: If the CC identity fails at emission
        """
        self.check_cc_identity()
        write_atomic(path, self.render(format))
        logger.info(f"Wrote {len(self.rows)} rows to {path}")
        return path


def write_atomic(path: str, text: str) -> None:
    """
    Replace path with text via a temporary file in the same directory.

    Raises:
        OutputError: On any OS-level failure
    """
    directory = os.path.dirname(os.path.abspath(path))
    tmp_path = None
    try:
        os.makedirs(directory, exist_ok=True)
        with tempfile.NamedTemporaryFile(
            "w", dir=directory, prefix=".qktdiscord-", suffix=".tmp", delete=False, encoding="utf-8"
        ) as handle:
            tmp_path = handle.name
            handle.write(text)
        os.replace(tmp_path, path)
    except OSError as e:
        if tmp_path and os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise OutputError(path, e.strerror or str(e)) from e


def read_csv(path: str) -> RunOutput:
    """
    Read a CSV written by :meth:`RunOutput.to_csv`.

    Numeric cells come back as floats (``n`` as int); empty cells as None.

    Raises:
        OutputError: If the file cannot be read
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise OutputError(path, e.strerror or str(e)) from e

    metadata: Dict[str, Any] = {}
    body = []
    for line in lines:
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            metadata[key] = json.loads(value)
        else:
            body.append(line)
    reader = csv.reader(body)
    columns = next(reader, [])
    rows = []
    for values in reader:
        row = {}
        for name, cell in zip(columns, values):
            row[name] = _parse_cell(name, cell)
        rows.append(row)
    return RunOutput(columns=columns, rows=rows, metadata=metadata)


def _parse_cell(name: str, cell: str) -> Any:
    if cell == "":
        return None
    if name == "n":
        return int(cell)
    try:
        return float(cell)
    except ValueError:
        return cell


@dataclass
class SweepResult:
    """
    Outcome of a parameter sweep.

    ``outputs[i]`` is None when point i failed; its summary row then carries
    the error message.
    """

    axis: str
    values: List[Any]
    outputs: List[Optional[RunOutput]] = field(default_factory=list)
    summary: List[Dict[str, Any]] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    SUMMARY_COLUMNS: ClassVar[Sequence[str]] = (
        "mean_final_F",
        "revival_period",
        "sudden_change_time",
        "max_oracle_discrepancy",
        "error",
    )

    @property
    def failed(self) -> List[int]:
        return [index for index, row in enumerate(self.summary) if row.get("error")]

    def summary_output(self) -> RunOutput:
        """The summary table as a :class:`RunOutput` for emission."""
        return RunOutput(
            columns=[self.axis, *self.SUMMARY_COLUMNS],
            rows=[dict(row) for row in self.summary],
            metadata=dict(self.metadata),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "axis": self.axis,
            "values": list(self.values),
            "summary": [dict(row) for row in self.summary],
            "metadata": self.metadata,
        }


def finite_or_none(value: Optional[float]) -> Optional[float]:
    """Map NaN and infinities to None for tabular output."""
    if value is None or not math.isfinite(value):
        return None
    return float(value)
