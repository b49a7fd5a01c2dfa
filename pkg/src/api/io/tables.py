"""
Result Table Module

Column-labeled numeric result tables and their CSV form.

A table is written as one '#'-prefixed JSON metadata line, a header row and
one row per record. Floats are written with repr() so the body is
byte-identical for identical inputs; the timestamp lives only in the
metadata line. NaN and Inf are rejected: a failed sweep point is a row with
failed = 1 and zeros elsewhere, its error text kept in the metadata.
"""

# Python Imports
import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

# Local Imports
from src.core.exceptions import LccError

FAILED_COLUMN = "failed"


def config_hash(document: Any) -> str:
    """SHA-256 of the canonical JSON form of a configuration document."""
    canonical = json.dumps(document, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class ResultTable:
    """
    Column-labeled rows of values plus metadata.

    Attributes:
        columns (List[str]): Column names; `label` is the only non-numeric column allowed.
        rows (List[Dict[str, Any]]): One mapping per row.
        metadata (Dict[str, Any]): Config hash, library version, timestamp, errors.
    """

    columns: List[str]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def append(self, row: Dict[str, Any]) -> None:
        """
        Add a row after checking its columns and finiteness.

        Raises:
            LccError: On unknown columns or non-finite values.
        """
        unknown = set(row) - set(self.columns)
        if unknown:
            raise LccError(f"Row has unknown columns {sorted(unknown)}")
        for name, value in row.items():
            if isinstance(value, float) and not math.isfinite(value):
                raise LccError(f"Non-finite value in column '{name}': {value}")
        self.rows.append(dict(row))

    def append_failure(self, values: Dict[str, Any], error: str) -> None:
        """Add a flagged row for a failed point; unspecified numeric columns are zero."""
        row = {name: 0.0 for name in self.columns if name != "label"}
        row.update(values)
        row[FAILED_COLUMN] = 1
        self.append(row)
        self.metadata.setdefault("errors", []).append({"row": len(self.rows) - 1, "error": error})

    @property
    def failed_rows(self) -> int:
        return sum(1 for row in self.rows if row.get(FAILED_COLUMN, 0))

    def column(self, name: str) -> List[Any]:
        return [row.get(name) for row in self.rows]

    def body(self) -> str:
        """Header and rows as CSV text, without the metadata line."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell(row.get(name, 0)) for name in self.columns])
        return buffer.getvalue()

    def to_csv(self) -> str:
        return "# " + json.dumps(self.metadata, sort_keys=True) + "\n" + self.body()

    @classmethod
    def from_csv(cls, text: str) -> 'ResultTable':
        """Parse the CSV form back; numeric cells become floats."""
        lines = text.splitlines()
        metadata: Dict[str, Any] = {}
        if lines and lines[0].startswith("#"):
            metadata = json.loads(lines[0][1:].strip())
            lines = lines[1:]
        reader = csv.reader(lines)
        columns = next(reader)
        table = cls(columns, metadata=metadata)
        for cells in reader:
            table.rows.append({name: (cell if name == "label" else float(cell)) for name, cell in zip(columns, cells)})
        return table


def columns_with_flag(columns: Sequence[str], leading: Optional[Sequence[str]] = None) -> List[str]:
    """Leading columns, then the given columns, then the failure flag."""
    ordered = list(leading or []) + [c for c in columns if c not in (leading or [])]
    return ordered + [FAILED_COLUMN]
