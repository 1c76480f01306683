"""Sweep tables and their deterministic on-disk formats.

CSV files carry a header row, ``.`` decimal separators and a fixed column
order; floats are written with ``repr`` so identical runs produce identical
bytes.  A JSON manifest describing the run is always written alongside,
never inline in the CSV.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["SweepTable", "format_value", "write_manifest"]


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    s = str(v)
    if "," in s or "\n" in s:
        raise ValueError(f"value {s!r} cannot be written to CSV")
    return s


@dataclass
class SweepTable:
    columns: list
    rows: list = field(default_factory=list)

    def add(self, **values):
        missing = [c for c in self.columns if c not in values]
        extra = [c for c in values if c not in self.columns]
        if missing or extra:
            raise ValueError(f"row mismatch: missing {missing}, extra {extra}")
        self.rows.append(values)

    def column(self, name) -> list:
        return [row[name] for row in self.rows]

    def to_csv_text(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(format_value(row[c]) for c in self.columns))
        return "\n".join(lines) + "\n"

    def to_json_text(self) -> str:
        return json.dumps(
            {"columns": self.columns, "rows": self.rows}, indent=2, sort_keys=True
        ) + "\n"

    def write(self, path, fmt: str = "csv") -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        text = self.to_csv_text() if fmt == "csv" else self.to_json_text()
        path.write_text(text, encoding="utf-8")
        return path


def write_manifest(path, payload: dict) -> Path:
    """Deterministic JSON manifest (sorted keys, no timestamps)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return path
