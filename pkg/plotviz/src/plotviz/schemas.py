"""CSV schemas for the photonmix figure tables.

Each figure id maps to the columns its table must carry.  Validation reads
the whole file up front: a missing column or an empty table is a schema
error and nothing gets written.
"""

from __future__ import annotations

import csv
from pathlib import Path

FIGURES = ("fig1", "fig3", "fig4", "fig5a", "fig5b")

REQUIRED_COLUMNS = {
    "fig1": ("r", "k", "g2"),
    "fig3": ("tau_fs", "n_ab1b2", "n_err", "k_hat", "k_hat_err", "triples_fit"),
    "fig4": ("r", "tau_fs", "k", "g2_analytic", "g2_mc", "g2_mc_err"),
    "fig5a": ("k", "r", "g2_analytic", "g2_mc", "g2_mc_err"),
    "fig5b": ("r", "k", "g2_analytic", "g2_mc", "g2_mc_err"),
}


class SchemaError(Exception):
    """The input table does not match the figure's documented schema."""


def load_table(path, figure_id: str) -> dict:
    """Read and validate a figure CSV; returns {column: list[float]}."""
    if figure_id not in REQUIRED_COLUMNS:
        raise SchemaError(f"unknown figure id {figure_id!r}")
    required = REQUIRED_COLUMNS[figure_id]
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            missing = [c for c in required if c not in header]
            if missing:
                raise SchemaError(
                    f"{path}: missing column(s) {', '.join(missing)} "
                    f"required for {figure_id}"
                )
            rows = list(reader)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    table = {}
    for col in required:
        values = []
        for i, row in enumerate(rows):
            cell = row.get(col)
            if cell is None or cell == "":
                raise SchemaError(f"{path} row {i + 2}: empty {col} field")
            try:
                values.append(float(cell))
            except ValueError:
                raise SchemaError(
                    f"{path} row {i + 2}: non-numeric {col} value {cell!r}"
                ) from None
        table[col] = values
    return table
