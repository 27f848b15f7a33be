"""Query results and their console / JSON renderings."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..records import FieldValue, render_cell, value_to_json


@dataclass(frozen=True)
class ResultTable:
    """Immutable query output.

    Equality ignores elapsed_seconds (wall time is machine-dependent);
    everything else — column names, row values, row order — must match
    exactly for two results to compare equal.
    """

    columns: tuple[str, ...]
    rows: tuple[tuple[FieldValue, ...], ...]
    rows_selected: int
    elapsed_seconds: float = field(compare=False, default=0.0)

    def footer(self) -> str:
        return f"{self.rows_selected} rows selected ({self.elapsed_seconds:.3f} seconds)"

    def to_text(self) -> str:
        """Console-style bordered table with a footer line."""
        cells = [[render_cell(v) for v in row] for row in self.rows]
        widths = [
            max(len(name), *(len(row[i]) for row in cells)) if cells else len(name)
            for i, name in enumerate(self.columns)
        ]
        border = "+" + "+".join("-" * (w + 2) for w in widths) + "+"
        lines = [border, _format_row(self.columns, widths), border]
        lines.extend(_format_row(row, widths) for row in cells)
        lines.append(border)
        lines.append(self.footer())
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "columns": list(self.columns),
            "rows": [[value_to_json(v) for v in row] for row in self.rows],
            "rows_selected": self.rows_selected,
        }


def _format_row(values, widths) -> str:
    padded = (f" {value:<{width}} " for value, width in zip(values, widths))
    return "|" + "|".join(padded) + "|"
