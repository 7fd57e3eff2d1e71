"""Text, CSV and JSON renderings of a result table.

All three formats carry numbers at 10 significant digits, so parsing any
rendering gives identical values.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any

FORMATS = ("text", "csv", "json")


def fmt_number(v: float) -> str:
    return f"{v:.10g}"


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_number(v)
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, float) and not isinstance(v, bool):
        if v != v or v in (float("inf"), float("-inf")):
            return None
        return float(fmt_number(v))
    return v


@dataclass
class Table:
    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    def add(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values for {len(self.columns)} columns")
        self.rows.append(list(values))

    def render(self, fmt: str) -> str:
        if fmt == "text":
            return self.to_text()
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")

    def to_text(self) -> str:
        cells = [[_cell(v) or "-" for v in row] for row in self.rows]
        widths = [
            max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(self.columns)
        ]
        lines = [f"# {k}: {_cell(v)}" for k, v in self.meta.items()]
        lines.append("  ".join(c.rjust(w) for c, w in zip(self.columns, widths)))
        lines.append("  ".join("-" * w for w in widths))
        for r in cells:
            lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)))
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        for k, v in self.meta.items():
            buf.write(f"# {k}: {_cell(v)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_cell(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "meta": {k: _json_value(v) for k, v in self.meta.items()},
            "rows": [
                {c: _json_value(v) for c, v in zip(self.columns, row)} for row in self.rows
            ],
        }
        return json.dumps(doc, indent=2) + "\n"
