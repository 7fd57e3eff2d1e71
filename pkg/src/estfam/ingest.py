"""Readers for unit-level CSV populations and key=value parameter files."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError, TooFewRows
from .moments import PopulationData, PopulationMoments, sampling_fraction_factor


def _number(text: str, line: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(line, f"{what} {text!r} is not a number") from None
    if not math.isfinite(value):
        raise ParseError(line, f"{what} {text!r} is not finite")
    return value


def ingest_csv(path: str | Path) -> PopulationData:
    """Read a `y,x` CSV (LF or CRLF). Blank lines are ignored."""
    ys, xs = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["y", "x"]:
            raise ParseError(1, f"expected header 'y,x', got {','.join(header or [])!r}")
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ParseError(line, f"expected 2 fields, got {len(row)}")
            ys.append(_number(row[0].strip(), line, "y"))
            xs.append(_number(row[1].strip(), line, "x"))
    if len(ys) < 2:
        raise TooFewRows(f"{path}: need at least 2 data rows, got {len(ys)}")
    return PopulationData(ys, xs)


def write_csv(pop: PopulationData, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["y", "x"])
        for yi, xi in zip(pop.y, pop.x):
            w.writerow([repr(yi), repr(xi)])


PARAM_KEYS = ("N", "n", "mean_y", "mean_x", "cv2_y", "cv2_x", "rho", "beta1_x", "beta2_x", "sigma_x")
_INTEGER_KEYS = ("N", "n")
_OPTIONAL_KEYS = ("sigma_x",)


@dataclass(frozen=True)
class ParameterFile:
    moments: PopulationMoments
    n: int

    @property
    def f1(self) -> float:
        return sampling_fraction_factor(self.moments.N, self.n)


def parse_params(text: str) -> ParameterFile:
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(lineno, f"expected key=value, got {raw.strip()!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in PARAM_KEYS:
            raise ParseError(lineno, f"unknown key {key!r}")
        if key in values:
            raise ParseError(lineno, f"duplicate key {key!r}")
        number = _number(value, lineno, key)
        if key in _INTEGER_KEYS:
            if not number.is_integer():
                raise ParseError(lineno, f"{key} must be an integer")
            number = int(number)
        values[key] = number
    missing = [k for k in PARAM_KEYS if k not in values and k not in _OPTIONAL_KEYS]
    if missing:
        raise ParseError(0, f"missing keys: {', '.join(missing)}")
    n = values.pop("n")
    moments = PopulationMoments.from_constants(**values)
    sampling_fraction_factor(moments.N, n)
    return ParameterFile(moments, n)


def read_params(path: str | Path) -> ParameterFile:
    return parse_params(Path(path).read_text(encoding="utf-8"))
