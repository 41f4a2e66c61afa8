"""Deterministic CSV output: one header line, floats with 17 significant digits."""

from __future__ import annotations

import csv
import io
import math
from numbers import Integral, Real
from pathlib import Path
from typing import Any, Iterable, Sequence, TextIO


def format_value(v: Any) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, Integral):
        return str(int(v))
    if isinstance(v, Real):
        x = float(v)
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return f"{x:.16e}"
    return str(v)


def render(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError("row length does not match header")
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def write(header: Sequence[str], rows: Iterable[Sequence[Any]], out: str | Path | TextIO | None) -> None:
    text = render(header, rows)
    if out is None or out == "-":
        import sys

        sys.stdout.write(text)
    elif hasattr(out, "write"):
        out.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="")


def read(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]
