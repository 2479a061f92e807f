"""Render lists of flat dict rows as CSV or aligned markdown."""

from __future__ import annotations

import csv
import io

import numpy as np

from ..errors import ConfigError


def _cell(value, digits=4):
    if isinstance(value, (bool, np.bool_)):
        return "yes" if value else "no"
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            return "nan"
        if value != 0 and (abs(value) >= 1e6 or abs(value) < 1e-3):
            return f"{value:.{digits}g}"
        return f"{value:.{digits}f}"
    if isinstance(value, np.ndarray):
        return " ".join(_cell(v, digits) for v in value.ravel())
    if isinstance(value, (tuple, list)):
        return " ".join(_cell(v, digits) for v in value)
    if value is None:
        return ""
    return str(value)


def _columns(rows):
    cols = []
    for row in rows:
        for key in row:
            if key not in cols:
                cols.append(key)
    return cols


def to_csv(rows, digits=10) -> str:
    cols = _columns(rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([_cell(row.get(c), digits) for c in cols])
    return buf.getvalue()


def to_markdown(rows, digits=4) -> str:
    cols = _columns(rows)
    body = [[_cell(row.get(c), digits) for c in cols] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in body]) for i, c in enumerate(cols)]
    line = lambda cells: "| " + " | ".join(x.rjust(w) for x, w in zip(cells, widths)) + " |"
    out = [line(cols), "|" + "|".join("-" * (w + 2) for w in widths) + "|"]
    out.extend(line(r) for r in body)
    return "\n".join(out) + "\n"


def render(rows, fmt="md") -> str:
    if fmt == "csv":
        return to_csv(rows)
    if fmt == "md":
        return to_markdown(rows)
    raise ConfigError(f"unknown format {fmt!r}")
