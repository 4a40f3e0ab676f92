"""Plain tables and their csv / markdown / json renderings."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

SCHEMA_VERSION = 1
FORMATS = ("csv", "markdown", "json")


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple
    rows: tuple  # each row a tuple of str, int, float or None

    def column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


def _cell_csv(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _cell_md(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".6g")
    return str(x)


def _cell_json(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def to_csv(tables) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for i, t in enumerate(tables):
        if i:
            buf.write("\n")
        buf.write(f"# {t.name}\n")
        w.writerow(t.columns)
        for row in t.rows:
            w.writerow([_cell_csv(x) for x in row])
    return buf.getvalue()


def to_markdown(tables) -> str:
    out = []
    for t in tables:
        out.append(f"### {t.name}\n")
        out.append("| " + " | ".join(t.columns) + " |")
        out.append("|" + "|".join("---" for _ in t.columns) + "|")
        for row in t.rows:
            out.append("| " + " | ".join(_cell_md(x) for x in row) + " |")
        out.append("")
    return "\n".join(out)


def to_json(tables, meta=None) -> str:
    doc = {"schema_version": SCHEMA_VERSION}
    if meta:
        doc["meta"] = meta
    doc["tables"] = [
        {"name": t.name, "columns": list(t.columns),
         "rows": [{c: _cell_json(x) for c, x in zip(t.columns, row)} for row in t.rows]}
        for t in tables
    ]
    return json.dumps(doc, indent=2) + "\n"


def render(tables, fmt: str, meta=None) -> str:
    if fmt == "csv":
        return to_csv(tables)
    if fmt == "markdown":
        return to_markdown(tables)
    if fmt == "json":
        return to_json(tables, meta)
    raise ValueError(f"unknown format {fmt!r}")


def _parse_cell(text):
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_csv(text: str):
    """Inverse of :func:`to_csv`; numeric-looking cells come back as numbers."""
    tables = []
    name = None
    lines = []

    def flush():
        if name is not None:
            rows = list(csv.reader(lines))
            tables.append(Table(name, tuple(rows[0]), tuple(tuple(_parse_cell(c) for c in r) for r in rows[1:])))

    for line in text.splitlines():
        if line.startswith("# "):
            flush()
            name, lines = line[2:], []
        elif line:
            lines.append(line)
    flush()
    return tables
