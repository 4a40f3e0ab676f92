"""Reading measurement tables from CSV.

Long layout (default)::

    lab,replicate,value
    1,1,0.0249
    1,2,0.0259
    ...

Laboratories keep their order of first appearance and replicates their file
order; the ``replicate`` column is only an identifier.  The wide layout has a
``lab`` column followed by one column per replicate.
"""

from __future__ import annotations

import csv
import math
from importlib import resources

import numpy as np

from .errors import ConfigError, DataError
from .model import Dataset

LONG_HEADER = ("lab", "replicate", "value")
BUILTIN_PREFIX = "builtin:"
BUILTIN_DATASETS = ("manganese",)


def _number(text, where):
    try:
        x = float(text)
    except (TypeError, ValueError):
        raise DataError("non-numeric", f"{where}: {text!r} is not a number") from None
    if not math.isfinite(x):
        raise DataError("non-finite", f"{where}: value {text!r} is not finite")
    return x


def _finish(labs):
    if not labs:
        raise DataError("empty", "no measurements found")
    counts = {len(v) for v in labs.values()}
    if len(counts) > 1:
        detail = ", ".join(f"{lab}: {len(v)}" for lab, v in labs.items())
        raise DataError("unbalanced", f"laboratories report different replicate counts ({detail})")
    k = len(labs)
    n = counts.pop()
    if k < 2:
        raise DataError("too-few-labs", f"need at least 2 laboratories, got {k}")
    if n < 2:
        raise DataError("too-few-replicates", f"need at least 2 replicates per laboratory, got {n}")
    return Dataset(np.array(list(labs.values())))


def _read_long(reader):
    header = next(reader, None)
    if header is None:
        raise DataError("empty", "file is empty")
    if tuple(h.strip().lower() for h in header) != LONG_HEADER:
        raise DataError("missing-header", f"expected header {','.join(LONG_HEADER)}, got {','.join(header)}")
    labs = {}
    for line, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise DataError("unbalanced", f"line {line}: expected 3 fields, got {len(row)}")
        lab = row[0].strip()
        labs.setdefault(lab, []).append(_number(row[2].strip(), f"line {line}"))
    return labs


def _read_wide(reader):
    header = next(reader, None)
    if header is None:
        raise DataError("empty", "file is empty")
    if not header or header[0].strip().lower() != "lab" or len(header) < 2:
        raise DataError("missing-header", "wide layout needs a header 'lab,<rep1>,<rep2>,...'")
    labs = {}
    for line, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        cells = [c.strip() for c in row[1:]]
        while cells and not cells[-1]:
            cells.pop()
        if len(cells) != len(header) - 1 or any(not c for c in cells):
            raise DataError("unbalanced", f"line {line}: expected {len(header) - 1} replicate values")
        lab = row[0].strip()
        if lab in labs:
            raise DataError("unbalanced", f"line {line}: laboratory {lab!r} appears twice")
        labs[lab] = [_number(c, f"line {line}") for c in cells]
    return labs


def read_csv(fh, wide: bool = False) -> Dataset:
    reader = csv.reader(fh)
    return _finish(_read_wide(reader) if wide else _read_long(reader))


def builtin_path(name: str):
    if name not in BUILTIN_DATASETS:
        raise ConfigError(f"unknown built-in dataset {name!r}; choose from {', '.join(BUILTIN_DATASETS)}")
    return resources.files("labprec") / "data" / f"{name}.csv"


def ingest(path, wide: bool = False) -> Dataset:
    """Load a balanced dataset; ``builtin:<name>`` selects a bundled one."""
    path = str(path)
    if path.startswith(BUILTIN_PREFIX):
        with builtin_path(path[len(BUILTIN_PREFIX):]).open(newline="", encoding="utf-8") as fh:
            return read_csv(fh, wide=False)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            return read_csv(fh, wide=wide)
    except OSError as exc:
        raise ConfigError(f"cannot read input: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise DataError("non-numeric", f"input is not UTF-8 text: {exc}") from exc


def load_manganese() -> Dataset:
    return ingest(BUILTIN_PREFIX + "manganese")
