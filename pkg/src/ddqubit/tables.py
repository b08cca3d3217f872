"""Delimited and JSON serialization with round-trip float precision.

Floats are written with 17 significant digits, which is enough for the
parsed value to equal the emitted double bit for bit.  Leading lines
starting with ``#`` carry metadata (units, provenance of presets) and are
skipped on read.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

UNITS_COMMENT = "units: all times in 1/omega_c, frequencies in omega_c (cutoff = 1)"


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    return str(value)


def write_csv(
    path, header: Sequence[str], rows: Iterable[Sequence], comments: Sequence[str] = ()
) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(f"# {UNITS_COMMENT}\n")
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])


def read_csv(path) -> tuple[list[str], list[list[str]], list[str]]:
    """Header, raw string rows, and comment lines of a file written by :func:`write_csv`."""
    comments: list[str] = []
    header: list[str] = []
    rows: list[list[str]] = []
    with Path(path).open("r", newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                comments.append(line[1:].strip())
                continue
            record = next(csv.reader([line]))
            if not header:
                header = record
            elif record:
                rows.append(record)
    return header, rows, comments


def parse_value(text: str):
    """Inverse of :func:`format_value` for numeric cells ('' -> None)."""
    if text == "":
        return None
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def write_json(path, payload) -> None:
    with Path(path).open("w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
