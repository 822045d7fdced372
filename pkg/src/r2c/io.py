"""CSV reading and writing.

Input matrices are comma separated, UTF-8, with '.' as decimal separator and
an optional single header row (detected as a first row that does not parse as
numbers). Every row must have the same number of fields; empty, NaN or
infinite fields are rejected.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParseError

FLOAT_FORMAT = "%.17g"
LABEL_HEADERS = {"label", "class", "cluster", "truth"}

@dataclass
class Table:
    data: np.ndarray
    header: list | None


def _parse_float(field, line, column):
    try:
        value = float(field)
    except ValueError:
        raise ParseError(f"not a number: {field!r}", line, column) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value {field!r}", line, column)
    return value


def _is_numeric_row(row):
    try:
        [float(f) for f in row]
    except ValueError:
        return False
    return True


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return [row for row in csv.reader(fh)]


def read_table(path, label_column=None):
    """Read a numeric CSV matrix.

    ``label_column`` (header name or 0-based index) is split off and returned
    as a string array of class labels instead of being parsed as a feature.

    Returns ``(Table, labels_or_None)``.
    """
    rows = read_rows(path)
    # trailing blank lines are tolerated, blank lines inside are not
    while rows and not any(f.strip() for f in rows[-1]):
        rows.pop()
    if not rows:
        raise ParseError("empty input", 1)
    header = None
    start = 0
    width = len(rows[0])
    label_idx = None
    if label_column is not None:
        label_idx = _resolve_column(rows[0], label_column)
    first = [f for i, f in enumerate(rows[0]) if i != label_idx]
    if not _is_numeric_row(first):
        header = [f.strip() for f in rows[0]]
        start = 1
    if len(rows) <= start:
        raise ParseError("no data rows", start + 1)
    values = []
    labels = []
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if len(row) != width:
            raise ParseError(f"expected {width} fields, found {len(row)}", lineno)
        parsed = []
        for col, field in enumerate(row, start=1):
            if col - 1 == label_idx:
                labels.append(field.strip())
                continue
            if not field.strip():
                raise ParseError("missing value", lineno, col)
            parsed.append(_parse_float(field, lineno, col))
        values.append(parsed)
    if header is not None and label_idx is not None:
        header = [h for i, h in enumerate(header) if i != label_idx]
    data = np.array(values, dtype=np.float64)
    if data.ndim != 2 or data.shape[1] == 0:
        raise ParseError("no feature columns", start + 1)
    return Table(data=data, header=header), (np.array(labels) if label_idx is not None else None)


def _resolve_column(first_row, column):
    names = [f.strip() for f in first_row]
    if isinstance(column, str) and column in names:
        return names.index(column)
    try:
        idx = int(column)
    except (TypeError, ValueError):
        raise ParseError(f"no column named {column!r}", 1) from None
    if not 0 <= idx < len(names):
        raise ParseError(f"column index {idx} out of range", 1)
    return idx


def read_labels(path):
    """Read a label vector.

    Accepts a single column, or ``row_index,label`` as written by ``r2c fit``
    (any file whose header has a ``label`` column uses that column). A single
    column starts with a header when its first field is one of
    ``LABEL_HEADERS`` or when it is the only non-numeric field.
    """
    rows = read_rows(path)
    while rows and not any(f.strip() for f in rows[-1]):
        rows.pop()
    if not rows:
        raise ParseError("empty label file", 1)
    width = len(rows[0])
    names = [f.strip().lower() for f in rows[0]]
    col = width - 1
    start = 0
    if "label" in names:
        col = names.index("label")
        start = 1
    elif width == 1 and names[0] in LABEL_HEADERS:
        start = 1
    elif width == 1 and not _is_numeric_row(rows[0]) and len(rows) > 1 and _is_numeric_row(rows[1]):
        start = 1
    elif width > 1 and not _is_numeric_row(rows[0]):
        start = 1
    out = []
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if len(row) != width:
            raise ParseError(f"expected {width} fields, found {len(row)}", lineno)
        field = row[col].strip()
        if not field:
            raise ParseError("missing label", lineno, col + 1)
        out.append(field)
    return np.array(out)


def fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % value
    return str(value)


def csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(csv_text(header, rows))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(obj), fh, indent=2)
        fh.write("\n")
