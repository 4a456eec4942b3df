"""Columnar in-memory table and raw dataset readers.

A cell is one of three things, expressed with plain Python values:

    Missing  -> None
    Text     -> str
    Number   -> float (always finite; NaN/inf are normalized to Missing)

Readers do no type inference: CSV cells stay Text even when they look
numeric, JSON-lines numbers become Number. Kind assignment is a later,
separate stage so datasets can be re-typed under different thresholds
without re-reading bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Optional, Union

from .errors import IngestError

Cell = Union[None, str, float]

# Cell text forms that mean "no value", compared case-insensitively.
_MISSING_TOKENS = frozenset({"", "null", "na", "nan"})


def is_missing_text(text: str) -> bool:
    return text.lower() in _MISSING_TOKENS


def cell_text(cell: Cell) -> str:
    """Canonical string form of a non-missing cell.

    Numbers use shortest round-trip notation so the same value always maps
    to the same category/distinctness key.
    """
    if cell is None:
        raise ValueError("missing cell has no text form")
    if isinstance(cell, float):
        return repr(cell)
    return cell


@dataclass(frozen=True)
class Table:
    """Ordered named columns of equal length."""

    names: tuple[str, ...]
    columns: dict[str, list[Cell]]
    row_count: int

    def __post_init__(self) -> None:
        seen = set()
        for name in self.names:
            if not name:
                raise IngestError("column names must be non-empty")
            if name in seen:
                raise IngestError(f"duplicate column name: {name!r}")
            seen.add(name)
        if set(self.columns) != seen:
            raise IngestError("column map does not match declared names")
        for name, values in self.columns.items():
            if len(values) != self.row_count:
                raise IngestError(
                    f"column {name!r} has {len(values)} values, expected {self.row_count}"
                )

    def column(self, name: str) -> list[Cell]:
        return self.columns[name]


def _norm_number(value: float) -> Cell:
    return value if math.isfinite(value) else None


def _norm_json_value(value: object) -> Cell:
    """Map one JSON value to a cell; containers are stringified."""
    if value is None:
        return None
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return _norm_number(float(value))
    if isinstance(value, str):
        return None if is_missing_text(value) else value
    return json.dumps(value, sort_keys=True, separators=(",", ":"))


def _decode(raw: bytes) -> str:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise IngestError(f"input is not valid UTF-8: {exc}") from exc


def _read_csv(text: str) -> Table:
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise IngestError("CSV input is empty: missing header row") from None
    names: list[str] = []
    seen: set[str] = set()
    for name in header:
        if not name:
            raise IngestError("CSV header contains an empty column name")
        if name in seen:
            raise IngestError(f"duplicate header name: {name!r}")
        seen.add(name)
        names.append(name)

    columns: dict[str, list[Cell]] = {name: [] for name in names}
    rows = 0
    for row_number, row in enumerate(reader, start=1):
        if not row:
            continue  # blank line, not a record
        if len(row) != len(names):
            raise IngestError(
                f"ragged CSV row at row {row_number}: "
                f"expected {len(names)} fields, got {len(row)}"
            )
        for name, raw in zip(names, row):
            columns[name].append(None if is_missing_text(raw) else raw)
        rows += 1
    return Table(names=tuple(names), columns=columns, row_count=rows)


def _read_jsonl(text: str) -> Table:
    names: list[str] = []
    columns: dict[str, list[Cell]] = {}
    rows = 0
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestError(f"invalid JSON at line {line_number}: {exc.msg}") from exc
        if not isinstance(obj, dict):
            raise IngestError(f"line {line_number} is not a JSON object")
        for key in obj:
            if not key:
                raise IngestError(f"empty field name at line {line_number}")
            if key not in columns:
                # first-seen order; earlier rows lacked this column entirely
                names.append(key)
                columns[key] = [None] * rows
        for name in names:
            columns[name].append(_norm_json_value(obj[name]) if name in obj else None)
        rows += 1
    return Table(names=tuple(names), columns=columns, row_count=rows)


def read_table(raw: bytes, format: str = "csv") -> Table:
    """Parse raw bytes into a Table. ``format`` is "csv" or "jsonl"."""
    text = _decode(raw)
    if format == "csv":
        return _read_csv(text)
    if format == "jsonl":
        return _read_jsonl(text)
    raise IngestError(f"unsupported format: {format!r} (expected 'csv' or 'jsonl')")


def read_table_file(path: str, format: Optional[str] = None) -> Table:
    """Read a dataset file; format inferred from the extension when omitted."""
    if format is None:
        lower = path.lower()
        format = "jsonl" if lower.endswith((".jsonl", ".ndjson")) else "csv"
    with open(path, "rb") as fh:
        return read_table(fh.read(), format)
