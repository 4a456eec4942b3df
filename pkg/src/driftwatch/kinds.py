"""Feature kind assignment: numerical, categorical, or text.

Kinds are decided per column from the multiset of its values plus three
thresholds: the numeric parse ratio, the categorical distinct cap, and the
categorical distinct/row ratio. Explicit per-feature overrides from the
config win before anything is inferred.
"""

from __future__ import annotations

import enum
import math
import re
from typing import Optional

from .config import DriftConfig
from .table import Cell, Table, cell_text


class FeatureKind(str, enum.Enum):
    NUMERICAL = "numerical"
    CATEGORICAL = "categorical"
    TEXT = "text"


FeatureKindMap = dict[str, FeatureKind]

# Optional sign, plain/decimal digits, optional exponent. Deliberately
# narrower than float(): no inf/nan words, no underscores, no hex, and
# no comma separators.
_NUMBER_RE = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")


def parse_number(cell: Cell) -> Optional[float]:
    """Finite float value of a cell, or None when it has none."""
    if cell is None:
        return None
    if isinstance(cell, float):
        return cell  # ingest guarantees finiteness
    text = cell.strip()
    if not _NUMBER_RE.match(text):
        return None
    value = float(text)
    return value if math.isfinite(value) else None


def infer_kind(column: list[Cell], cfg: DriftConfig) -> FeatureKind:
    """Assign a kind from data alone.

    With nm = non-missing cells, d = distinct values by string comparison:
      1. no non-missing values        -> TEXT
      2. numeric candidate iff the finite-parseable fraction of nm
         reaches cfg.numeric_parse_ratio
      3. categorical iff d <= distinct cap OR d/|nm| <= distinct ratio
      4. numeric and not categorical  -> NUMERICAL
         categorical (either way)     -> CATEGORICAL
         otherwise                    -> TEXT
    """
    non_missing = [c for c in column if c is not None]
    r = len(non_missing)
    if r == 0:
        return FeatureKind.TEXT

    distinct = len({cell_text(c) for c in non_missing})
    numeric_hits = sum(1 for c in non_missing if parse_number(c) is not None)
    numeric_candidate = (numeric_hits / r) >= cfg.numeric_parse_ratio
    categorical = (
        distinct <= cfg.categorical_distinct_cap
        or (distinct / r) <= cfg.categorical_ratio
    )

    if categorical:
        return FeatureKind.CATEGORICAL
    if numeric_candidate:
        return FeatureKind.NUMERICAL
    return FeatureKind.TEXT


def categorize_features(table: Table, cfg: DriftConfig) -> FeatureKindMap:
    """Kind per column, in column order, honoring cfg.feature_kinds overrides."""
    kinds: FeatureKindMap = {}
    for name in table.names:
        override = cfg.feature_kinds.get(name)
        if override is not None:
            kinds[name] = FeatureKind(override)
        else:
            kinds[name] = infer_kind(table.column(name), cfg)
    return kinds
