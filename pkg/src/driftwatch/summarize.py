"""Per-feature statistical profiles of one dataset.

A dataset summary is a JSON-ready document: record count, the schema (kind
per feature), and one profile per feature. Numeric profiles carry a
quantile-based histogram whose interior cut points are the column's own
quantiles, so baseline bins hold roughly equal mass and the population
stability index reacts early to shifts. The summary is the unit persisted
as a baseline and the unit compared during validation.

Histogram conventions, stated once because everything downstream depends
on them: edges are bracketed by -inf/+inf sentinels so every finite value
lands in some bin and totals are conserved; bins are half-open [e_i, e_i+1)
with the final bin closed; duplicate cut points and cut points equal to the
column minimum are dropped so no bin is empty by construction. In the
serialized form the infinite sentinels are written as -1e308/1e308 and
restored on load.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from datetime import datetime, timezone
from typing import Any, Optional

from .canon import hash_without
from .config import DriftConfig, config_doc
from .kinds import FeatureKind, FeatureKindMap, parse_number
from .table import Cell, Table, cell_text
from .errors import DriftwatchError, SemanticError

EDGE_SENTINEL = 1e308

Summary = dict[str, Any]
FeatureSummary = dict[str, Any]


def utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def quantile(values: list[float], q: float) -> float:
    """Linear-interpolation quantile of an ascending-sorted list.

    h = (n-1)*q; the result interpolates between the neighbors of h.
    """
    if not values:
        raise DriftwatchError("quantile of empty input")
    if not 0.0 <= q <= 1.0:
        raise DriftwatchError(f"quantile fraction {q!r} outside [0, 1]")
    n = len(values)
    h = (n - 1) * q
    lo = int(math.floor(h))
    frac = h - lo
    if frac == 0.0 or lo + 1 >= n:
        return values[lo]
    return values[lo] + frac * (values[lo + 1] - values[lo])


def histogram_edges(sorted_values: list[float], bins: int) -> list[float]:
    """Quantile-based bin edges for a column's own values.

    Interior cut points sit at i/bins for i = 1..bins-1, deduplicated and
    with cut points at the minimum removed (the bin below the minimum could
    never hold baseline mass). Sentinels -inf/+inf bracket the result.
    """
    vmin = sorted_values[0]
    interior: list[float] = []
    for i in range(1, bins):
        edge = quantile(sorted_values, i / bins)
        if edge > vmin and (not interior or edge > interior[-1]):
            interior.append(edge)
    return [-math.inf] + interior + [math.inf]


def bin_counts(values: list[float], edges: list[float]) -> list[int]:
    """Count values into the bins defined by ``edges``.

    Bins are [e_i, e_i+1), last bin closed; with sentinel edges the counts
    always sum to len(values).
    """
    counts = [0] * (len(edges) - 1)
    last = len(counts) - 1
    for v in values:
        idx = bisect_right(edges, v) - 1
        if idx > last:  # v == +inf cannot occur for finite cells; guard anyway
            idx = last
        counts[idx] += 1
    return counts


def _numeric_values(column: list[Cell]) -> list[float]:
    values = []
    for cell in column:
        value = parse_number(cell)
        if value is not None:
            values.append(value)
    values.sort()
    return values


def numeric_summary(column: list[Cell], cfg: DriftConfig) -> FeatureSummary:
    """Profile of a numerical feature; unparseable cells count as missing."""
    values = _numeric_values(column)
    count = len(values)
    missing = len(column) - count
    if count == 0:
        return {
            "count": 0,
            "missing": missing,
            "mean": None,
            "stddev": None,
            "min": None,
            "max": None,
            "quantiles": None,
            "hist_edges": None,
            "hist_counts": None,
        }
    mean = math.fsum(values) / count
    if count > 1:
        stddev = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (count - 1))
    else:
        stddev = 0.0
    edges = histogram_edges(values, cfg.histogram_bins)
    return {
        "count": count,
        "missing": missing,
        "mean": mean,
        "stddev": stddev,
        "min": values[0],
        "max": values[-1],
        "quantiles": {
            "p25": quantile(values, 0.25),
            "p50": quantile(values, 0.50),
            "p75": quantile(values, 0.75),
        },
        "hist_edges": edges,
        "hist_counts": bin_counts(values, edges),
    }


def categorical_summary(column: list[Cell], cfg: DriftConfig) -> FeatureSummary:
    """Exact distinct count plus the top-k frequency table."""
    counts: dict[str, int] = {}
    missing = 0
    for cell in column:
        if cell is None:
            missing += 1
        else:
            key = cell_text(cell)
            counts[key] = counts.get(key, 0) + 1
    total = len(column) - missing
    # ties broken lexicographically so the table is deterministic
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    top = ranked[: cfg.top_k_categories]
    frequencies = {value: n for value, n in top}
    return {
        "count": total,
        "missing": missing,
        "cardinality": len(counts),
        "frequencies": frequencies,
        "other_count": total - sum(frequencies.values()),
    }


def text_summary(column: list[Cell]) -> FeatureSummary:
    texts = [cell_text(c) for c in column if c is not None]
    count = len(texts)
    return {
        "count": count,
        "missing": len(column) - count,
        "distinct": len(set(texts)),
        "mean_length": (sum(len(t) for t in texts) / count) if count else None,
    }


def summarize(
    table: Table,
    kinds: FeatureKindMap,
    cfg: DriftConfig,
    edge_overrides: Optional[dict[str, list[float]]] = None,
) -> Summary:
    """Build the DatasetSummary document for one table.

    ``edge_overrides`` maps feature names to externally supplied histogram
    edges (a baseline's); the validation pipeline uses it to re-bin current
    data into baseline bins so histograms are directly comparable.
    """
    if list(kinds) != list(table.names):
        raise SemanticError("kind map does not match table columns")
    features: dict[str, FeatureSummary] = {}
    for name in table.names:
        kind = kinds[name]
        column = table.column(name)
        if kind is FeatureKind.NUMERICAL:
            profile = numeric_summary(column, cfg)
            override = (edge_overrides or {}).get(name)
            if override is not None and profile["count"] > 0:
                profile["hist_edges"] = list(override)
                profile["hist_counts"] = bin_counts(_numeric_values(column), override)
            features[name] = profile
        elif kind is FeatureKind.CATEGORICAL:
            features[name] = categorical_summary(column, cfg)
        else:
            features[name] = text_summary(column)

    summary: Summary = {
        "summary_id": "",
        "created_at": utc_now(),
        "record_count": table.row_count,
        "schema": {name: kinds[name].value for name in table.names},
        "features": features,
        "config_used": config_doc(cfg),
    }
    summary["summary_id"] = hash_without(summary_doc(summary), "summary_id", "created_at")
    return summary


def _edges_to_doc(edges: Optional[list[float]]) -> Optional[list[float]]:
    if edges is None:
        return None
    out = list(edges)
    out[0] = -EDGE_SENTINEL
    out[-1] = EDGE_SENTINEL
    return out


def _edges_from_doc(edges: Optional[list[float]]) -> Optional[list[float]]:
    if edges is None:
        return None
    out = [float(e) for e in edges]
    out[0] = -math.inf
    out[-1] = math.inf
    return out


def _map_feature_edges(summary: Summary, mapper) -> Summary:
    out = dict(summary)
    features = {}
    for name, profile in summary["features"].items():
        if "hist_edges" in profile:
            profile = dict(profile)
            profile["hist_edges"] = mapper(profile["hist_edges"])
        features[name] = profile
    out["features"] = features
    return out


def summary_doc(summary: Summary) -> Summary:
    """JSON-safe form: infinite edge sentinels become +/-1e308."""
    return _map_feature_edges(summary, _edges_to_doc)


def summary_from_doc(doc: Summary) -> Summary:
    """Inverse of summary_doc: restore infinite sentinels on load."""
    return _map_feature_edges(doc, _edges_from_doc)
