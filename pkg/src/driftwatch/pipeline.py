"""End-to-end profiling and validation used by both the CLI and the server.

Keeping this in one place is what makes the two entry points produce
identical reports for identical inputs.
"""

from __future__ import annotations

from .config import DriftConfig
from .drift import Report, compare
from .kinds import FeatureKind, categorize_features
from .summarize import Summary, summarize
from .table import Table


def profile_table(table: Table, cfg: DriftConfig) -> Summary:
    """Type and summarize one dataset (the baseline-producing path)."""
    kinds = categorize_features(table, cfg)
    return summarize(table, kinds, cfg)


def baseline_edge_overrides(baseline: Summary, kinds) -> dict[str, list[float]]:
    """Histogram edges current data must adopt: shared numeric features."""
    overrides: dict[str, list[float]] = {}
    for name, kind in kinds.items():
        if kind is not FeatureKind.NUMERICAL:
            continue
        if baseline["schema"].get(name) != "numerical":
            continue
        profile = baseline["features"][name]
        if profile["hist_edges"] is not None:
            overrides[name] = profile["hist_edges"]
    return overrides


def validate_table(
    baseline: Summary, table: Table, cfg: DriftConfig
) -> tuple[Report, Summary]:
    """Summarize current data in baseline bins and compare.

    Returns the report plus the aligned current summary (whose id the
    report references as current_summary_id).
    """
    kinds = categorize_features(table, cfg)
    overrides = baseline_edge_overrides(baseline, kinds)
    current = summarize(table, kinds, cfg, edge_overrides=overrides)
    report = compare(baseline, current, cfg)
    return report, current
