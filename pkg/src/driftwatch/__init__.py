"""driftwatch: tabular drift observability and model-experiment registry.

Profile datasets into statistical baselines, detect schema and
distribution drift against them with configurable thresholds and webhook
alerting, and track model versions with lineage and A/B/n statistical
comparison.
"""

from .canon import canonical_hash, canonical_json
from .config import DriftConfig, load_config, merge_overrides, serialize_config
from .drift import compare, psi, rebin, relative_change, schema_diff
from .kinds import FeatureKind, categorize_features, infer_kind
from .notify import emit_alerts
from .pipeline import profile_table, validate_table
from .registry import (
    best_version,
    compare_versions,
    detect_metric_degradation,
    get_lineage,
    log_version,
)
from .render import render_report
from .stats import two_proportion_test, welch_t_test
from .store import Store
from .summarize import quantile, summarize
from .table import Table, read_table

__version__ = "0.1.0"

__all__ = [
    "DriftConfig",
    "FeatureKind",
    "Store",
    "Table",
    "best_version",
    "canonical_hash",
    "canonical_json",
    "categorize_features",
    "compare",
    "compare_versions",
    "detect_metric_degradation",
    "emit_alerts",
    "get_lineage",
    "infer_kind",
    "load_config",
    "log_version",
    "merge_overrides",
    "profile_table",
    "psi",
    "quantile",
    "read_table",
    "rebin",
    "relative_change",
    "render_report",
    "schema_diff",
    "serialize_config",
    "summarize",
    "two_proportion_test",
    "validate_table",
    "welch_t_test",
]
