"""Runtime configuration: one immutable value driving every stage.

All tunables live in DriftConfig. Defaults are overlaid with keys from a
user-supplied JSON object; unknown keys and out-of-range values are hard
errors so misconfigured pipelines fail fast instead of drifting silently.
Config is re-read per CLI invocation and per server request; there is no
live mutation of a config already handed to a pipeline stage.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Mapping, Optional

from .canon import canonical_json
from .errors import ConfigError

KIND_NAMES = ("numerical", "categorical", "text")


@dataclass(frozen=True)
class DriftConfig:
    """Thresholds and budgets for typing, summarization, and benchmarking."""

    categorical_distinct_cap: int = 20
    # Distinct-value count at or below which a feature is categorical.

    categorical_ratio: float = 0.05
    # distinct/rows cutoff, in [0, 1]; low ratios mean repeated codes.

    numeric_parse_ratio: float = 0.99
    # Fraction of non-missing cells that must parse as finite numbers
    # before a feature is a numeric candidate. In [0, 1].

    histogram_bins: int = 10
    # Number of quantile histogram bins B for numeric profiles. >= 1.

    psi_warn: float = 0.10
    psi_alert: float = 0.25
    # PSI status bands; warn <= alert.

    rel_change_warn: float = 0.10
    rel_change_alert: float = 0.30
    # Relative-change bands for mean/stddev checks; warn <= alert.

    missing_rate_delta_alert: float = 0.05
    # Absolute missing-rate shift that alerts (no warn band). In [0, 1].

    overall_drift_accepted_pct: float = 20.0
    # Budget: maximum tolerated percentage of alerting checks. In [0, 100].

    psi_smoothing_eps: float = 1e-4
    # Zero-proportion floor applied before the PSI log ratio. > 0.

    alpha: float = 0.05
    # Significance level for version comparisons, in (0, 1).

    degradation_tolerance: float = 0.10
    # Adverse relative change from the first history entry that flags
    # metric degradation. >= 0.

    notify_url: Optional[str] = None
    # Webhook endpoint for alert envelopes; None disables delivery.

    top_k_categories: int = 20
    # Size of the stored categorical frequency table. >= 1.

    feature_kinds: dict[str, str] = field(default_factory=dict)
    # Per-feature kind overrides honored before inference.
    # Values must be one of "numerical", "categorical", "text".


_FIELD_NAMES = tuple(f.name for f in fields(DriftConfig))

_INT_FIELDS = {"categorical_distinct_cap", "histogram_bins", "top_k_categories"}
_FLOAT_FIELDS = {
    "categorical_ratio",
    "numeric_parse_ratio",
    "psi_warn",
    "psi_alert",
    "rel_change_warn",
    "rel_change_alert",
    "missing_rate_delta_alert",
    "overall_drift_accepted_pct",
    "psi_smoothing_eps",
    "alpha",
    "degradation_tolerance",
}


def _check_range(name: str, value: float, lo: float, hi: float,
                 lo_open: bool = False, hi_open: bool = False) -> None:
    below = value <= lo if lo_open else value < lo
    above = value >= hi if hi_open else value > hi
    if below or above:
        left = "(" if lo_open else "["
        right = ")" if hi_open else "]"
        raise ConfigError(f"{name}={value!r} out of range {left}{lo}, {hi}{right}")


def validate_config(cfg: DriftConfig) -> DriftConfig:
    """Raise ConfigError on the first violated invariant; return cfg."""
    if cfg.categorical_distinct_cap < 1:
        raise ConfigError(f"categorical_distinct_cap={cfg.categorical_distinct_cap!r} out of range [1, inf)")
    if cfg.histogram_bins < 1:
        raise ConfigError(f"histogram_bins={cfg.histogram_bins!r} out of range [1, inf)")
    if cfg.top_k_categories < 1:
        raise ConfigError(f"top_k_categories={cfg.top_k_categories!r} out of range [1, inf)")

    _check_range("categorical_ratio", cfg.categorical_ratio, 0.0, 1.0)
    _check_range("numeric_parse_ratio", cfg.numeric_parse_ratio, 0.0, 1.0)
    _check_range("missing_rate_delta_alert", cfg.missing_rate_delta_alert, 0.0, 1.0)
    _check_range("overall_drift_accepted_pct", cfg.overall_drift_accepted_pct, 0.0, 100.0)
    _check_range("alpha", cfg.alpha, 0.0, 1.0, lo_open=True, hi_open=True)

    for name in ("psi_warn", "psi_alert", "rel_change_warn", "rel_change_alert",
                 "degradation_tolerance"):
        if getattr(cfg, name) < 0.0:
            raise ConfigError(f"{name}={getattr(cfg, name)!r} out of range [0, inf)")
    if cfg.psi_smoothing_eps <= 0.0:
        raise ConfigError(f"psi_smoothing_eps={cfg.psi_smoothing_eps!r} out of range (0, inf)")

    if cfg.psi_warn > cfg.psi_alert:
        raise ConfigError(f"psi_warn > psi_alert ({cfg.psi_warn} > {cfg.psi_alert})")
    if cfg.rel_change_warn > cfg.rel_change_alert:
        raise ConfigError(
            f"rel_change_warn > rel_change_alert ({cfg.rel_change_warn} > {cfg.rel_change_alert})"
        )

    if cfg.notify_url is not None and (not isinstance(cfg.notify_url, str) or not cfg.notify_url):
        raise ConfigError("notify_url must be a non-empty string or null")

    if not isinstance(cfg.feature_kinds, dict):
        raise ConfigError("feature_kinds must be an object of {feature: kind}")
    for feat, kind in cfg.feature_kinds.items():
        if not isinstance(feat, str) or not feat:
            raise ConfigError("feature_kinds keys must be non-empty strings")
        if kind not in KIND_NAMES:
            raise ConfigError(
                f"feature_kinds[{feat!r}]={kind!r} is not one of {list(KIND_NAMES)}"
            )
    return cfg


def _coerce(name: str, value: Any) -> Any:
    if name in _INT_FIELDS:
        # bool is an int subclass; reject it explicitly
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{name} must be an integer, got {value!r}")
        return value
    if name in _FLOAT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{name} must be a number, got {value!r}")
        return float(value)
    return value


def merge_overrides(cfg: DriftConfig, overrides: Mapping[str, Any]) -> DriftConfig:
    """Return a new config with ``overrides`` applied; ``cfg`` is untouched."""
    clean: dict[str, Any] = {}
    for key, value in overrides.items():
        if key not in _FIELD_NAMES:
            raise ConfigError(f"unknown config key: {key!r}")
        clean[key] = _coerce(key, value)
    if not clean:
        return validate_config(cfg)
    return validate_config(replace(cfg, **clean))


def load_config(source: Optional[str] = None) -> DriftConfig:
    """Build a DriftConfig from JSON text, or pure defaults when absent."""
    if source is None:
        return validate_config(DriftConfig())
    try:
        raw = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config is not valid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    return merge_overrides(DriftConfig(), raw)


def load_config_file(path: str) -> DriftConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return load_config(fh.read())


def config_doc(cfg: DriftConfig) -> dict[str, Any]:
    """Plain-dict form used inside stored documents."""
    return asdict(cfg)


def serialize_config(cfg: DriftConfig) -> str:
    """Canonical JSON text; load_config(serialize_config(c)) == c."""
    return canonical_json(config_doc(cfg))
