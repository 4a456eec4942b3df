"""Baseline-vs-current comparison and drift scoring.

Each validation run compares two dataset summaries and produces a report:
a sorted list of findings (schema differences plus per-feature statistical
checks), aggregate counters, the overall drift percentage, and a pass/fail
verdict against the configured budget.

The single distributional metric is the population stability index,
Sum((p_i - q_i) * ln(p_i / q_i)) over shared bins: symmetric, nonnegative,
zero exactly on identical distributions. Numeric features use the
baseline's quantile bins (current data must be re-binned against baseline
edges upstream), categorical features use the baseline's top-k categories
plus an "other" bucket.

Aggregation: every non-schema finding is one "check"; the overall drift
percentage is 100 * alerting checks / checks. Schema breakage (a dropped
column, a changed kind) fails the verdict directly without consuming
budget.
"""

from __future__ import annotations

import math
from typing import Any, Optional, Union

from .canon import hash_without
from .config import DriftConfig
from .errors import DriftwatchError, SemanticError
from .summarize import Summary, utc_now

Finding = dict[str, Any]
Report = dict[str, Any]

SCHEMA_CHECKS = frozenset({"missing_column", "new_column", "kind_changed", "new_categories"})
# Schema alerts that fail the verdict regardless of the drift budget.
BREAKING_SCHEMA_CHECKS = frozenset({"missing_column", "kind_changed"})

OK, WARN, ALERT = "ok", "warn", "alert"


def psi(p_counts: list[int], q_counts: list[int], eps: float) -> float:
    """Population stability index between two count vectors.

    Counts are converted to proportions, zero proportions floored at
    ``eps``, each side renormalized to sum 1, then the summand
    (p - q) * ln(p / q) is accumulated. The eps-floor-then-renormalize
    smoothing keeps psi(d, d) == 0 and the metric symmetric.
    """
    if len(p_counts) != len(q_counts):
        raise DriftwatchError(
            f"psi needs equal-length count vectors, got {len(p_counts)} and {len(q_counts)}"
        )
    if not p_counts:
        raise DriftwatchError("psi needs at least one bin")
    p_total = sum(p_counts)
    q_total = sum(q_counts)
    if p_total <= 0 or q_total <= 0:
        raise DriftwatchError("psi needs a positive total count on both sides")
    p = [c / p_total if c > 0 else eps for c in p_counts]
    q = [c / q_total if c > 0 else eps for c in q_counts]
    p_norm = sum(p)
    q_norm = sum(q)
    return math.fsum(
        (pi / p_norm - qi / q_norm) * math.log((pi / p_norm) / (qi / q_norm))
        for pi, qi in zip(p, q)
    )


def rebin(values: list[float], baseline_edges: list[float]) -> list[int]:
    """Count current values into a baseline's bins.

    Same half-open convention as the summarizer; the -inf/+inf sentinels
    guarantee every value is counted.
    """
    from .summarize import bin_counts

    return bin_counts(values, baseline_edges)


def relative_change(base: float, cur: float) -> float:
    """|cur - base| / max(|base|, 1e-12); the floor makes it total.

    Clamped to 1e308 so scores stay JSON-serializable even for inputs
    whose difference overflows to infinity.
    """
    change = abs(cur - base) / max(abs(base), 1e-12)
    return change if math.isfinite(change) else 1e308


def _finding(
    feature: str,
    check: str,
    baseline_value: Union[float, str, None],
    current_value: Union[float, str, None],
    score: float,
    status: str,
) -> Finding:
    return {
        "feature": feature,
        "check": check,
        "baseline_value": baseline_value,
        "current_value": current_value,
        "score": score,
        "status": status,
    }


def _banded_status(score: float, warn: float, alert: float) -> str:
    if score < warn:
        return OK
    if score < alert:
        return WARN
    return ALERT


def schema_diff(base: Summary, cur: Summary) -> list[Finding]:
    """Column-level differences between two summaries.

    Dropped columns and kind changes are alerts (breaking); added columns
    and new category values are warns (suspicious but additive).
    """
    findings: list[Finding] = []
    base_schema = base["schema"]
    cur_schema = cur["schema"]

    for name in base_schema:
        if name not in cur_schema:
            findings.append(
                _finding(name, "missing_column", base_schema[name], "absent", 1.0, ALERT)
            )
    for name in cur_schema:
        if name not in base_schema:
            findings.append(
                _finding(name, "new_column", "absent", cur_schema[name], 1.0, WARN)
            )

    for name, base_kind in base_schema.items():
        cur_kind = cur_schema.get(name)
        if cur_kind is None:
            continue
        if base_kind != cur_kind:
            findings.append(
                _finding(name, "kind_changed", base_kind, cur_kind, 1.0, ALERT)
            )
        elif base_kind == "categorical":
            base_values = set(base["features"][name]["frequencies"])
            cur_values = set(cur["features"][name]["frequencies"])
            new_values = sorted(cur_values - base_values)
            if new_values:
                findings.append(
                    _finding(
                        name,
                        "new_categories",
                        "",
                        ",".join(new_values),
                        float(len(new_values)),
                        WARN,
                    )
                )
    return findings


def _missing_rate(profile: dict, record_count: int) -> float:
    return profile["missing"] / record_count if record_count > 0 else 0.0


def _numeric_checks(
    name: str, base_prof: dict, cur_prof: dict, cfg: DriftConfig
) -> list[Finding]:
    findings: list[Finding] = []
    if base_prof["count"] > 0 and cur_prof["count"] > 0:
        if base_prof["hist_edges"] != cur_prof["hist_edges"]:
            raise SemanticError(
                f"histogram edges for feature {name!r} differ between summaries; "
                "re-bin current data against the baseline edges before comparing"
            )
        if len(base_prof["hist_counts"]) != len(cur_prof["hist_counts"]):
            raise SemanticError(
                f"bin counts for feature {name!r} have different lengths; "
                "re-bin current data against the baseline edges before comparing"
            )
        score = psi(base_prof["hist_counts"], cur_prof["hist_counts"], cfg.psi_smoothing_eps)
        findings.append(
            _finding(
                name,
                "psi",
                float(base_prof["count"]),
                float(cur_prof["count"]),
                score,
                _banded_status(score, cfg.psi_warn, cfg.psi_alert),
            )
        )
        mean_change = relative_change(base_prof["mean"], cur_prof["mean"])
        findings.append(
            _finding(
                name,
                "mean_rel_change",
                base_prof["mean"],
                cur_prof["mean"],
                mean_change,
                _banded_status(mean_change, cfg.rel_change_warn, cfg.rel_change_alert),
            )
        )
        std_change = relative_change(base_prof["stddev"], cur_prof["stddev"])
        findings.append(
            _finding(
                name,
                "stddev_rel_change",
                base_prof["stddev"],
                cur_prof["stddev"],
                std_change,
                _banded_status(std_change, cfg.rel_change_warn, cfg.rel_change_alert),
            )
        )
    return findings


def _categorical_psi(
    name: str, base_prof: dict, cur_prof: dict, cfg: DriftConfig
) -> Optional[Finding]:
    if base_prof["count"] <= 0 or cur_prof["count"] <= 0:
        return None
    # Axis: baseline top-k categories plus one "other" bucket. Current
    # values outside the axis fall into "other" by subtraction, so both
    # vectors conserve their totals.
    axis = list(base_prof["frequencies"])
    base_counts = [base_prof["frequencies"][v] for v in axis]
    base_counts.append(base_prof["other_count"])
    cur_hits = [cur_prof["frequencies"].get(v, 0) for v in axis]
    cur_counts = cur_hits + [cur_prof["count"] - sum(cur_hits)]
    score = psi(base_counts, cur_counts, cfg.psi_smoothing_eps)
    return _finding(
        name,
        "psi",
        float(base_prof["count"]),
        float(cur_prof["count"]),
        score,
        _banded_status(score, cfg.psi_warn, cfg.psi_alert),
    )


def _missing_rate_check(
    name: str, base: Summary, cur: Summary, cfg: DriftConfig
) -> Finding:
    base_rate = _missing_rate(base["features"][name], base["record_count"])
    cur_rate = _missing_rate(cur["features"][name], cur["record_count"])
    delta = abs(cur_rate - base_rate)
    status = ALERT if delta > cfg.missing_rate_delta_alert else OK
    return _finding(name, "missing_rate_delta", base_rate, cur_rate, delta, status)


def compare(base: Summary, cur: Summary, cfg: DriftConfig) -> Report:
    """Compare two summaries and assemble the drift report.

    Shared features are checked per kind (when the kind matches on both
    sides): numerical features get psi, mean and stddev relative change,
    and missing-rate delta; categorical features get psi and missing-rate
    delta; text features get missing-rate delta only. Schema findings are
    produced by schema_diff and do not count toward the drift budget.
    """
    findings = schema_diff(base, cur)
    shared = [n for n in base["schema"] if n in cur["schema"]]
    for name in shared:
        base_kind = base["schema"][name]
        if base_kind != cur["schema"][name]:
            continue  # kind_changed already reported; profiles not comparable
        base_prof = base["features"][name]
        cur_prof = cur["features"][name]
        if base_kind == "numerical":
            findings.extend(_numeric_checks(name, base_prof, cur_prof, cfg))
        elif base_kind == "categorical":
            psi_finding = _categorical_psi(name, base_prof, cur_prof, cfg)
            if psi_finding is not None:
                findings.append(psi_finding)
        findings.append(_missing_rate_check(name, base, cur, cfg))

    findings.sort(key=lambda f: (f["feature"], f["check"]))

    checks = [f for f in findings if f["check"] not in SCHEMA_CHECKS]
    checks_total = len(checks)
    alerts_total = sum(1 for f in checks if f["status"] == ALERT)
    warns_total = sum(1 for f in checks if f["status"] == WARN)
    overall = 100.0 * alerts_total / checks_total if checks_total > 0 else 0.0

    breaking = any(
        f["check"] in BREAKING_SCHEMA_CHECKS and f["status"] == ALERT for f in findings
    )
    verdict = "fail" if overall > cfg.overall_drift_accepted_pct or breaking else "pass"

    report: Report = {
        "report_id": "",
        "baseline_id": base["summary_id"],
        "current_summary_id": cur["summary_id"],
        "findings": findings,
        "checks_total": checks_total,
        "alerts_total": alerts_total,
        "warns_total": warns_total,
        "overall_drift_pct": overall,
        "accepted_pct": cfg.overall_drift_accepted_pct,
        "verdict": verdict,
        "created_at": utc_now(),
    }
    report["report_id"] = hash_without(report, "report_id", "created_at")
    return report
