"""Model version registry: lineage, metrics, and statistical comparison.

Each logged version records parameters, feature inputs, metric values, and
links to the parent versions it was derived from. Parents must already
exist and always carry smaller numbers, so the lineage graph is acyclic by
construction and version order is a topological order.

Metric values come in three shapes:

    scalar      one number; ranking only, no significance testing
    samples     per-fold/per-run scores; compared with Welch's t-test
    proportion  successes/trials; compared with the pooled z-test

A/B/n comparison runs the shape-appropriate test on every pair and applies
a Bonferroni-adjusted significance level (alpha / number of pairs). The
winner is simply the best mean under the requested direction; significance
is reported alongside rather than gating the choice.
"""

from __future__ import annotations

import re
from itertools import combinations
from typing import Any, Optional, Sequence

from .config import DriftConfig
from .drift import relative_change
from .errors import ConflictError, NotFoundError, SemanticError
from .stats import TestResult, mean, two_proportion_test, welch_t_test
from .store import Store
from .summarize import utc_now

_MODEL_NAME_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]{0,127}$")

SCALAR, SAMPLES, PROPORTION = "scalar", "samples", "proportion"

VersionDoc = dict[str, Any]


def normalize_metric_value(value: Any) -> dict[str, Any]:
    """Accept convenient metric forms and return the tagged document.

    number                      -> scalar
    [x, y, ...]                 -> samples
    {"successes", "trials"}     -> proportion
    {"kind": ...}               -> already tagged; validated
    """
    if isinstance(value, bool):
        raise SemanticError(f"metric value {value!r} is not numeric")
    if isinstance(value, (int, float)):
        return {"kind": SCALAR, "value": float(value)}
    if isinstance(value, list):
        if not value:
            raise SemanticError("samples metric must be a nonempty list")
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            raise SemanticError("samples metric must contain only numbers")
        return {"kind": SAMPLES, "values": [float(v) for v in value]}
    if isinstance(value, dict):
        tagged = dict(value)
        if "kind" not in tagged:
            if set(tagged) == {"successes", "trials"}:
                tagged["kind"] = PROPORTION
            else:
                raise SemanticError(f"metric value {value!r} has no recognizable shape")
        kind = tagged["kind"]
        if kind == SCALAR:
            if set(tagged) != {"kind", "value"}:
                raise SemanticError("scalar metric must have exactly a 'value' field")
            return normalize_metric_value(tagged["value"])
        if kind == SAMPLES:
            if set(tagged) != {"kind", "values"}:
                raise SemanticError("samples metric must have exactly a 'values' field")
            return normalize_metric_value(list(tagged["values"]))
        if kind == PROPORTION:
            if set(tagged) != {"kind", "successes", "trials"}:
                raise SemanticError("proportion metric must have successes and trials")
            successes, trials = tagged["successes"], tagged["trials"]
            if not isinstance(successes, int) or not isinstance(trials, int):
                raise SemanticError("proportion successes/trials must be integers")
            if not 0 <= successes <= trials or trials < 1:
                raise SemanticError(
                    f"proportion needs trials >= successes >= 0 and trials >= 1, "
                    f"got {successes}/{trials}"
                )
            return {"kind": PROPORTION, "successes": successes, "trials": trials}
        raise SemanticError(f"unknown metric kind: {kind!r}")
    raise SemanticError(f"metric value {value!r} has no recognizable shape")


def metric_mean_and_n(value: dict[str, Any]) -> tuple[float, int]:
    kind = value["kind"]
    if kind == SCALAR:
        return value["value"], 1
    if kind == SAMPLES:
        return mean(value["values"]), len(value["values"])
    if kind == PROPORTION:
        return value["successes"] / value["trials"], value["trials"]
    raise SemanticError(f"unknown metric kind: {kind!r}")


def _validate_model_name(model_name: str) -> None:
    if not model_name:
        raise SemanticError("model name must be non-empty")
    if not _MODEL_NAME_RE.match(model_name):
        raise SemanticError(
            f"model name {model_name!r} must match [A-Za-z0-9][A-Za-z0-9._-]*"
        )


_DRAFT_KEYS = {"parent_versions", "params", "feature_inputs", "metrics", "tags"}


def _clean_draft(draft: dict[str, Any]) -> dict[str, Any]:
    unknown = set(draft) - _DRAFT_KEYS
    if unknown:
        raise SemanticError(f"unknown version fields: {sorted(unknown)}")

    parents = draft.get("parent_versions", [])
    if not isinstance(parents, list) or not all(
        isinstance(p, int) and not isinstance(p, bool) for p in parents
    ):
        raise SemanticError("parent_versions must be a list of integers")

    params = draft.get("params", {})
    tags = draft.get("tags", {})
    for field_name, mapping in (("params", params), ("tags", tags)):
        if not isinstance(mapping, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in mapping.items()
        ):
            raise SemanticError(f"{field_name} must map strings to strings")

    features = draft.get("feature_inputs", [])
    if not isinstance(features, list) or not all(isinstance(f, str) for f in features):
        raise SemanticError("feature_inputs must be a list of feature names")

    raw_metrics = draft.get("metrics", {})
    if not isinstance(raw_metrics, dict):
        raise SemanticError("metrics must be an object")
    metrics = {}
    for name, value in raw_metrics.items():
        if not isinstance(name, str) or not name:
            raise SemanticError("metric names must be non-empty strings")
        metrics[name] = normalize_metric_value(value)

    return {
        "parent_versions": sorted(set(parents)),
        "params": dict(params),
        "feature_inputs": list(features),
        "metrics": metrics,
        "tags": dict(tags),
    }


def log_version(store: Store, model_name: str, draft: dict[str, Any]) -> VersionDoc:
    """Persist a new version with the next number for this model.

    Parents must already exist; the assigned number is unique even under
    concurrent writers (exclusive file claim with retry).
    """
    _validate_model_name(model_name)
    clean = _clean_draft(draft)
    with store.model_lock(model_name):
        while True:
            existing = store.version_numbers(model_name)
            known = set(existing)
            for parent in clean["parent_versions"]:
                if parent not in known:
                    raise ConflictError(
                        f"unknown parent version {parent} for model {model_name!r}"
                    )
            version = (existing[-1] + 1) if existing else 1
            doc: VersionDoc = {
                "model_name": model_name,
                "version": version,
                "created_at": utc_now(),
                **clean,
            }
            if store.claim_version(model_name, version, doc):
                return doc
            # another process claimed the number; rescan and retry


def list_versions(store: Store, model_name: str) -> list[VersionDoc]:
    _validate_model_name(model_name)
    if not store.model_exists(model_name):
        raise NotFoundError(f"unknown model: {model_name!r}")
    return [store.get_version(model_name, n) for n in store.version_numbers(model_name)]


def get_lineage(store: Store, model_name: str) -> dict[str, Any]:
    """Versions plus parent->child edges; version order is topological."""
    versions = list_versions(store, model_name)
    edges = []
    for doc in versions:
        for parent in doc["parent_versions"]:
            edges.append([parent, doc["version"]])
            if parent >= doc["version"]:
                raise SemanticError(
                    f"corrupt lineage: parent {parent} not older than {doc['version']}"
                )
    return {
        "model_name": model_name,
        "versions": [doc["version"] for doc in versions],
        "edges": sorted(edges),
    }


def _metric_or_raise(doc: VersionDoc, metric: str) -> dict[str, Any]:
    value = doc["metrics"].get(metric)
    if value is None:
        raise SemanticError(
            f"version {doc['version']} of model {doc['model_name']!r} "
            f"has no metric {metric!r}"
        )
    return value


def _rank_key(direction: str):
    if direction not in ("max", "min"):
        raise SemanticError(f"direction must be 'max' or 'min', got {direction!r}")

    def key(item: tuple[int, float]):
        version, value = item
        primary = -value if direction == "max" else value
        return (primary, version)  # ties break toward the lowest version

    return key


def _pairwise_test(shape: str, va: dict, vb: dict) -> TestResult:
    if shape == SAMPLES:
        return welch_t_test(va["values"], vb["values"])
    return two_proportion_test(
        va["successes"], va["trials"], vb["successes"], vb["trials"]
    )


def compare_versions(
    store: Store,
    model_name: str,
    metric: str,
    versions: Sequence[int],
    direction: str,
    cfg: DriftConfig,
) -> dict[str, Any]:
    """A/B/n comparison of the named versions on one metric.

    All values must share one shape. Samples and proportions get pairwise
    tests with Bonferroni correction; scalars are ranked without tests and
    can never be significant.
    """
    _validate_model_name(model_name)
    if len(versions) < 2:
        raise SemanticError("compare_versions needs at least two versions")
    if len(set(versions)) != len(versions):
        raise SemanticError("compare_versions received duplicate versions")
    if not store.model_exists(model_name):
        raise NotFoundError(f"unknown model: {model_name!r}")

    docs = {v: store.get_version(model_name, v) for v in versions}
    values = {v: _metric_or_raise(docs[v], metric) for v in versions}
    shapes = {value["kind"] for value in values.values()}
    if len(shapes) > 1:
        raise SemanticError(f"mixed metric shapes for {metric!r}: {sorted(shapes)}")
    shape = shapes.pop()

    stats = {v: metric_mean_and_n(values[v]) for v in versions}
    ranked = sorted(((v, stats[v][0]) for v in versions), key=_rank_key(direction))
    winner = ranked[0][0]
    runner_up = ranked[1][0]

    pairs = list(combinations(sorted(versions), 2))
    pairwise: dict[str, Any] = {}
    significant = False
    alpha_adjusted = cfg.alpha / len(pairs) if shape != SCALAR else cfg.alpha
    if shape != SCALAR:
        results = {}
        for va, vb in pairs:
            result = _pairwise_test(shape, values[va], values[vb])
            results[(va, vb)] = result
            pairwise[f"{va},{vb}"] = result.to_doc()
        decisive = results[(min(winner, runner_up), max(winner, runner_up))]
        significant = decisive.p_value < alpha_adjusted

    return {
        "model_name": model_name,
        "metric": metric,
        "direction": direction,
        "versions": list(versions),
        "per_version": {
            str(v): {"mean": stats[v][0], "n": stats[v][1]} for v in versions
        },
        "pairwise": pairwise,
        "alpha_adjusted": alpha_adjusted,
        "winner": winner,
        "significant": significant,
    }


def best_version(store: Store, model_name: str, metric: str, direction: str) -> int:
    """Version with the best mean for the metric across all that carry it."""
    candidates = [
        (doc["version"], metric_mean_and_n(doc["metrics"][metric])[0])
        for doc in list_versions(store, model_name)
        if metric in doc["metrics"]
    ]
    if not candidates:
        raise SemanticError(f"no version of model {model_name!r} has metric {metric!r}")
    return sorted(candidates, key=_rank_key(direction))[0][0]


def detect_metric_degradation(
    history: Sequence[tuple[int, float]],
    cfg: DriftConfig,
    direction: str = "max",
) -> list[dict[str, Any]]:
    """Flag entries that degraded beyond tolerance versus the first entry.

    History is (version, scalar metric) in version order; for max-metrics a
    drop is adverse, for min-metrics a rise. Improvements are never flagged.
    """
    if direction not in ("max", "min"):
        raise SemanticError(f"direction must be 'max' or 'min', got {direction!r}")
    if not history:
        raise SemanticError("degradation check needs a nonempty history")
    baseline_version, baseline_value = history[0]
    findings = []
    for version, value in history[1:]:
        adverse = value < baseline_value if direction == "max" else value > baseline_value
        change = relative_change(baseline_value, value)
        if adverse and change > cfg.degradation_tolerance:
            findings.append(
                {
                    "version": version,
                    "baseline_version": baseline_version,
                    "baseline_value": baseline_value,
                    "current_value": value,
                    "rel_change": change,
                }
            )
    return findings
