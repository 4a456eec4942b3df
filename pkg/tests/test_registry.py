import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from driftwatch.config import load_config, merge_overrides
from driftwatch.errors import ConflictError, NotFoundError, SemanticError
from driftwatch.registry import (
    best_version,
    compare_versions,
    detect_metric_degradation,
    get_lineage,
    list_versions,
    log_version,
    normalize_metric_value,
)


def test_first_log_gets_version_one(store):
    record = log_version(store, "churn", {"params": {"lr": "0.1"}})
    assert record["version"] == 1
    assert record["parent_versions"] == []
    assert record["model_name"] == "churn"


def test_versions_are_assigned_sequentially(store):
    log_version(store, "churn", {})
    second = log_version(store, "churn", {"parent_versions": [1]})
    assert second["version"] == 2
    assert second["parent_versions"] == [1]


def test_unknown_parent_rejected(store):
    log_version(store, "churn", {})
    log_version(store, "churn", {})
    with pytest.raises(ConflictError, match="parent version 7"):
        log_version(store, "churn", {"parent_versions": [7]})


def test_bad_model_names_rejected(store):
    with pytest.raises(SemanticError):
        log_version(store, "", {})
    with pytest.raises(SemanticError):
        log_version(store, "../escape", {})


def test_bad_drafts_rejected(store):
    with pytest.raises(SemanticError, match="unknown version fields"):
        log_version(store, "m", {"version": 9})
    with pytest.raises(SemanticError, match="params"):
        log_version(store, "m", {"params": {"k": 1}})
    with pytest.raises(SemanticError, match="metric names"):
        log_version(store, "m", {"metrics": {"": 1.0}})


def test_lineage_shapes(store):
    log_version(store, "m", {})
    assert get_lineage(store, "m") == {"model_name": "m", "versions": [1], "edges": []}

    log_version(store, "m", {"parent_versions": [1]})
    log_version(store, "m", {"parent_versions": [1, 2]})
    lineage = get_lineage(store, "m")
    assert lineage["versions"] == [1, 2, 3]
    assert lineage["edges"] == [[1, 2], [1, 3], [2, 3]]
    # merge node 3 has in-degree 2
    assert sum(1 for edge in lineage["edges"] if edge[1] == 3) == 2


def test_lineage_unknown_model(store):
    with pytest.raises(NotFoundError):
        get_lineage(store, "ghost")
    with pytest.raises(NotFoundError):
        list_versions(store, "ghost")


def test_metric_value_normalization():
    assert normalize_metric_value(0.5) == {"kind": "scalar", "value": 0.5}
    assert normalize_metric_value([1, 2]) == {"kind": "samples", "values": [1.0, 2.0]}
    assert normalize_metric_value({"successes": 3, "trials": 10}) == {
        "kind": "proportion",
        "successes": 3,
        "trials": 10,
    }
    assert normalize_metric_value({"kind": "scalar", "value": 2}) == {
        "kind": "scalar",
        "value": 2.0,
    }
    for bad in ([], {"successes": 11, "trials": 10}, {"kind": "mystery"}, "x", True):
        with pytest.raises(SemanticError):
            normalize_metric_value(bad)


def test_compare_identical_samples_ties_to_lower_version(store, cfg):
    for _ in range(2):
        log_version(store, "m", {"metrics": {"acc": [0.8, 0.9, 0.85]}})
    result = compare_versions(store, "m", "acc", [1, 2], "max", cfg)
    assert result["winner"] == 1
    assert result["significant"] is False
    assert result["pairwise"]["1,2"]["p_value"] == 1.0


def test_compare_welch_example(store, cfg):
    log_version(store, "m", {"metrics": {"acc": [2, 3, 4, 5, 6]}})
    log_version(store, "m", {"metrics": {"acc": [1, 2, 3, 4, 5]}})
    result = compare_versions(store, "m", "acc", [1, 2], "max", cfg)
    assert result["winner"] == 1
    assert result["pairwise"]["1,2"]["p_value"] == pytest.approx(0.34659, abs=1e-5)
    assert result["significant"] is False
    assert result["alpha_adjusted"] == pytest.approx(0.05)
    assert result["per_version"]["1"] == {"mean": 4.0, "n": 5}


def test_compare_three_versions_bonferroni(store, cfg):
    for shift in (0.0, 0.1, 5.0):
        log_version(
            store, "m", {"metrics": {"acc": [shift + x for x in (1, 2, 3, 4, 5)]}}
        )
    result = compare_versions(store, "m", "acc", [1, 2, 3], "max", cfg)
    assert result["alpha_adjusted"] == pytest.approx(0.05 / 3)
    assert set(result["pairwise"]) == {"1,2", "1,3", "2,3"}
    assert result["winner"] == 3
    # decisive pair is winner (3) vs runner-up (2)
    assert result["significant"] == (
        result["pairwise"]["2,3"]["p_value"] < 0.05 / 3
    )
    assert result["significant"] is True


def test_compare_proportions(store, cfg):
    log_version(store, "m", {"metrics": {"ctr": {"successes": 60, "trials": 100}}})
    log_version(store, "m", {"metrics": {"ctr": {"successes": 50, "trials": 100}}})
    result = compare_versions(store, "m", "ctr", [1, 2], "max", cfg)
    assert result["winner"] == 1
    assert result["pairwise"]["1,2"]["p_value"] == pytest.approx(0.1553, abs=1e-3)
    assert result["pairwise"]["1,2"]["method"] == "two_proportion_z"
    assert result["per_version"]["1"] == {"mean": 0.6, "n": 100}


def test_compare_scalars_rank_without_tests(store, cfg):
    log_version(store, "m", {"metrics": {"rmse": 1.5}})
    log_version(store, "m", {"metrics": {"rmse": 1.2}})
    result = compare_versions(store, "m", "rmse", [1, 2], "min", cfg)
    assert result["winner"] == 2
    assert result["pairwise"] == {}
    assert result["significant"] is False


def test_compare_rejects_bad_requests(store, cfg):
    log_version(store, "m", {"metrics": {"a": 1.0, "s": [1, 2]}})
    log_version(store, "m", {"metrics": {"a": [1, 2], "s": [2, 3]}})
    with pytest.raises(SemanticError, match="at least two"):
        compare_versions(store, "m", "a", [1], "max", cfg)
    with pytest.raises(SemanticError, match="duplicate"):
        compare_versions(store, "m", "a", [1, 1], "max", cfg)
    with pytest.raises(SemanticError, match="mixed metric shapes"):
        compare_versions(store, "m", "a", [1, 2], "max", cfg)
    with pytest.raises(SemanticError, match="no metric"):
        compare_versions(store, "m", "missing", [1, 2], "max", cfg)
    with pytest.raises(NotFoundError):
        compare_versions(store, "ghost", "a", [1, 2], "max", cfg)
    with pytest.raises(NotFoundError):
        compare_versions(store, "m", "s", [1, 9], "max", cfg)
    with pytest.raises(SemanticError, match="direction"):
        compare_versions(store, "m", "s", [1, 2], "sideways", cfg)


def test_best_version_rules(store):
    log_version(store, "m", {"metrics": {"acc": 0.8}})
    assert best_version(store, "m", "acc", "max") == 1

    log_version(store, "m", {"metrics": {"acc": 0.9}})
    assert best_version(store, "m", "acc", "max") == 2
    assert best_version(store, "m", "acc", "min") == 1

    log_version(store, "m", {"metrics": {"acc": 0.9}})  # tie with v2
    assert best_version(store, "m", "acc", "max") == 2  # lowest version wins ties

    log_version(store, "m", {"metrics": {"other": 1.0}})
    assert best_version(store, "m", "acc", "max") == 2  # skips versions without it
    with pytest.raises(SemanticError, match="no version"):
        best_version(store, "m", "nope", "max")


def test_best_version_mixes_shapes_by_mean(store):
    log_version(store, "m", {"metrics": {"acc": [0.7, 0.9]}})
    log_version(store, "m", {"metrics": {"acc": {"successes": 85, "trials": 100}}})
    assert best_version(store, "m", "acc", "max") == 2


@settings(deadline=None, max_examples=50)
@given(
    # coarse grid keeps mean differences far above float rounding after
    # the affine transform, so argbest is exactly preserved
    st.lists(st.integers(-1000, 1000).map(lambda i: i / 10.0), min_size=1, max_size=8),
    st.floats(0.01, 50),
    st.floats(-100, 100),
)
def test_best_version_affine_invariance(means, scale, offset):
    import tempfile

    from driftwatch.store import Store

    with tempfile.TemporaryDirectory() as root:
        store_a = Store(f"{root}/a")
        store_b = Store(f"{root}/b")
        for m in means:
            log_version(store_a, "m", {"metrics": {"x": m}})
            log_version(store_b, "m", {"metrics": {"x": scale * m + offset}})
        assert best_version(store_a, "m", "x", "max") == best_version(
            store_b, "m", "x", "max"
        )


def test_degradation_flags_only_adverse_changes(cfg):
    assert detect_metric_degradation([(1, 0.90), (2, 0.90), (3, 0.90)], cfg) == []

    findings = detect_metric_degradation([(1, 0.90), (2, 0.78)], cfg)
    assert len(findings) == 1
    assert findings[0]["version"] == 2
    assert findings[0]["rel_change"] == pytest.approx(abs(0.78 - 0.90) / 0.90)

    assert detect_metric_degradation([(1, 0.90), (2, 0.95)], cfg) == []


def test_degradation_direction_min(cfg):
    findings = detect_metric_degradation([(1, 1.0), (2, 1.2)], cfg, direction="min")
    assert len(findings) == 1
    assert detect_metric_degradation([(1, 1.0), (2, 0.5)], cfg, direction="min") == []


def test_degradation_tolerance_is_strict(cfg):
    exact = merge_overrides(cfg, {"degradation_tolerance": 0.10})
    assert detect_metric_degradation([(1, 1.0), (2, 0.9)], exact) == []  # exactly 10%
    assert len(detect_metric_degradation([(1, 1.0), (2, 0.89)], exact)) == 1


def test_degradation_empty_history_rejected(cfg):
    with pytest.raises(SemanticError):
        detect_metric_degradation([], cfg)
