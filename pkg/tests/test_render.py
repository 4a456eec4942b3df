import json

import pytest

from driftwatch.drift import compare
from driftwatch.errors import DriftwatchError
from driftwatch.kinds import categorize_features
from driftwatch.pipeline import profile_table, validate_table
from driftwatch.render import render_report
from driftwatch.summarize import summarize
from driftwatch.table import Table


def make_table(**columns):
    names = tuple(columns)
    rows = len(next(iter(columns.values()))) if columns else 0
    return Table(names=names, columns={k: list(v) for k, v in columns.items()}, row_count=rows)


@pytest.fixture
def pass_report(cfg):
    table = make_table(x=["1", "2", "3"])
    summary = summarize(table, categorize_features(table, cfg), cfg)
    return compare(summary, summary, cfg)


@pytest.fixture
def fail_report(cfg):
    base = make_table(x=[str(i) for i in range(1, 101)])
    cur = make_table(x=[str(i + 60) for i in range(1, 101)])
    baseline = profile_table(base, cfg)
    report, _ = validate_table(baseline, cur, cfg)
    assert report["verdict"] == "fail"
    return report


def test_text_pass_report_is_header_only(cfg):
    table = make_table(x=[])
    summary = summarize(table, categorize_features(table, cfg), cfg)
    report = compare(summary, summary, cfg)
    text = render_report(report, "text").decode()
    lines = text.splitlines()
    assert len(lines) == 1
    assert lines[0].startswith(f"DRIFT REPORT {report['report_id']} — PASS")
    assert "budget 20%" in lines[0]


def test_text_elides_ok_findings(pass_report):
    text = render_report(pass_report, "text").decode()
    assert len(text.splitlines()) == 1  # all findings are ok
    assert "ok" not in text


def test_json_render_round_trips(fail_report):
    rendered = render_report(fail_report, "json")
    assert json.loads(rendered) == fail_report


def test_alert_lines_match_alert_findings(fail_report):
    text = render_report(fail_report, "text").decode()
    alert_lines = [l for l in text.splitlines() if l.startswith("ALERT")]
    alert_findings = [f for f in fail_report["findings"] if f["status"] == "alert"]
    assert len(alert_lines) == len(alert_findings)
    assert text.splitlines()[0].startswith(f"DRIFT REPORT {fail_report['report_id']} — FAIL")


def test_finding_line_layout(fail_report):
    text = render_report(fail_report, "text").decode()
    mean_line = next(l for l in text.splitlines() if "mean_rel_change" in l)
    status, feature, check, base, cur, score = mean_line.split(" ")
    assert status in {"WARN", "ALERT"}
    assert feature == "x"
    assert check == "mean_rel_change"
    assert base.startswith("base=") and cur.startswith("cur=") and score.startswith("score=")


def test_rendering_is_byte_stable(fail_report):
    assert render_report(fail_report, "text") == render_report(fail_report, "text")
    assert render_report(fail_report, "json") == render_report(fail_report, "json")


def test_unknown_format_rejected(pass_report):
    with pytest.raises(DriftwatchError):
        render_report(pass_report, "yaml")
