"""Report rendering for machines (canonical JSON) and operators (text)."""

from __future__ import annotations

from .canon import canonical_bytes
from .drift import Report
from .errors import DriftwatchError


def _num(value: float) -> str:
    """Compact numeric formatting for operator output."""
    text = f"{value:.6g}"
    return text


def _pct(value: float) -> str:
    text = f"{value:.2f}".rstrip("0").rstrip(".")
    return text or "0"


def _value(value) -> str:
    if isinstance(value, float):
        return _num(value)
    if value is None:
        return "null"
    return str(value)


def render_report(report: Report, format: str = "json") -> bytes:
    """Render a drift report.

    json: the canonical document, byte-stable for identical reports.
    text: one header line, then one line per warn/alert finding (ok
    findings are elided to keep operator output short).
    """
    if format == "json":
        return canonical_bytes(report)
    if format != "text":
        raise DriftwatchError(f"unsupported render format: {format!r}")

    lines = [
        "DRIFT REPORT {id} — {verdict} ({pct}% drift, budget {budget}%)".format(
            id=report["report_id"],
            verdict=report["verdict"].upper(),
            pct=_pct(report["overall_drift_pct"]),
            budget=_pct(report["accepted_pct"]),
        )
    ]
    for finding in report["findings"]:
        if finding["status"] == "ok":
            continue
        lines.append(
            "{status} {feature} {check} base={base} cur={cur} score={score}".format(
                status=finding["status"].upper(),
                feature=finding["feature"],
                check=finding["check"],
                base=_value(finding["baseline_value"]),
                cur=_value(finding["current_value"]),
                score=_num(finding["score"]),
            )
        )
    return ("\n".join(lines) + "\n").encode("utf-8")
