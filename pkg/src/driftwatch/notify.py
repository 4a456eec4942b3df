"""Webhook delivery of alert envelopes.

A report worth paging about (any alert finding, or a fail verdict) is
pushed as one JSON envelope to the configured URL. Delivery is best
effort: transient failures (network errors, 5xx) are retried up to three
times with 1s/2s/4s backoff, everything else fails fast, and no outcome
ever aborts the validation run that produced the report.
"""

from __future__ import annotations

import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Any, Callable, Optional

from .canon import canonical_bytes
from .config import DriftConfig
from .drift import Report
from .summarize import utc_now

MAX_RETRIES = 3
BACKOFF_SECONDS = (1.0, 2.0, 4.0)
ATTEMPT_TIMEOUT_SECONDS = 5.0

DELIVERED, SKIPPED, FAILED = "delivered", "skipped", "failed"


@dataclass(frozen=True)
class DeliveryOutcome:
    status: str  # delivered | skipped | failed
    attempts: int
    reason: Optional[str] = None


def alert_envelope(report: Report) -> dict[str, Any]:
    """Minimal notification body; receivers fetch the full report by id."""
    return {
        "report_id": report["report_id"],
        "verdict": report["verdict"],
        "overall_drift_pct": report["overall_drift_pct"],
        "alerts": [
            {"feature": f["feature"], "check": f["check"], "score": f["score"]}
            for f in report["findings"]
            if f["status"] == "alert"
        ],
        "emitted_at": utc_now(),
    }


def _post(url: str, body: bytes, timeout: float) -> int:
    request = urllib.request.Request(
        url,
        data=body,
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    with urllib.request.urlopen(request, timeout=timeout) as response:
        return response.status


def emit_alerts(
    report: Report,
    cfg: DriftConfig,
    sleeper: Callable[[float], None] = time.sleep,
) -> DeliveryOutcome:
    """Deliver the alert envelope for a report, if it warrants one.

    No-op without a notify_url or when the report is a clean pass. Never
    raises: failures come back as a FAILED outcome with the reason.
    """
    if not cfg.notify_url:
        return DeliveryOutcome(SKIPPED, attempts=0, reason="no notify_url configured")
    has_alerts = any(f["status"] == "alert" for f in report["findings"])
    if not has_alerts and report["verdict"] != "fail":
        return DeliveryOutcome(SKIPPED, attempts=0, reason="nothing to report")

    body = canonical_bytes(alert_envelope(report))
    attempts = 0
    last_reason = "unknown"
    while attempts <= MAX_RETRIES:
        attempts += 1
        retryable = False
        try:
            status = _post(cfg.notify_url, body, ATTEMPT_TIMEOUT_SECONDS)
            if 200 <= status < 300:
                return DeliveryOutcome(DELIVERED, attempts=attempts)
            last_reason = f"unexpected status {status}"
        except urllib.error.HTTPError as exc:
            last_reason = f"status {exc.code}"
            retryable = 500 <= exc.code < 600
        except (urllib.error.URLError, TimeoutError, OSError) as exc:
            last_reason = f"network error: {exc}"
            retryable = True
        if not retryable or attempts > MAX_RETRIES:
            break
        sleeper(BACKOFF_SECONDS[attempts - 1])
    return DeliveryOutcome(FAILED, attempts=attempts, reason=last_reason)
