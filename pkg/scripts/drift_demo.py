#!/usr/bin/env python3
"""End-to-end walkthrough on synthetic data, no server required.

Simulates a transaction stream whose amount distribution slides upward
batch by batch, validates each batch against the day-one baseline, and
logs three model versions to show registry comparison. Useful as a smoke
test and as executable documentation:

    python scripts/drift_demo.py
"""

from __future__ import annotations

import random
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from driftwatch.config import load_config
from driftwatch.pipeline import profile_table, validate_table
from driftwatch.registry import best_version, compare_versions, log_version
from driftwatch.render import render_report
from driftwatch.store import Store
from driftwatch.table import Table


def synth_batch(rng: random.Random, rows: int, amount_mean: float) -> Table:
    columns = {
        "amount": [
            None if rng.random() < 0.02 else f"{rng.gauss(amount_mean, 12.0):.2f}"
            for _ in range(rows)
        ],
        "channel": [rng.choice(["web", "app", "store"]) for _ in range(rows)],
    }
    return Table(names=("amount", "channel"), columns=columns, row_count=rows)


def main() -> None:
    cfg = load_config(None)
    rng = random.Random(7)

    baseline = profile_table(synth_batch(rng, 2000, amount_mean=80.0), cfg)
    print(f"baseline profiled: id={baseline['summary_id']} "
          f"records={baseline['record_count']}\n")

    for day, shift in enumerate((0.0, 4.0, 12.0, 36.0), start=1):
        batch = synth_batch(rng, 2000, amount_mean=80.0 + shift)
        report, _ = validate_table(baseline, batch, cfg)
        print(f"--- day {day} (mean shift +{shift:g})")
        print(render_report(report, "text").decode())

    with tempfile.TemporaryDirectory() as root:
        store = Store(root)
        for accuracy in ([0.81, 0.80, 0.83], [0.84, 0.86, 0.85], [0.84, 0.83, 0.86]):
            log_version(store, "scorer", {"metrics": {"accuracy": accuracy}})
        comparison = compare_versions(store, "scorer", "accuracy", [1, 2, 3], "max", cfg)
        print("registry comparison on accuracy:")
        print(f"  winner: v{comparison['winner']} "
              f"(significant={comparison['significant']}, "
              f"alpha_adjusted={comparison['alpha_adjusted']:.4f})")
        print(f"  best by mean: v{best_version(store, 'scorer', 'accuracy', 'max')}")


if __name__ == "__main__":
    main()
