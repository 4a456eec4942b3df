#!/usr/bin/env python3
"""Regenerate the deterministic CSV fixtures under tests/fixtures/.

The pair models one obvious production incident: the `amount` feature's
mean moves up by three baseline standard deviations while `segment` and
`notes` keep their distributions. Everything is seeded, so the files (and
the golden report derived from them) are bit-reproducible.

Run from the repository root:

    python scripts/make_fixtures.py [--golden]

--golden also rebuilds tests/fixtures/golden_report.json by running the
profile + validate pipeline on the freshly written pair and stripping the
volatile created_at field.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "tests" / "fixtures"

ROWS = 600
SEED_BASELINE = 20240501
SEED_DRIFTED = 20240502

SEGMENTS = ["retail", "business", "enterprise"]
SEGMENT_WEIGHTS = [5, 3, 2]


def write_dataset(path: Path, seed: int, amount_mean: float) -> None:
    rng = random.Random(seed)
    lines = ["amount,segment,notes"]
    for _ in range(ROWS):
        amount = "" if rng.random() < 0.02 else f"{rng.gauss(amount_mean, 15.0):.2f}"
        segment = rng.choices(SEGMENTS, weights=SEGMENT_WEIGHTS)[0]
        notes = "" if rng.random() < 0.10 else f"note-{rng.randrange(1_000_000):06d}"
        lines.append(f"{amount},{segment},{notes}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def rebuild_golden() -> None:
    sys.path.insert(0, str(REPO_ROOT / "src"))
    from driftwatch.canon import canonical_bytes
    from driftwatch.config import load_config
    from driftwatch.pipeline import profile_table, validate_table
    from driftwatch.table import read_table_file

    cfg = load_config(None)
    baseline = profile_table(read_table_file(str(FIXTURES / "baseline.csv")), cfg)
    report, _ = validate_table(
        baseline, read_table_file(str(FIXTURES / "drifted.csv")), cfg
    )
    stable = {k: v for k, v in report.items() if k != "created_at"}
    (FIXTURES / "golden_report.json").write_bytes(canonical_bytes(stable))
    print(f"golden report: verdict={report['verdict']} "
          f"drift={report['overall_drift_pct']:.2f}% id={report['report_id']}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--golden", action="store_true",
                        help="also rebuild golden_report.json")
    args = parser.parse_args()

    FIXTURES.mkdir(parents=True, exist_ok=True)
    write_dataset(FIXTURES / "baseline.csv", SEED_BASELINE, amount_mean=100.0)
    write_dataset(FIXTURES / "drifted.csv", SEED_DRIFTED, amount_mean=145.0)
    print(f"wrote {FIXTURES / 'baseline.csv'} and {FIXTURES / 'drifted.csv'} "
          f"({ROWS} rows each)")
    if args.golden:
        rebuild_golden()


if __name__ == "__main__":
    main()
