#!/usr/bin/env python3
"""Run the conflict-resolution evaluation over the bundled model suite.

For every model this samples configurations at several disable
probabilities, generates five conflicts per size 1-10 against each
sample, resolves them, applies every returned fix, and classifies the
outcomes.  Writes one CSV per model plus a combined summary table.

Usage: python3 scripts/run_eval.py [--out-dir results] [--seed N]
       [--p-no 0.2,0.5,0.8]
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from kfix.harness import FixOutcome, SampleParams, run_evaluation
from kfix.kconfig import load_model

SUITE = ["media", "arch", "modules", "choices", "nonbool", "deep", "kitchen"]


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--p-no", default="0.2,0.5,0.8")
    parser.add_argument("--models", default=",".join(SUITE))
    args = parser.parse_args()

    root = Path(__file__).resolve().parent.parent
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    p_nos = [float(p) for p in args.p_no.split(",") if p]

    total_generated = total_fixes = total_dnr = 0
    for name in args.models.split(","):
        model = load_model(str(root / "models" / name / "Kconfig"))
        params = [
            SampleParams(p_no=p, seed=args.seed + i, model_id=name)
            for i, p in enumerate(p_nos)
        ]
        t0 = time.time()
        report = run_evaluation(model, params)
        elapsed = time.time() - t0
        csv_path = out_dir / f"{name}.csv"
        csv_path.write_text("\n".join(report.csv_rows()) + "\n")
        counts = report.outcome_counts()
        total_generated += report.conflicts_generated
        total_fixes += report.total_fixes
        total_dnr += counts[FixOutcome.DOES_NOT_RESOLVE]
        print(f"== {name} ({elapsed:.1f}s, {csv_path}) ==")
        print(report.format_table())
        print()

    print(
        f"suite total: {total_generated} conflicts, {total_fixes} fixes, "
        f"{total_dnr} non-resolving"
    )
    return 0 if total_dnr == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
