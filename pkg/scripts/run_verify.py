#!/usr/bin/env python3
"""Run the full theorem-check harness and save both report renderings.

Usage: python scripts/run_verify.py [--seed N] [--count K] [--out DIR]
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from banalg.verify import RunConfig, run_verify


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=5, help="fixtures per family")
    ap.add_argument("--max-dim", type=int, default=6)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="reports")
    args = ap.parse_args()

    cfg = RunConfig(seed=args.seed, count=args.count, max_dim=args.max_dim,
                    jobs=args.jobs)
    t0 = time.time()
    report = run_verify(cfg)
    elapsed = time.time() - t0

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"verify-seed{args.seed}-count{args.count}"
    (out / f"{stem}.json").write_text(report.to_json())
    (out / f"{stem}.txt").write_text(report.to_text(color=False))
    print(report.to_text(color=sys.stdout.isatty()))
    print(f"report written to {out / stem}.{{json,txt}} in {elapsed:.1f}s")
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
