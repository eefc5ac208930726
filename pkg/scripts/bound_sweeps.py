"""Run every bound sweep and write bound-vs-measured rows to a CSV."""

from __future__ import annotations

import argparse
import csv
import json
from pathlib import Path

from floquetsim.verify import run_suite


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--suite", default="all")
    ap.add_argument("--out", type=Path, default=Path("results/bound_sweeps.csv"))
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    rows = run_suite(args.suite, args.threads)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["suite", "name", "bound", "measured", "slack", "ok", "context"])
        for s, r in rows:
            w.writerow([s, r.name, f"{r.bound_value:.17g}", f"{r.measured_value:.17g}", f"{r.slack:.17g}",
                        int(r.ok), json.dumps(r.context, sort_keys=True, default=str)])
    by = {}
    for _, r in rows:
        n, bad, slack = by.get(r.name, (0, 0, float("inf")))
        by[r.name] = (n + 1, bad + (not r.ok), min(slack, r.slack))
    for name, (n, bad, slack) in by.items():
        print(f"{name:28s} {n:5d} points  {bad:3d} violations  min slack {slack:.3e}")


if __name__ == "__main__":
    main()
