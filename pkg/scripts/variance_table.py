"""Normalized short-interval variance over a grid of window lengths.

Writes one CSV row per h (same columns as the ``variance`` subcommand).
"""

import argparse
import csv
import os
import sys
import time

from liouville_lab.intervals import variance_scan


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--x", type=int, default=10**7)
    ap.add_argument("--hs", default="4,16,64,256,1024,4096")
    ap.add_argument("--weight", default="lambda", choices=("lambda", "mangoldt"))
    ap.add_argument("--thresholds", default="0.1,0.2")
    ap.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args()
    eps = [float(e) for e in args.thresholds.split(",")]
    writer = None
    for h in (int(v) for v in args.hs.split(",")):
        t0 = time.perf_counter()
        row = variance_scan(args.x, h, weight=args.weight, thresholds=eps, threads=args.threads).row()
        if writer is None:
            writer = csv.DictWriter(sys.stdout, fieldnames=list(row), lineterminator="\n")
            writer.writeheader()
        writer.writerow(row)
        print(f"h={h}: {time.perf_counter() - t0:.1f}s", file=sys.stderr)


if __name__ == "__main__":
    main()
