"""Exhaustive success-probability table: for each (n, k, r), simulate every
oracle and compare min/max success with min(floor(n/r)/k, 1).

    python scripts/exhaustive_grid.py --max-n 5 --max-k 5 > grid.csv
"""
import argparse
import csv
import sys
import time

from qsum.algorithm import plan
from qsum.analysis import success_probability
from qsum.verify import exhaustive_success


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--max-k", type=int, default=4)
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "k", "r", "oracles", "min", "max", "formula", "oracle_calls", "idle", "seconds"])
    for n in range(1, args.max_n + 1):
        for k in range(2, args.max_k + 1):
            for r in range(1, n + 1):
                t0 = time.perf_counter()
                stats = exhaustive_success(n, k, r)
                p = plan(n, k, r)
                w.writerow([
                    n, k, r, stats.count,
                    f"{stats.min:.12g}", f"{stats.max:.12g}",
                    str(success_probability(n, k, r)),
                    p.spent_queries, p.unused_queries,
                    f"{time.perf_counter() - t0:.3f}",
                ])


if __name__ == "__main__":
    main()
