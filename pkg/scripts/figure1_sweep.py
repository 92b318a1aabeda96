"""Write success-probability curves (adaptive algorithm vs. identification bound)
for a set of (n, k) instances, one CSV per instance.

    python scripts/figure1_sweep.py --out curves/ --n 12 24 48 --k 3 5
"""
import argparse
from pathlib import Path

from qsum.cli import main as qsum_main


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="curves")
    ap.add_argument("--n", type=int, nargs="+", default=[12, 24])
    ap.add_argument("--k", type=int, nargs="+", default=[3])
    return ap.parse_args()


if __name__ == "__main__":
    args = parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for n in args.n:
        for k in args.k:
            path = out / f"curve_n{n}_k{k}.csv"
            qsum_main(["sweep", "--n", str(n), "--k", str(k), "--out", str(path)])
            print(path)
