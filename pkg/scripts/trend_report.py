"""Girth and spectral gap against ln p from a scan CSV (as written by `taulab scan`).

Fits girth ~ alpha * ln p by least squares through the origin and prints the
slope next to the certified constant C, plus the running minimum of the gap.

Usage: python scripts/trend_report.py results/sanov.csv
"""

import csv
import math
import sys

import numpy as np

from taulab.matgroup import sanov


def main(path: str) -> None:
    with open(path) as fh:
        rows = [r for r in csv.DictReader(fh) if not r["excluded_reason"]]
    p = np.array([int(r["p"]) for r in rows])
    g = np.array([int(r["girth"]) for r in rows])
    x = np.log(p)
    alpha = float(x @ g / (x @ x))
    print(f"girth ~ {alpha:.4f} ln p   (certified C = {sanov().C:.4f})")
    running = math.inf
    for r in rows:
        if r["gap"]:
            running = min(running, float(r["gap"]))
        print(f"p={r['p']:>4} ln p={math.log(int(r['p'])):6.3f} girth={r['girth']:>3} "
              f"gap={r['gap'] or '-':>20} running min={running:.6f}")


if __name__ == "__main__":
    main(sys.argv[1])
