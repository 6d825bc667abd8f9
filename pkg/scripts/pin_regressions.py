"""Recompute the frozen regression values from the independent oracles in tests/oracles.py.

Prints Python literals that can be pasted into tests/test_acceptance.py.
The girth oracle is a pure-Python BFS and takes a few minutes at p = 113.

Usage: python scripts/pin_regressions.py [P_MAX]
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import oracles  # noqa: E402
from taulab.reduction import primes_between  # noqa: E402


def main(p_max: int = 113) -> None:
    t0 = time.perf_counter()
    girths = {}
    for p in primes_between(3, p_max):
        girths[p] = oracles.girth_bfs(oracles.sanov_mod(p), p)
        print(f"  p={p}: girth {girths[p]} ({time.perf_counter() - t0:.0f}s)", file=sys.stderr)
    print(f"PINNED_GIRTH = {girths!r}")

    _, nbrs = oracles.adjacency_from_gens(oracles.sanov_mod(3), 3)
    c, scanned = oracles.expansion_bitmask(nbrs)
    print(f"PINNED_C_SANOV_3 = Fraction({c.numerator}, {c.denominator})  # {scanned} subsets")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 113)
