"""Vectorized arithmetic in SL(2,p_1) x ... x SL(2,p_m).

An element is a row of 4m residues, component i occupying columns 4i..4i+3
(row-major a, b, c, d).  ``index`` is a bijection onto [0, order): inside one
factor, a != 0 determines the element by (a, b, c) and a == 0 by (b, d).
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np


def sl2_order(p: int) -> int:
    return p * (p * p - 1)


class ProductSL2:
    def __init__(self, primes: Sequence[int]):
        self.primes = tuple(int(p) for p in primes)
        if len(set(self.primes)) != len(self.primes):
            raise ValueError(f"repeated prime: {self.primes}")
        self.orders = tuple(sl2_order(p) for p in self.primes)
        self.order = math.prod(self.orders)
        if self.order >= 2**62:
            raise OverflowError("group too large to index with int64")

    @property
    def width(self) -> int:
        return 4 * len(self.primes)

    def __repr__(self) -> str:
        return "x".join(f"SL(2,{p})" for p in self.primes) or "trivial group"

    def identity(self) -> np.ndarray:
        return np.tile(np.array([1, 0, 0, 1], dtype=np.int64), len(self.primes))

    def element(self, components: Sequence[Sequence[int]]) -> np.ndarray:
        """Pack per-prime 4-tuples (a, b, c, d) into one row."""
        if len(components) != len(self.primes):
            raise ValueError("one component per prime expected")
        row = []
        for p, comp in zip(self.primes, components):
            row.extend(int(x) % p for x in comp)
        return np.array(row, dtype=np.int64)

    def mul(self, X: np.ndarray, g: np.ndarray) -> np.ndarray:
        """Right-multiply every row of ``X`` by the single element ``g``."""
        out = np.empty_like(X)
        for i, p in enumerate(self.primes):
            j = 4 * i
            a, b, c, d = (X[:, j + t] for t in range(4))
            e, f, gg, h = (int(g[j + t]) for t in range(4))
            out[:, j] = (a * e + b * gg) % p
            out[:, j + 1] = (a * f + b * h) % p
            out[:, j + 2] = (c * e + d * gg) % p
            out[:, j + 3] = (c * f + d * h) % p
        return out

    def mul_one(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.mul(x[None, :], y)[0]

    def inverse(self, g: np.ndarray) -> np.ndarray:
        out = np.empty_like(g)
        for i, p in enumerate(self.primes):
            a, b, c, d = (int(v) for v in g[4 * i : 4 * i + 4])
            out[4 * i : 4 * i + 4] = (d % p, -b % p, -c % p, a % p)
        return out

    def det_ok(self, X: np.ndarray) -> np.ndarray:
        ok = np.ones(len(X), dtype=bool)
        for i, p in enumerate(self.primes):
            j = 4 * i
            ok &= (X[:, j] * X[:, j + 3] - X[:, j + 1] * X[:, j + 2]) % p == 1
        return ok

    def index(self, X: np.ndarray) -> np.ndarray:
        idx = np.zeros(len(X), dtype=np.int64)
        for i, (p, n) in enumerate(zip(self.primes, self.orders)):
            j = 4 * i
            a, b, c, d = (X[:, j + t] for t in range(4))
            local = np.where(
                a != 0,
                (a - 1) * p * p + b * p + c,
                (p - 1) * p * p + (b - 1) * p + d,
            )
            idx = idx * n + local
        return idx
