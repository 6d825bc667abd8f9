"""Independent reference implementations used to derive and freeze test values.

Nothing here imports the package under test; everything is plain Python
(plus sympy for exact algebra), chosen for obviousness over speed.
"""

from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction

import numpy as np
import sympy

INV = {"a": "A", "A": "a", "b": "B", "B": "b"}


# ---------------------------------------------------------------- SL(2, p)


def mul(x, y, p):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)


def inv(x, p):
    a, b, c, d = x
    return (d % p, -b % p, -c % p, a % p)


def enumerate_sl2(p):
    """Every 2x2 matrix over Z/p with determinant 1, by brute force over p^4 candidates."""
    return [m for m in itertools.product(range(p), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % p == 1]


def sanov_mod(p):
    a = (1, 2 % p, 0, 1)
    b = (1, 0, 2 % p, 1)
    return {"a": a, "A": inv(a, p), "b": b, "B": inv(b, p)}


def closure(gens, p):
    ident = (1, 0, 0, 1)
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens.values():
            y = mul(x, g, p)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def girth_bfs(gens, p, inverse=INV):
    """Shortest nonempty reduced word equal to the identity, by dict BFS over (element, last letter)."""
    ident = (1, 0, 0, 1)
    start = [((gens[s], s), 1) for s in gens]
    for (x, s), _ in start:
        if x == ident:
            return 1
    seen = {st for st, _ in start}
    queue = deque(start)
    while queue:
        (x, last), depth = queue.popleft()
        for s, g in gens.items():
            if s == inverse[last]:
                continue
            y = mul(x, g, p)
            if y == ident:
                return depth + 1
            if (y, s) not in seen:
                seen.add((y, s))
                queue.append(((y, s), depth + 1))
    return None


def relations_by_length(gens, p, max_len, inverse=INV):
    """Exhaustive DFS over reduced words; returns {length: [words equal to identity]}."""
    ident = (1, 0, 0, 1)
    found = {}

    def walk(word, x):
        if word and x == ident:
            found.setdefault(len(word), []).append(word)
        if len(word) == max_len:
            return
        for s, g in gens.items():
            if word and s == inverse[word[-1]]:
                continue
            walk(word + s, mul(x, g, p))

    walk("", ident)
    return found


def eval_word_mod(word, gens, p):
    x = (1, 0, 0, 1)
    for s in word:
        x = mul(x, gens[s], p)
    return x


# ---------------------------------------------------------------- number fields


def roots_mod(minpoly, p):
    return [r for r in range(p) if sum(c * pow(r, k, p) for k, c in enumerate(minpoly)) % p == 0]


def split_primes(minpoly, primes):
    n = len(minpoly) - 1
    disc = int(sympy.discriminant(_poly(minpoly), sympy.Symbol("x")))
    return [p for p in primes if disc % p and len(roots_mod(minpoly, p)) == n]


def _poly(coeffs):
    x = sympy.Symbol("x")
    return sum(sympy.Integer(c) * x**k for k, c in enumerate(coeffs))


def exact_norm(minpoly, coeffs):
    """Norm of sum coeffs[k] theta^k as a resultant, exact over Q."""
    x = sympy.Symbol("x")
    f = _poly(minpoly)
    g = sum(sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * x**k for k, c in enumerate(coeffs))
    if g == 0:
        return Fraction(0)
    r = sympy.resultant(f, g, x)
    r = sympy.Rational(r)
    return Fraction(int(r.p), int(r.q))


def exact_discriminant(minpoly):
    return int(sympy.discriminant(_poly(minpoly), sympy.Symbol("x")))


def house_hp(minpoly, coeffs, dps=50):
    """House from sympy's high-precision roots of the minimal polynomial."""
    roots = sympy.Poly(_poly(minpoly), sympy.Symbol("x")).nroots(n=dps)
    vals = []
    for r in roots:
        z = sum(sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * r**k for k, c in enumerate(coeffs))
        vals.append(abs(sympy.N(z, dps)))
    return float(max(vals))


# ---------------------------------------------------------------- graphs


def adjacency_from_gens(gens, p):
    """(elements, neighbour lists) of the Cayley graph with oracle BFS numbering."""
    elems = sorted(closure(gens, p))
    index = {e: i for i, e in enumerate(elems)}
    nbrs = [[index[mul(e, g, p)] for g in gens.values()] for e in elems]
    return elems, nbrs


def dense_lambda2(nbrs):
    n = len(nbrs)
    A = np.zeros((n, n))
    for u, row in enumerate(nbrs):
        for v in row:
            A[u, v] += 1
    vals = np.sort(np.linalg.eigvalsh(A))[::-1]
    return float(vals[1])


def expansion_bruteforce(nbrs):
    """Exact min over nonempty proper subsets of |dA| n / (|A| (n - |A|)), by itertools."""
    n = len(nbrs)
    best = None
    for size in range(1, n):
        for A in itertools.combinations(range(n), size):
            inside = set(A)
            boundary = {v for u in A for v in nbrs[u]} - inside
            r = Fraction(len(boundary) * n, size * (n - size))
            if best is None or r < best:
                best = r
    return best


def boundary_ratio(nbrs, subset):
    n = len(nbrs)
    inside = set(int(v) for v in subset)
    boundary = {v for u in inside for v in nbrs[u]} - inside
    return Fraction(len(boundary) * n, len(inside) * (n - len(inside)))


def expansion_bitmask(nbrs, chunk=1 << 20):
    """Exact minimum ratio by scanning every bitmask, ORing neighbour masks vertex by vertex.

    Returns (min ratio, number of subsets scanned).  Works for n <= 30.
    """
    n = len(nbrs)
    nmask = np.array([sum(1 << v for v in row) for row in nbrs], dtype=np.uint64)
    full = (1 << n) - 1
    best, scanned = None, 0
    for start in range(1, full, chunk):
        masks = np.arange(start, min(start + chunk, full), dtype=np.uint64)
        union = np.zeros_like(masks)
        for v in range(n):
            hit = ((masks >> np.uint64(v)) & np.uint64(1)).astype(bool)
            union[hit] |= nmask[v]
        bsize = np.bitwise_count(union & ~masks).astype(np.int64)
        size = np.bitwise_count(masks).astype(np.int64)
        # compare b/(s(n-s)) exactly via cross multiplication against the best so far
        num, den = bsize * n, size * (n - size)
        i = int(np.argmin(num / den))
        cand = Fraction(int(num[i]), int(den[i]))
        scanned += len(masks)
        if best is None or cand < best:
            best = cand
    return best, scanned
