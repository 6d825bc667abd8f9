"""2x2 matrices over a number field, free-group words, and the girth constants.

Words are strings over ``"aAbB"``; a capital letter is the inverse generator.
Each generator matrix t is written as ``t = (1/alpha) t*`` with ``alpha`` a
positive rational integer and ``t*`` integral.  ``M`` is the largest house over
the entries of the four cleared matrices and their denominators, and the girth
constant is ``C = 1 / (n ln(3M))``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .numberfield import (
    FieldElement,
    FieldMismatch,
    NumberField,
    element_from_json,
    house_upper,
    _poly_mul,
    _reduce_mod,
)

LETTERS = "aAbB"
INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}

_ULP_MARGIN = 1.0 - 8 * 2.0**-52


class SingularMatrix(ValueError):
    pass


class NotReduced(ValueError):
    pass


class DegenerateGenerators(ValueError):
    """Generators that cannot span a free group of rank two."""


# -- words --------------------------------------------------------------------


def is_reduced(word: str) -> bool:
    return all(INVERSE[x] != y for x, y in zip(word, word[1:]))


def check_word(word: str) -> str:
    bad = set(word) - set(LETTERS)
    if bad:
        raise ValueError(f"word {word!r} uses letters outside {LETTERS!r}: {sorted(bad)}")
    if not is_reduced(word):
        raise NotReduced(f"word {word!r} is not freely reduced")
    return word


def invert_word(word: str) -> str:
    return "".join(INVERSE[x] for x in reversed(word))


def free_reduce(word: str) -> str:
    out: list[str] = []
    for x in word:
        if out and INVERSE[out[-1]] == x:
            out.pop()
        else:
            out.append(x)
    return "".join(out)


def count_reduced_words(length: int, rank: int = 2) -> int:
    if length == 0:
        return 1
    return 2 * rank * (2 * rank - 1) ** (length - 1)


def reduced_words(length: int) -> Iterator[str]:
    """All freely reduced words of exactly ``length`` letters, in prefix order."""
    if length == 0:
        yield ""
        return
    stack = [(x,) for x in reversed(LETTERS)]
    while stack:
        w = stack.pop()
        if len(w) == length:
            yield "".join(w)
            continue
        for x in reversed(LETTERS):
            if x != INVERSE[w[-1]]:
                stack.append(w + (x,))


def random_reduced_word(length: int, rng: random.Random) -> str:
    """Uniform sample among the 4*3^(length-1) reduced words of this length."""
    if length == 0:
        return ""
    letters = [rng.choice(LETTERS)]
    for _ in range(length - 1):
        letters.append(rng.choice([x for x in LETTERS if x != INVERSE[letters[-1]]]))
    return "".join(letters)


# -- matrices -----------------------------------------------------------------


@dataclass(frozen=True)
class Mat2K:
    """Row-major 2x2 matrix ``[[e0, e1], [e2, e3]]`` over a number field."""

    entries: tuple[FieldElement, FieldElement, FieldElement, FieldElement]

    @property
    def field(self) -> NumberField:
        return self.entries[0].field

    @classmethod
    def from_rows(cls, nf: NumberField, rows) -> "Mat2K":
        (p, q), (r, s) = rows
        conv = [x if isinstance(x, FieldElement) else element_from_json(nf, x) for x in (p, q, r, s)]
        return cls(tuple(conv))

    @classmethod
    def identity(cls, nf: NumberField) -> "Mat2K":
        return cls((nf.one(), nf.zero(), nf.zero(), nf.one()))

    def rows(self):
        e = self.entries
        return [[e[0], e[1]], [e[2], e[3]]]

    def to_json(self) -> list:
        return [[x.to_json() for x in row] for row in self.rows()]

    def __matmul__(self, other: "Mat2K") -> "Mat2K":
        return mat_mul(self, other)

    def __neg__(self) -> "Mat2K":
        return Mat2K(tuple(-x for x in self.entries))

    def scale(self, c) -> "Mat2K":
        return Mat2K(tuple(x * c for x in self.entries))

    def is_identity(self) -> bool:
        e = self.entries
        return e[0] == 1 and e[1] == 0 and e[2] == 0 and e[3] == 1

    def is_unimodular(self) -> bool:
        return mat_det(self) == 1

    def __repr__(self) -> str:
        e = self.entries
        return f"Mat2K([[{e[0]}, {e[1]}], [{e[2]}, {e[3]}]])"


def mat_mul(x: Mat2K, y: Mat2K) -> Mat2K:
    if x.field != y.field:
        raise FieldMismatch(f"{x.field} vs {y.field}")
    a, b, c, d = x.entries
    e, f, g, h = y.entries
    return Mat2K((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h))


def mat_det(x: Mat2K) -> FieldElement:
    a, b, c, d = x.entries
    return a * d - b * c


def mat_inv(x: Mat2K) -> Mat2K:
    det = mat_det(x)
    if det.is_zero():
        raise SingularMatrix(f"{x} has determinant 0")
    a, b, c, d = x.entries
    adj = Mat2K((d, -b, -c, a))
    return adj if det == 1 else adj.scale(det.inverse())


@dataclass(frozen=True)
class ClearedMatrix:
    star: Mat2K
    denom: FieldElement

    def restore(self) -> Mat2K:
        return self.star.scale(self.denom.inverse())


def clear_denominators(t: Mat2K) -> ClearedMatrix:
    """Least positive integer ``d`` with ``d*t`` integral, and ``star = d*t``."""
    d = math.lcm(*(x.den for x in t.entries))
    nf = t.field
    return ClearedMatrix(t.scale(d), nf.scalar(d))


# -- integral fast path -------------------------------------------------------
# Star matrices are products of integral matrices, so everything stays in Z[theta].
# Entries are int tuples of length n (plain ints when n == 1).


class _IntegralRing:
    def __init__(self, nf: NumberField):
        self.nf = nf
        self.n = nf.degree
        self.minpoly = nf.minpoly

    def lift(self, x: FieldElement):
        assert x.den == 1, "entry is not integral"
        return x.num[0] if self.n == 1 else x.num

    def wrap(self, v) -> FieldElement:
        num = (v,) if self.n == 1 else tuple(v)
        return FieldElement._make(self.nf, num, 1)

    def matmul(self, x, y):
        a, b, c, d = x
        e, f, g, h = y
        if self.n == 1:
            return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        mul, add = self._mul, self._add
        return (
            add(mul(a, e), mul(b, g)),
            add(mul(a, f), mul(b, h)),
            add(mul(c, e), mul(d, g)),
            add(mul(c, f), mul(d, h)),
        )

    def _mul(self, x, y):
        return tuple(_reduce_mod(_poly_mul(x, y), self.minpoly))

    @staticmethod
    def _add(x, y):
        return tuple(u + v for u, v in zip(x, y))

    def scalar(self, z: int):
        return z if self.n == 1 else (z,) + (0,) * (self.n - 1)

    def identity(self):
        one, zero = self.scalar(1), self.scalar(0)
        return (one, zero, zero, one)

    def is_scalar(self, m, z: int) -> bool:
        zero = self.scalar(0)
        s = self.scalar(z)
        return m[1] == zero and m[2] == zero and m[0] == s and m[3] == s


# -- generator systems --------------------------------------------------------


def _cleared_four(a: Mat2K, b: Mat2K) -> dict[str, ClearedMatrix]:
    return {
        "a": clear_denominators(a),
        "A": clear_denominators(mat_inv(a)),
        "b": clear_denominators(b),
        "B": clear_denominators(mat_inv(b)),
    }


def compute_M(a: Mat2K, b: Mat2K, certified: bool = False) -> float:
    """Largest house over the 16 cleared entries and the 4 denominators.

    With ``certified=True`` every house value is rounded up by its error bound.
    """
    best = 0.0
    for cm in _cleared_four(a, b).values():
        for x in (*cm.star.entries, cm.denom):
            if certified:
                v = house_upper(x)
            else:
                v = x.house_bound()[0]
            best = max(best, v)
    return best


def margulis_constant_from(M: float, degree: int) -> float:
    return 1.0 / (degree * math.log(3.0 * M))


def _finite_order_bound(degree: int) -> int:
    # an element of finite order N in SL(2,k) has an eigenvalue of degree <= 2n, so phi(N) <= 2n;
    # phi(N) >= sqrt(N/2) gives N <= 8n^2
    return 8 * degree * degree


@dataclass(frozen=True)
class GeneratorSystem:
    """Two unimodular matrices a, b with their cleared forms and constants M, C."""

    a: Mat2K
    b: Mat2K
    cleared: dict
    M: float
    M_upper: float
    C: float
    degree_n: int

    @classmethod
    def build(cls, a: Mat2K, b: Mat2K, check: bool = True) -> "GeneratorSystem":
        """Build the system.  ``check`` rejects non-unimodular, coincident or torsion inputs."""
        if a.field != b.field:
            raise FieldMismatch("generators over different fields")
        if not (a.is_unimodular() and b.is_unimodular()):
            raise DegenerateGenerators("generators must have determinant 1")
        if check:
            _check_free_candidates(a, b)
        cleared = _cleared_four(a, b)
        M = compute_M(a, b)
        M_up = compute_M(a, b, certified=True)
        n = a.field.degree
        C = margulis_constant_from(M_up, n) * _ULP_MARGIN
        return cls(a, b, cleared, M, M_up, C, n)

    @property
    def field(self) -> NumberField:
        return self.a.field

    def matrix(self, letter: str) -> Mat2K:
        return {"a": self.a, "A": mat_inv(self.a), "b": self.b, "B": mat_inv(self.b)}[letter]

    def _ring(self) -> _IntegralRing:
        ring = getattr(self, "_ring_cache", None)
        if ring is None:
            ring = _IntegralRing(self.field)
            object.__setattr__(self, "_ring_cache", ring)
        return ring

    def _int_stars(self) -> dict[str, tuple]:
        cache = getattr(self, "_star_cache", None)
        if cache is None:
            ring = self._ring()
            cache = {
                k: (tuple(ring.lift(x) for x in cm.star.entries), cm.denom.num[0])
                for k, cm in self.cleared.items()
            }
            object.__setattr__(self, "_star_cache", cache)
        return cache

    def to_json(self) -> dict:
        return {"a": self.a.to_json(), "b": self.b.to_json()}


def _check_free_candidates(a: Mat2K, b: Mat2K) -> None:
    ident = Mat2K.identity(a.field)
    b_inv = mat_inv(b)
    for label, other in (("b", b), ("-b", -b), ("b^-1", b_inv), ("-b^-1", -b_inv)):
        if a == other:
            raise DegenerateGenerators(f"a coincides with {label}")
    bound = _finite_order_bound(a.field.degree)
    for name, g in (("a", a), ("b", b)):
        power = g
        for k in range(1, bound + 1):
            if power == ident:
                raise DegenerateGenerators(f"{name} has finite order {k}")
            power = mat_mul(power, g)


def margulis_constant(gs: GeneratorSystem) -> float:
    """Certified lower bound for C = 1/(n ln(3M)) (natural logarithm)."""
    return gs.C


def eval_word(word: str, gs: GeneratorSystem) -> Mat2K:
    check_word(word)
    result = Mat2K.identity(gs.field)
    mats = {x: gs.matrix(x) for x in set(word)}
    for x in word:
        result = mat_mul(result, mats[x])
    return result


def _eval_cleared_raw(word: str, gs: GeneratorSystem):
    ring = gs._ring()
    stars = gs._int_stars()
    m = ring.identity()
    z = 1
    for x in word:
        s, d = stars[x]
        m = ring.matmul(m, s)
        z *= d
    return m, z


def eval_word_cleared(word: str, gs: GeneratorSystem) -> tuple[Mat2K, FieldElement]:
    """Integral product of the cleared letters and the product Z of their denominators."""
    check_word(word)
    m, z = _eval_cleared_raw(word, gs)
    ring = gs._ring()
    return Mat2K(tuple(ring.wrap(v) for v in m)), gs.field.scalar(z)


@dataclass
class RelationReport:
    max_length: int
    words_checked: int
    identity_word: Optional[str] = None
    minus_identity_word: Optional[str] = None

    @property
    def found(self) -> bool:
        return self.identity_word is not None or self.minus_identity_word is not None

    @property
    def shortest(self) -> Optional[str]:
        found = [w for w in (self.identity_word, self.minus_identity_word) if w is not None]
        return min(found, key=len) if found else None

    def summary(self) -> str:
        if not self.found:
            return f"no relation among {self.words_checked} reduced words of length <= {self.max_length}"
        parts = []
        if self.identity_word is not None:
            parts.append(f"{self.identity_word} = I")
        if self.minus_identity_word is not None:
            parts.append(f"{self.minus_identity_word} = -I")
        return "relation found: " + ", ".join(parts)


def assert_no_short_relations(gs: GeneratorSystem, L: int) -> RelationReport:
    """Search every reduced word of length 1..L for one evaluating to +I or -I.

    Words are expanded level by level from their prefixes (each node of the
    prefix tree multiplies its parent's product by one letter), so the first
    level producing a hit gives the shortest relation.  Both signs are tracked.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    ring = gs._ring()
    stars = gs._int_stars()
    report = RelationReport(L, 0)
    level = [("", ring.identity(), 1)]
    for _ in range(L):
        nxt = []
        for word, m, z in level:
            last = word[-1] if word else None
            for x in LETTERS:
                if last is not None and x == INVERSE[last]:
                    continue
                s, d = stars[x]
                mm = ring.matmul(m, s)
                zz = z * d
                w = word + x
                report.words_checked += 1
                if report.identity_word is None and ring.is_scalar(mm, zz):
                    report.identity_word = w
                elif report.minus_identity_word is None and ring.is_scalar(mm, -zz):
                    report.minus_identity_word = w
                nxt.append((w, mm, zz))
        if report.found:
            break
        level = nxt
    return report


def generators_from_json(nf: NumberField, obj, check: bool = True) -> GeneratorSystem:
    a = Mat2K.from_rows(nf, obj["a"])
    b = Mat2K.from_rows(nf, obj["b"])
    return GeneratorSystem.build(a, b, check=check)


def sanov(nf: Optional[NumberField] = None) -> GeneratorSystem:
    """The classical free pair [[1,2],[0,1]], [[1,0],[2,1]]."""
    nf = nf or NumberField([0, 1])
    return GeneratorSystem.build(
        Mat2K.from_rows(nf, [[1, 2], [0, 1]]),
        Mat2K.from_rows(nf, [[1, 0], [2, 1]]),
    )


def rows_to_matrix(nf: NumberField, rows: Sequence) -> Mat2K:
    return Mat2K.from_rows(nf, rows)
