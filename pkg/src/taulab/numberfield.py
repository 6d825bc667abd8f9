"""Exact arithmetic in a number field Q(theta) given by a monic integer polynomial.

Elements live in the power basis 1, theta, ..., theta^(n-1).  Internally an
element is an integer numerator vector over a single positive denominator,
which keeps multiplication in the order Z[theta] pure integer arithmetic.
Floating point only enters through the complex embeddings, which are used for
the house (largest absolute value over all conjugates).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

Rational = Union[int, Fraction]

_EPS = 2.0**-52
EMBEDDING_RTOL = 1e-12


class NumberFieldError(ValueError):
    pass


class NotMonic(NumberFieldError):
    pass


class NotSquarefree(NumberFieldError):
    pass


class DegreeZero(NumberFieldError):
    pass


class Reducible(NumberFieldError):
    pass


class FieldMismatch(ValueError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


def parse_rational(value) -> Fraction:
    """Parse an int or a ``"p/q"`` string exactly.  Floats are refused."""
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            n = int(num)
            d = int(den) if sep else 1
        except ValueError:
            raise ValueError(f"malformed rational {value!r}") from None
        if d == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return Fraction(n, d)
    raise ValueError(f"not a rational: {value!r}")


def format_rational(q: Fraction) -> Union[int, str]:
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _reduce_mod(coeffs: list[int], minpoly: Sequence[int]) -> list[int]:
    # minpoly is monic, so reduction never leaves the integers
    n = len(minpoly) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, n - 1, -1):
        top = c[i]
        if top:
            base = i - n
            for j in range(n):
                c[base + j] -= top * minpoly[j]
        c[i] = 0
    c = c[:n]
    c.extend([0] * (n - len(c)))
    return c


def _poly_mul(x: Sequence[int], y: Sequence[int]) -> list[int]:
    out = [0] * (len(x) + len(y) - 1)
    for i, xi in enumerate(x):
        if xi:
            for j, yj in enumerate(y):
                out[i + j] += xi * yj
    return out


def _bareiss_det(mat: list[list[int]]) -> int:
    m = [row[:] for row in mat]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _solve_exact(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise DivisionByZero("singular multiplication matrix")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def _horner_complex(coeffs: Sequence[float], z: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


class NumberField:
    """The field Q[x]/(minpoly) together with its n complex embeddings.

    ``minpoly`` lists integer coefficients from the constant term upwards and
    must be monic.  Squarefreeness is checked exactly; for degree 2 and 3 the
    polynomial is also checked for rational roots, which is the whole of
    irreducibility at those degrees.
    """

    def __init__(self, minpoly: Sequence[int]):
        coeffs = [int(c) for c in minpoly]
        if any(int(c) != c for c in minpoly):
            raise NumberFieldError("minpoly coefficients must be integers")
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 2:
            raise DegreeZero("minpoly must have degree >= 1")
        if coeffs[-1] != 1:
            raise NotMonic(f"leading coefficient is {coeffs[-1]}, expected 1")
        self.minpoly: tuple[int, ...] = tuple(coeffs)
        self.degree: int = len(coeffs) - 1
        if self.discriminant == 0:
            raise NotSquarefree(f"minpoly {self.minpoly} shares a factor with its derivative")
        self.embeddings, self.embedding_errors = self._compute_embeddings()
        if 2 <= self.degree <= 3:
            self._reject_rational_roots()

    # -- basic plumbing -------------------------------------------------

    def __repr__(self) -> str:
        return f"NumberField({list(self.minpoly)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and other.minpoly == self.minpoly

    def __hash__(self) -> int:
        return hash(("NumberField", self.minpoly))

    @property
    def embedding_error(self) -> float:
        return max(self.embedding_errors)

    def element(self, coeffs: Iterable) -> "FieldElement":
        coeffs = [parse_rational(c) if not isinstance(c, Fraction) else c for c in coeffs]
        if len(coeffs) > self.degree:
            raise ValueError(f"expected at most {self.degree} coefficients, got {len(coeffs)}")
        coeffs.extend([Fraction(0)] * (self.degree - len(coeffs)))
        den = math.lcm(*(c.denominator for c in coeffs))
        num = tuple(c.numerator * (den // c.denominator) for c in coeffs)
        return FieldElement._make(self, num, den)

    def scalar(self, q: Rational) -> "FieldElement":
        q = Fraction(q)
        num = (q.numerator,) + (0,) * (self.degree - 1)
        return FieldElement._make(self, num, q.denominator)

    def zero(self) -> "FieldElement":
        return self.scalar(0)

    def one(self) -> "FieldElement":
        return self.scalar(1)

    def gen(self) -> "FieldElement":
        """theta itself (equal to the rational -c0 when the degree is 1)."""
        if self.degree == 1:
            return self.scalar(-self.minpoly[0])
        return self.element([0, 1])

    # -- exact invariants ----------------------------------------------

    @cached_property
    def discriminant(self) -> int:
        n = len(self.minpoly) - 1
        if n == 1:
            return 1
        deriv = [k * self.minpoly[k] for k in range(1, n + 1)]
        deriv = deriv[:n] + [0] * (n - len(deriv))
        nrm = _norm_num(self.minpoly, tuple(deriv))
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return sign * nrm

    # -- embeddings ----------------------------------------------------

    def _compute_embeddings(self) -> tuple[tuple[complex, ...], tuple[float, ...]]:
        n = self.degree
        if n == 1:
            return (complex(-self.minpoly[0]),), (0.0,)
        fc = [float(c) for c in self.minpoly]
        dfc = [k * fc[k] for k in range(1, n + 1)]
        # numpy.roots = eigenvalues of the companion matrix (shifted QR)
        roots = [complex(z) for z in np.roots(fc[::-1])]
        roots = [self._newton_polish(z, fc, dfc) for z in roots]
        errors = [self._root_error(z, fc, dfc) for z in roots]
        if any(e > EMBEDDING_RTOL * max(1.0, abs(z)) for z, e in zip(roots, errors)):
            roots, errors = self._embeddings_mp()
        order = sorted(range(n), key=lambda i: (round(roots[i].real, 9), round(roots[i].imag, 9)))
        return tuple(roots[i] for i in order), tuple(errors[i] for i in order)

    @staticmethod
    def _newton_polish(z: complex, fc, dfc, steps: int = 3) -> complex:
        for _ in range(steps):
            d = _horner_complex(dfc, z)
            if d == 0:
                break
            step = _horner_complex(fc, z) / d
            z -= step
            if abs(step) <= _EPS * max(1.0, abs(z)):
                break
        return z

    def _root_error(self, z: complex, fc, dfc) -> float:
        # some root lies within n*|f(z)/f'(z)|; |f(z)| is inflated by the Horner rounding bound
        n = self.degree
        az = abs(z)
        magnitude = sum(abs(c) * az**k for k, c in enumerate(fc))
        fz = abs(_horner_complex(fc, z)) + 4 * n * _EPS * magnitude
        dz = abs(_horner_complex(dfc, z))
        if dz == 0:
            return math.inf
        return n * fz / dz

    def _embeddings_mp(self) -> tuple[list[complex], list[float]]:
        import mpmath

        with mpmath.workdps(40):
            roots = mpmath.polyroots(list(self.minpoly[::-1]), maxsteps=200, extraprec=200)
            f = list(self.minpoly)
            out, errs = [], []
            for r in roots:
                fz = abs(mpmath.polyval(f[::-1], r))
                dz = abs(mpmath.polyval([k * f[k] for k in range(len(f) - 1, 0, -1)], r))
                out.append(complex(r))
                errs.append(float(self.degree * fz / dz) + _EPS * max(1.0, abs(complex(r))))
        return out, errs

    def _reject_rational_roots(self) -> None:
        # a rational root of a monic integer polynomial is an integer, hence a real embedding
        for z in self.embeddings:
            if abs(z.imag) > 0.5:
                continue
            for cand in (math.floor(z.real), math.ceil(z.real)):
                if sum(c * cand**k for k, c in enumerate(self.minpoly)) == 0:
                    raise Reducible(f"minpoly {self.minpoly} has the rational root {cand}")


def _norm_num(minpoly: Sequence[int], num: Sequence[int]) -> int:
    n = len(minpoly) - 1
    cols = []
    for j in range(n):
        shifted = [0] * j + list(num)
        cols.append(_reduce_mod(shifted, minpoly))
    mat = [[cols[j][i] for j in range(n)] for i in range(n)]
    return _bareiss_det(mat)


@dataclass(frozen=True, eq=False)
class FieldElement:
    field: NumberField
    num: tuple[int, ...]
    den: int = 1
    _normalized: bool = field(default=False, repr=False, compare=False)

    @classmethod
    def _make(cls, nf: NumberField, num: Sequence[int], den: int) -> "FieldElement":
        if den < 0:
            num, den = [-c for c in num], -den
        g = math.gcd(den, *num)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        return cls(nf, tuple(num), den, True)

    # -- views -----------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_integral(self) -> bool:
        return self.den == 1

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_json(self) -> list:
        return [format_rational(c) for c in self.coeffs]

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if k == 0 else f"{c}*t^{k}" if k > 1 else f"{c}*t")
        return "(" + (" + ".join(terms) or "0") + ")"

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return FieldElement._make(self.field, [x + y for x, y in zip(self.num, other.num)], self.den)
        d = self.den * other.den
        num = [x * other.den + y * self.den for x, y in zip(self.num, other.num)]
        return FieldElement._make(self.field, num, d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-c for c in self.num), self.den, True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.field.degree == 1:
            num = [self.num[0] * other.num[0]]
        else:
            num = _reduce_mod(_poly_mul(self.num, other.num), self.field.minpoly)
        return FieldElement._make(self.field, num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        nf = self.field
        if nf.degree == 1:
            return FieldElement._make(nf, [self.den], self.num[0])
        n = nf.degree
        cols = [_reduce_mod([0] * j + list(self.num), nf.minpoly) for j in range(n)]
        mat = [[Fraction(cols[j][i]) for j in range(n)] for i in range(n)]
        rhs = [Fraction(self.den)] + [Fraction(0)] * (n - 1)
        return nf.element(_solve_exact(mat, rhs))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = self.field.scalar(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.field.minpoly, self.num, self.den))

    # -- archimedean data -----------------------------------------------

    def conjugates(self) -> list[complex]:
        """Images under the n complex embeddings (floating point)."""
        cs = [c / self.den for c in self.num]
        return [_horner_complex(cs, z) for z in self.field.embeddings]

    def house_bound(self) -> tuple[float, float]:
        """Return ``(house, err)`` with the true house within ``err`` of ``house``."""
        if self.is_zero():
            return 0.0, 0.0
        if self.is_rational():
            v = abs(Fraction(self.num[0], self.den))
            fv = float(v)
            return fv, (0.0 if Fraction(fv) == v else fv * _EPS)
        cs = [abs(c) / self.den for c in self.num]
        best, best_err = 0.0, 0.0
        for z, dz, img in zip(self.field.embeddings, self.field.embedding_errors, self.conjugates()):
            az = abs(z)
            # |g(z) - g(z*)| <= sum k |c_k| (|z|+dz)^(k-1) dz, plus Horner rounding
            shift = sum(k * c * (az + dz) ** (k - 1) for k, c in enumerate(cs) if k) * dz
            rounding = 4 * len(cs) * _EPS * sum(c * az**k for k, c in enumerate(cs))
            val = abs(img)
            if val > best:
                best = val
            best_err = max(best_err, shift + rounding)
        return best, best_err


def nf_new(minpoly: Sequence[int]) -> NumberField:
    return NumberField(minpoly)


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def fe_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def house(a: FieldElement) -> float:
    """Largest absolute value of a complex conjugate of ``a``; ``house(0) == 0``."""
    return a.house_bound()[0]


def house_upper(a: FieldElement) -> float:
    value, err = a.house_bound()
    return value + err


def norm(a: FieldElement) -> Fraction:
    """Exact field norm, the determinant of multiplication by ``a``."""
    nf = a.field
    return Fraction(_norm_num(nf.minpoly, a.num), a.den**nf.degree)


def is_integral(a: FieldElement) -> bool:
    return a.is_integral()


def field_from_json(obj) -> NumberField:
    if isinstance(obj, dict):
        obj = obj["minpoly"]
    return NumberField([int(c) for c in obj])


def element_from_json(nf: NumberField, obj) -> FieldElement:
    if isinstance(obj, (int, str)) and not isinstance(obj, bool):
        obj = [obj]
    return nf.element([parse_rational(c) for c in obj])
