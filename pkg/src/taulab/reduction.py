"""Completely split primes and reduction of matrices modulo a prime above them.

A prime ideal P above a completely split rational prime p is named by a root r
of the minimal polynomial mod p; reduction substitutes ``theta -> r`` and
inverts denominators mod p.  Squarefree products of such ideals reduce
componentwise (Chinese remainder theorem).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .matgroup import GeneratorSystem, Mat2K, mat_inv
from .numberfield import FieldElement, NumberField


class EmptyRange(ValueError):
    pass


class NonInvertibleDenominator(ArithmeticError):
    pass


def primes_between(lo: int, hi: int) -> list[int]:
    if hi < 2 or hi < lo:
        return []
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, int(hi**0.5) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return [int(q) for q in np.flatnonzero(sieve) if q >= lo]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    q = 3
    while q * q <= n:
        if n % q == 0:
            return False
        q += 2
    return True


def roots_mod_p(minpoly: Sequence[int], p: int) -> list[int]:
    """All roots in [0, p) by evaluating at every residue."""
    x = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(minpoly):
        acc = (acc * x + (int(c) % p)) % p
    return [int(r) for r in np.flatnonzero(acc == 0)]


@dataclass(frozen=True)
class PrimeSite:
    p: int
    root: int
    field: NumberField = field(repr=False, compare=False)

    def __post_init__(self):
        if self.p == 2 or not is_prime(self.p):
            raise ValueError(f"{self.p} is not an odd prime")
        if sum(c * pow(self.root, k, self.p) for k, c in enumerate(self.field.minpoly)) % self.p:
            raise ValueError(f"{self.root} is not a root of {self.field.minpoly} mod {self.p}")

    def reduce_element(self, x: FieldElement) -> int:
        if x.den % self.p == 0:
            raise NonInvertibleDenominator(f"denominator {x.den} vanishes mod {self.p}")
        val = 0
        for c in reversed(x.num):
            val = (val * self.root + c) % self.p
        return val * pow(x.den, -1, self.p) % self.p


@dataclass(frozen=True)
class ModpMatrix:
    p: int
    entries: tuple[int, int, int, int]

    def __matmul__(self, other: "ModpMatrix") -> "ModpMatrix":
        if other.p != self.p:
            raise ValueError("moduli differ")
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        p = self.p
        return ModpMatrix(p, ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p))

    def det(self) -> int:
        a, b, c, d = self.entries
        return (a * d - b * c) % self.p

    def inverse(self) -> "ModpMatrix":
        a, b, c, d = self.entries
        p = self.p
        inv = pow(self.det(), -1, p)
        return ModpMatrix(p, (d * inv % p, -b * inv % p, -c * inv % p, a * inv % p))

    def is_identity(self) -> bool:
        return self.entries == (1, 0, 0, 1)

    def is_involution(self) -> bool:
        return not self.is_identity() and (self @ self).is_identity()

    def rows(self) -> list[list[int]]:
        a, b, c, d = self.entries
        return [[a, b], [c, d]]


@dataclass(frozen=True)
class IdealProduct:
    sites: tuple[PrimeSite, ...]

    def __post_init__(self):
        ps = [s.p for s in self.sites]
        if len(set(ps)) != len(ps):
            raise ValueError(f"repeated prime in ideal product: {ps}")
        object.__setattr__(self, "sites", tuple(self.sites))

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(s.p for s in self.sites)


@dataclass(frozen=True)
class PrimeStatus:
    p: int
    sites: tuple[PrimeSite, ...]
    reason: Optional[str] = None

    @property
    def split(self) -> bool:
        return len(self.sites) > 0 and self.reason is None


def classify_primes(nf: NumberField, gs: Optional[GeneratorSystem], p_min: int, p_max: int) -> list[PrimeStatus]:
    """Every odd prime in [p_min, p_max] with its split sites or an exclusion reason."""
    if p_min <= 2:
        raise ValueError("p_min must exceed 2")
    if p_min > p_max:
        raise EmptyRange(f"empty prime range [{p_min}, {p_max}]")
    disc = nf.discriminant
    denoms = sorted({cm.denom.num[0] for cm in gs.cleared.values()}) if gs is not None else []
    out = []
    for p in primes_between(p_min, p_max):
        if disc % p == 0:
            out.append(PrimeStatus(p, (), "p divides disc(minpoly)"))
            continue
        if any(d % p == 0 for d in denoms):
            out.append(PrimeStatus(p, (), "p divides a generator denominator"))
            continue
        roots = roots_mod_p(nf.minpoly, p)
        if len(roots) < nf.degree:
            out.append(PrimeStatus(p, (), f"not completely split ({len(roots)} of {nf.degree} roots)"))
            continue
        out.append(PrimeStatus(p, tuple(PrimeSite(p, r, nf) for r in roots)))
    return out


def split_primes(nf: NumberField, gs: Optional[GeneratorSystem], p_min: int, p_max: int) -> list[list[PrimeSite]]:
    """Site groups (one per admissible completely split prime, n sites each)."""
    return [list(st.sites) for st in classify_primes(nf, gs, p_min, p_max) if st.split]


def reduce_mod(site: PrimeSite, m: Mat2K) -> ModpMatrix:
    return ModpMatrix(site.p, tuple(site.reduce_element(x) for x in m.entries))


@dataclass(frozen=True)
class ReducedGenerators:
    """The multiset {pi(a), pi(a)^-1, pi(b), pi(b)^-1} with degeneracy flags."""

    site: PrimeSite
    images: dict  # label -> ModpMatrix
    coincident: tuple[tuple[str, str], ...]
    involutions: tuple[str, ...]

    @property
    def degenerate(self) -> bool:
        return bool(self.coincident or self.involutions) or any(m.is_identity() for m in self.images.values())

    @property
    def distinct(self) -> bool:
        return not self.coincident


def reduce_generators(site: PrimeSite, gs: GeneratorSystem) -> ReducedGenerators:
    a = reduce_mod(site, gs.a)
    b = reduce_mod(site, gs.b)
    images = {"a": a, "A": a.inverse(), "b": b, "B": b.inverse()}
    labels = list(images)
    coincident = tuple(
        (x, y) for i, x in enumerate(labels) for y in labels[i + 1 :] if images[x] == images[y]
    )
    involutions = tuple(x for x in labels if images[x].is_involution())
    return ReducedGenerators(site, images, coincident, involutions)


def crt_reduce(ideal: IdealProduct, m: Mat2K) -> tuple[ModpMatrix, ...]:
    return tuple(reduce_mod(site, m) for site in ideal.sites)


def crt_generators(ideal: IdealProduct, gs: GeneratorSystem) -> dict[str, tuple[ModpMatrix, ...]]:
    """Label -> componentwise images of a^{+-1}, b^{+-1} in the product group."""
    mats = {"a": gs.a, "A": mat_inv(gs.a), "b": gs.b, "B": mat_inv(gs.b)}
    return {k: crt_reduce(ideal, v) for k, v in mats.items()}


def default_site(sites: Sequence[PrimeSite]) -> PrimeSite:
    return min(sites, key=lambda s: s.root)
