"""Exact arithmetic in cyclotomic fields Q(zeta_n).

A :class:`Cyclotomic` is a sparse map ``k -> c`` standing for
``sum c * zeta_n^k`` with rational ``c``.  Values are kept in a canonical
form, so equality, zero tests and rationality tests are dictionary
comparisons.

Canonical form.  Write ``n = m_1 * ... * m_r`` with ``m_i = q_i^a_i`` prime
powers.  By the Chinese remainder theorem ``Q(zeta_n)`` is the tensor product
of the fields ``Q(zeta_{m_i})`` and ``zeta_n^k`` corresponds to the tuple of
component exponents ``j_i = k * u_i mod m_i``, where ``u_i`` inverts ``n/m_i``
modulo ``m_i``.  Each factor has the power basis ``zeta^j`` with
``j < phi(m_i)``.  Writing ``j = j0 + q^(a-1) * j1`` with ``j0 < q^(a-1)``, the
exponents with ``j1 = q - 1`` are exactly the non-basis ones, and the
cyclotomic polynomial ``sum_s x^(s q^(a-1))`` rewrites them as minus the sum
over ``j1 = 0..q-2``.  Reducing one prime at a time never disturbs the
components already reduced, and the tensor product of power bases is a
basis, so the result is unique.

Only monomials that are non-basis in some component expand, so values that
live in a small subfield of a huge ``Q(zeta_n)`` (as character values of large
groups do) stay small.
"""

from __future__ import annotations

import cmath
from collections.abc import Iterable, Mapping
from fractions import Fraction
from functools import cache
from math import gcd
from numbers import Rational

__all__ = ["Cyclotomic", "csum", "factor", "zeta"]


def factor(n: int) -> list[tuple[int, int]]:
    """Prime factorisation of ``n >= 1`` as ``[(q, a), ...]`` by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            a = 0
            while n % d == 0:
                n //= d
                a += 1
            out.append((d, a))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


@cache
def _components(n: int) -> tuple[tuple[int, int, int, int, int], ...]:
    """Per prime power ``m = q^a`` of ``n``: (q, m, h = q^(a-1), step = n/m, u)."""
    comps = []
    for q, a in factor(n):
        m = q**a
        step = n // m
        comps.append((q, m, m // q, step, pow(step, -1, m)))
    return tuple(comps)


def _reduce(n: int, terms: Mapping[int, Rational]) -> dict[int, Rational]:
    cur = {k % n: c for k, c in terms.items() if c}
    if n == 1 or all(k == 0 for k in cur):
        return cur
    for q, m, h, step, u in _components(n):
        top = (q - 1) * h
        nxt: dict[int, Rational] = {}
        for k, c in cur.items():
            j = (k * u) % m
            if j < top:
                nxt[k] = nxt.get(k, 0) + c
                continue
            # zeta^j with j1 = q - 1: replace by -sum of the other j1 values
            base = k - top * step
            for s in range(q - 1):
                kk = (base + s * h * step) % n
                nxt[kk] = nxt.get(kk, 0) - c
        cur = {k: c for k, c in nxt.items() if c}
    return cur


def _normal_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class Cyclotomic:
    """An element of ``Q(zeta_n)`` in canonical form.

    Arithmetic between values of different conductors happens in the field of
    the least common multiple.  Instances are immutable and hashable.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[int, Rational] | None = None, *, reduced: bool = False):
        if n < 1:
            raise ValueError("conductor must be positive")
        self.n = int(n)
        raw = dict(terms or {})
        t = raw if reduced else _reduce(self.n, raw)
        self.terms = {k: _normal_coeff(c) for k, c in t.items()}

    # construction
    @classmethod
    def rational(cls, c: Rational, n: int = 1) -> Cyclotomic:
        return cls(n, {0: c} if c else {}, reduced=True)

    @classmethod
    def coerce(cls, x, n: int = 1) -> Cyclotomic:
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, Rational):
            return cls.rational(x, n)
        raise TypeError(f"cannot convert {type(x).__name__} to Cyclotomic")

    def lift(self, n: int) -> Cyclotomic:
        """The same value written over conductor ``n`` (a multiple of ``self.n``)."""
        if n == self.n:
            return self
        if n % self.n:
            raise ValueError(f"{n} is not a multiple of {self.n}")
        f = n // self.n
        return Cyclotomic(n, {k * f: c for k, c in self.terms.items()})

    def _common(self, other) -> tuple[Cyclotomic, Cyclotomic]:
        other = Cyclotomic.coerce(other, self.n)
        if other.n == self.n:
            return self, other
        L = self.n * other.n // gcd(self.n, other.n)
        return self.lift(L), other.lift(L)

    # predicates
    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(k == 0 for k in self.terms)

    def is_integer(self) -> bool:
        if not self.is_rational():
            return False
        c = self.terms.get(0, 0)
        return not isinstance(c, Fraction) or c.denominator == 1

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.terms.get(0, 0))

    def to_int(self) -> int:
        q = self.to_rational()
        if q.denominator != 1:
            raise ValueError(f"{self} is not an integer")
        return int(q)

    # arithmetic
    def __add__(self, other):
        a, b = self._common(other)
        t = dict(a.terms)
        for k, c in b.terms.items():
            t[k] = t.get(k, 0) + c
        return Cyclotomic(a.n, {k: c for k, c in t.items() if c}, reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, {k: -c for k, c in self.terms.items()}, reduced=True)

    def __sub__(self, other):
        return self + (-Cyclotomic.coerce(other, self.n))

    def __rsub__(self, other):
        return Cyclotomic.coerce(other, self.n) - self

    def __mul__(self, other):
        if isinstance(other, Rational):
            if not other:
                return Cyclotomic(self.n, reduced=True)
            return Cyclotomic(self.n, {k: c * other for k, c in self.terms.items()}, reduced=True)
        a, b = self._common(other)
        n = a.n
        t: dict[int, Rational] = {}
        for k1, c1 in a.terms.items():
            for k2, c2 in b.terms.items():
                k = (k1 + k2) % n
                t[k] = t.get(k, 0) + c1 * c2
        return Cyclotomic(n, t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return self * (Fraction(1) / other)
        raise TypeError("division is only supported by rationals")

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        out = Cyclotomic.rational(1, self.n)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conj(self) -> Cyclotomic:
        """Complex conjugate: ``zeta^k -> zeta^(n-k)``."""
        if self.is_rational():
            return self
        return Cyclotomic(self.n, {(-k) % self.n: c for k, c in self.terms.items()})

    def galois(self, r: int) -> Cyclotomic:
        """The image under ``zeta -> zeta^r`` with ``r`` coprime to the conductor."""
        if gcd(r, self.n) != 1:
            raise ValueError(f"{r} is not coprime to {self.n}")
        return Cyclotomic(self.n, {(k * r) % self.n: c for k, c in self.terms.items()})

    # comparison and display
    def __eq__(self, other) -> bool:
        if isinstance(other, (Cyclotomic, Rational)):
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self) -> int:
        # canonical forms over different conductors differ, so only rational
        # values get a discriminating hash
        if self.is_rational():
            return hash(self.to_rational())
        return hash(("Cyclotomic", len(self.terms) > 0))

    def __complex__(self) -> complex:
        return sum((complex(c) * cmath.exp(2j * cmath.pi * k / self.n) for k, c in self.terms.items()), 0j)

    def __repr__(self) -> str:
        return f"Cyclotomic({self.n}, {self.terms!r})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            c = self.terms[k]
            parts.append(str(c) if k == 0 else f"{c}*z^{k}")
        return "+".join(parts).replace("+-", "-")


def zeta(n: int, k: int = 1) -> Cyclotomic:
    """``zeta_n^k`` in canonical form."""
    return Cyclotomic(n, {k % n: 1})


def csum(values: Iterable[Cyclotomic], n: int) -> Cyclotomic:
    """Sum of values over a common conductor ``n``.

    Canonical forms are closed under addition, so no reduction is needed
    once every summand is written over ``n``.
    """
    t: dict[int, Rational] = {}
    for v in values:
        v = Cyclotomic.coerce(v, n).lift(n)
        for k, c in v.terms.items():
            t[k] = t.get(k, 0) + c
    return Cyclotomic(n, {k: c for k, c in t.items() if c}, reduced=True)
