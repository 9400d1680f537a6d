"""Additive and multiplicative characters of GF(q) with exact values.

A character value (or a sum of them) is kept as a vector of non-negative
counts ``c`` over the N-th roots of unity, meaning ``sum_t c[t] * zeta_N^t``.
Count vectors are not unique (``sum_t zeta_N^t == 0``), so equality goes
through :meth:`CharacterValue.reduced`, the remainder modulo the cyclotomic
polynomial Phi_N.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gf import FieldElement, FieldError, FieldSpec, lcm

AGREEMENT_TOL = 1e-9


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first."""
    # x^n - 1 divided by Phi_d for every proper divisor d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _int_poly_div_exact(num, cyclotomic_poly(d))
    return tuple(num)


def _int_poly_div_exact(a: list[int], b: tuple[int, ...]) -> list[int]:
    a = list(a)
    quot = [0] * (len(a) - len(b) + 1)
    for shift in range(len(quot) - 1, -1, -1):
        c = a[shift + len(b) - 1]  # b is monic
        quot[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
    if any(a):
        raise AssertionError("inexact cyclotomic division")
    return quot


def _reduce_mod_cyclotomic(counts, n: int) -> tuple[int, ...]:
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    a = [int(c) for c in counts]
    for top in range(len(a) - 1, deg - 1, -1):
        c = a[top]
        if c:
            for i, pi in enumerate(phi):
                a[top - deg + i] -= c * pi
    return tuple(a[:deg])


@dataclass(frozen=True)
class CharacterValue:
    """Exact element of Z[zeta_N] given by root-of-unity counts."""

    order: int
    counts: tuple[int, ...]

    @classmethod
    def root(cls, order: int, exponent: int) -> CharacterValue:
        c = [0] * order
        c[exponent % order] = 1
        return cls(order, tuple(c))

    @classmethod
    def from_exponents(cls, order: int, exponents) -> CharacterValue:
        ex = np.asarray(exponents, dtype=np.int64) % order
        return cls(order, tuple(int(v) for v in np.bincount(ex.ravel(), minlength=order)))

    @classmethod
    def integer(cls, order: int, value: int) -> CharacterValue:
        """A rational integer; negative values use zeta_N^t = -1 when N is even,
        otherwise the identity -1 = zeta_N + ... + zeta_N^(N-1).  A negative
        value with N = 1 is returned over zeta_2."""
        if value < 0 and order == 1:
            order = 2
        c = [0] * order
        if value >= 0:
            c[0] = value
        elif order % 2 == 0:
            c[order // 2] = -value
        else:
            for t in range(1, order):
                c[t] = -value
        return cls(order, tuple(c))

    def lift(self, order: int) -> CharacterValue:
        if order % self.order:
            raise ValueError(f"cannot embed zeta_{self.order} in zeta_{order}")
        step = order // self.order
        c = [0] * order
        for t, v in enumerate(self.counts):
            c[t * step] = v
        return CharacterValue(order, tuple(c))

    def _common(self, other: CharacterValue) -> tuple[CharacterValue, CharacterValue]:
        n = lcm(self.order, other.order)
        return self.lift(n), other.lift(n)

    def __add__(self, other: CharacterValue) -> CharacterValue:
        a, b = self._common(other)
        return CharacterValue(a.order, tuple(x + y for x, y in zip(a.counts, b.counts)))

    def __mul__(self, other: CharacterValue) -> CharacterValue:
        a, b = self._common(other)
        n = a.order
        out = np.zeros(n, dtype=object)
        ca = np.array(a.counts, dtype=object)
        for t, v in enumerate(b.counts):
            if v:
                out += np.roll(ca, t) * v
        return CharacterValue(n, tuple(int(v) for v in out))

    def conjugate(self) -> CharacterValue:
        n = self.order
        return CharacterValue(n, tuple(self.counts[(-t) % n] for t in range(n)))

    @property
    def n_terms(self) -> int:
        return sum(self.counts)

    def reduced(self) -> tuple[int, ...]:
        """Canonical coordinates in the power basis of Z[zeta_N]."""
        return _reduce_mod_cyclotomic(self.counts, self.order)

    def exact_equals(self, other: CharacterValue) -> bool:
        a, b = self._common(other)
        return a.reduced() == b.reduced()

    def as_integer(self) -> int | None:
        """The value as a rational integer, or None if it is not one."""
        r = self.reduced()
        return r[0] if not any(r[1:]) else None

    def __complex__(self) -> complex:
        n = self.order
        return complex(sum(c * cmath.exp(2j * cmath.pi * t / n) for t, c in enumerate(self.counts) if c))

    @property
    def value(self) -> complex:
        return complex(self)

    def to_json(self) -> dict:
        z = complex(self)
        return {"order": self.order, "counts": list(self.counts), "real": z.real, "imag": z.imag}


def quadratic_character(x: FieldElement) -> int:
    """eta(x) in {+1, -1} for nonzero x in a field of odd characteristic."""
    if x.is_zero():
        raise FieldError("quadratic character is undefined at 0")
    f = x.field
    if f.p == 2:
        raise FieldError("quadratic character needs odd characteristic")
    return 1 if f.is_square(x.value) else -1


def multiplicative_character(j: int, x: FieldElement) -> CharacterValue:
    """psi_j(alpha^k) = zeta_{q-1}^{jk}, returned in the smallest cyclotomic ring."""
    f = x.field
    if x.is_zero():
        raise FieldError("multiplicative characters are undefined at 0")
    if not 0 <= j <= f.q - 2:
        raise FieldError(f"character index {j} outside [0, {f.q - 2}]")
    n = (f.q - 1) // math.gcd(j, f.q - 1)
    k = int(f.log_table[x.value]) if f.q <= f.enum_limit else _discrete_log(f, x.value)
    return CharacterValue.root(n, (j * k) % (f.q - 1) // ((f.q - 1) // n))


def additive_character(a: FieldElement, x: FieldElement) -> CharacterValue:
    """chi_a(x) = zeta_p^{Tr(a x)}."""
    f = x.field
    return CharacterValue.root(f.p, f.trace(f.mul(a.value, x.value)))


def _discrete_log(f: FieldSpec, a: int) -> int:
    # only reachable for fields beyond the table limit; brute force is honest here
    v, k = 1, 0
    while v != a:
        v = f.mul(v, f.generator)
        k += 1
        if k >= f.q:
            raise FieldError("discrete log failed")
    return k
