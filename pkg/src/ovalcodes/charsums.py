"""Gauss sums and Weil sums, exhaustively and in closed form.

Exhaustive sums are exact :class:`CharacterValue` objects.  Closed forms that
involve sqrt(q) are complex doubles; compare them against exhaustive values
with :data:`CLOSED_FORM_TOL`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .characters import CharacterValue
from .gf import FieldElement, FieldError, FieldSpec, lcm

CLOSED_FORM_TOL = 1e-6


def _packed(field: FieldSpec, x) -> int:
    if isinstance(x, FieldElement):
        if x.field != field:
            raise FieldError("element from a different field")
        return x.value
    return int(x)


def additive_sum(field: FieldSpec, values, b: int = 1) -> CharacterValue:
    """Sum of chi_b over an array of packed field values."""
    vals = np.asarray(values, dtype=np.int64)
    tr = field.vtrace(field.vmul(np.full_like(vals, b), vals))
    return CharacterValue.from_exponents(field.p, tr)


def gauss_sum_exhaustive(field: FieldSpec, j: int) -> CharacterValue:
    """G(psi_j, chi_1) summed over all q-1 nonzero elements."""
    q = field.q
    if not 0 <= j <= q - 2:
        raise FieldError(f"character index {j} outside [0, {q - 2}]")
    g = math.gcd(j, q - 1)
    n_psi = (q - 1) // g
    order = lcm(n_psi, field.p)
    k = np.arange(q - 1, dtype=np.int64)
    psi_exp = (j * k) % (q - 1) // g  # in units of zeta_{n_psi}
    chi_exp = field.vtrace(field.exp_table)
    exps = psi_exp * (order // n_psi) + chi_exp * (order // field.p)
    return CharacterValue.from_exponents(order, exps)


def quadratic_gauss_sum(field: FieldSpec) -> CharacterValue:
    if field.p == 2:
        raise FieldError("quadratic Gauss sum needs odd characteristic")
    return gauss_sum_exhaustive(field, (field.q - 1) // 2)


def gauss_sum_quadratic_closed_form(field: FieldSpec) -> complex:
    """(-1)^(m-1) * i^(((p-1)/2)^2 m) * sqrt(q)."""
    p, m = field.p, field.m
    if p == 2:
        raise FieldError("closed form needs odd characteristic")
    sign = -1 if (m - 1) % 2 else 1
    i_pow = (((p - 1) // 2) ** 2 * m) % 4
    return sign * (1j**i_pow) * math.sqrt(field.q)


def gauss_norm_is_q(g: CharacterValue, q: int) -> bool:
    """Check |G|^2 == q exactly in Z[zeta_N]."""
    return (g * g.conjugate()).exact_equals(CharacterValue.integer(g.order, q))


@dataclass(frozen=True)
class QuadraticPoly:
    """f(x) = a2 x^2 + a1 x + a0 with packed coefficients."""

    a2: int
    a1: int
    a0: int

    def values(self, field: FieldSpec, xs=None) -> np.ndarray:
        xs = field.elements if xs is None else np.asarray(xs, dtype=np.int64)
        sq = field.vmul(xs, xs)
        return field.vadd(field.vadd(field.vmul(np.full_like(xs, self.a2), sq),
                                     field.vmul(np.full_like(xs, self.a1), xs)),
                          np.full_like(xs, self.a0))


@dataclass(frozen=True)
class AffinePPoly:
    """f(x) = sum_i coeffs[i] x^(p^i) + const, i = 0..r."""

    coeffs: tuple[int, ...]
    const: int = 0

    @property
    def r(self) -> int:
        return len(self.coeffs) - 1

    def values(self, field: FieldSpec, xs=None) -> np.ndarray:
        xs = field.elements if xs is None else np.asarray(xs, dtype=np.int64)
        acc = np.full_like(xs, self.const)
        power = xs
        for i, c in enumerate(self.coeffs):
            if i:
                power = field.vpow(power, field.p)
            acc = field.vadd(acc, field.vmul(np.full_like(xs, c), power))
        return acc


def weil_sum_quadratic(field: FieldSpec, f: QuadraticPoly, mode: str = "exhaustive"):
    """Sum of chi_1(f(c)) over GF(q), q odd.

    ``mode="exhaustive"`` returns an exact CharacterValue (a2 == 0 allowed);
    ``mode="closed"`` returns chi(a0 - a1^2/(4 a2)) eta(a2) G(eta, chi) as a complex.
    """
    if field.p == 2:
        raise FieldError("quadratic Weil sum formula needs q odd")
    if mode == "exhaustive":
        return additive_sum(field, f.values(field))
    if mode != "closed":
        raise ValueError(f"unknown mode {mode!r}")
    if f.a2 == 0:
        raise FieldError("closed form requires a2 != 0")
    four_a2 = field.mul(4 % field.p, f.a2)
    shift = field.sub(f.a0, field.mul(field.mul(f.a1, f.a1), field.inv(four_a2)))
    chi = cmath.exp(2j * cmath.pi * field.trace(shift) / field.p)
    eta = 1 if field.is_square(f.a2) else -1
    return chi * eta * gauss_sum_quadratic_closed_form(field)


def weil_sum_even_char(field: FieldSpec, f: QuadraticPoly, b, mode: str = "closed") -> CharacterValue:
    """Sum of chi_b(f(c)) over GF(2^m): chi_b(a0) q if a2 == b a1^2, else 0."""
    if field.p != 2:
        raise FieldError("even-characteristic Weil sum needs p = 2")
    b = _packed(field, b)
    if b == 0:
        raise FieldError("b must be nonzero")
    if mode == "exhaustive":
        return additive_sum(field, f.values(field), b)
    if mode != "closed":
        raise ValueError(f"unknown mode {mode!r}")
    if f.a2 == field.mul(b, field.mul(f.a1, f.a1)):
        return CharacterValue.root(2, field.trace(field.mul(b, f.a0))) * CharacterValue.integer(2, field.q)
    return CharacterValue.integer(2, 0)


def p_poly_condition(field: FieldSpec, f: AffinePPoly, b: int) -> bool:
    """b a_r + b^p a_{r-1}^p + ... + b^(p^r) a_0^(p^r) == 0."""
    acc = 0
    r = f.r
    for i in range(r + 1):
        term = field.mul(b, f.coeffs[r - i])
        acc = field.add(acc, field.pow(term, field.p**i))
    return acc == 0


def weil_sum_affine_p_poly(field: FieldSpec, f: AffinePPoly, b, mode: str = "closed") -> CharacterValue:
    """Sum of chi_b(f(c)): chi_b(const) q when the twisted-coefficient condition holds, else 0."""
    b = _packed(field, b)
    if b == 0:
        raise FieldError("b must be nonzero")
    if mode == "exhaustive":
        return additive_sum(field, f.values(field), b)
    if mode != "closed":
        raise ValueError(f"unknown mode {mode!r}")
    if p_poly_condition(field, f, b):
        return CharacterValue.root(field.p, field.trace(field.mul(b, f.const))) * CharacterValue.integer(field.p, field.q)
    return CharacterValue.integer(field.p, 0)


class SegreDelta(NamedTuple):
    value: CharacterValue
    integer: int
    sign: int  # +1 / -1 for a nonzero value, 0 otherwise


def segre_root(field: FieldSpec, a: int) -> int:
    """The unique y with a y^6 = 1 (x -> x^6 permutes GF(2^m)* for odd m)."""
    if a == 0:
        raise FieldError("a must be nonzero")
    # 6 is invertible mod 2^m - 1 for odd m
    e = pow(6, -1, field.q - 1)
    return field.pow(field.inv(a), e)


def delta_sum_segre(field: FieldSpec, a, b) -> SegreDelta:
    """Delta(a, b) = sum_x chi(a x^6 + b x), p = 2, m odd, with the observed sign."""
    if field.p != 2 or field.m % 2 == 0:
        raise FieldError("Segre sums need p = 2 and odd m")
    a, b = _packed(field, a), _packed(field, b)
    xs = field.elements
    vals = field.vadd(field.vmul(np.full_like(xs, a), field.vpow(xs, 6)),
                      field.vmul(np.full_like(xs, b), xs))
    s = additive_sum(field, vals)
    n = s.counts[0] - s.counts[1]
    return SegreDelta(s, n, (n > 0) - (n < 0))


def evaluate_poly(field: FieldSpec, coeffs: Sequence[int], xs=None) -> np.ndarray:
    """Horner evaluation of sum coeffs[i] x^i at packed points."""
    xs = field.elements if xs is None else np.asarray(xs, dtype=np.int64)
    acc = np.zeros_like(xs)
    for c in reversed(list(coeffs)):
        acc = field.vadd(field.vmul(acc, xs), np.full_like(xs, c))
    return acc
