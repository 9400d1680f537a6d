"""Subfield codes: basis expansion of a generator and trace representations.

Both constructions produce codes over the prime field GF(p).  The trace
codes list coordinates in canonical element order followed by Tr(a) (and
Tr(b) for the hyperoval families).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .codes import LinearCode, codes_equal_as_sets, rank, rref
from .gf import FieldError, FieldSpec, make_field


class NoClosedFormWarning(UserWarning):
    """The construction is valid but no weight-distribution formula covers it."""


@lru_cache(maxsize=None)
def prime_field(p: int) -> FieldSpec:
    return make_field(p, 1)


@dataclass(frozen=True)
class SubfieldBasis:
    """m packed elements of GF(p^m), linearly independent over GF(p)."""

    field: FieldSpec
    elements: tuple[int, ...]

    def __post_init__(self):
        f = self.field
        if len(self.elements) != f.m:
            raise FieldError(f"a basis of {f} over GF({f.p}) needs {f.m} elements")
        if rank(prime_field(f.p), self.coordinate_matrix) != f.m:
            raise FieldError(f"{self.elements} is not a basis of {f} over GF({f.p})")

    @classmethod
    def polynomial(cls, field: FieldSpec) -> SubfieldBasis:
        """1, alpha, ..., alpha^(m-1) for the field's primitive element alpha."""
        return cls(field, tuple(field.pow(field.generator, i) for i in range(field.m)))

    @property
    def coordinate_matrix(self) -> np.ndarray:
        """Columns are the coefficient vectors of the basis elements."""
        return self.field.vdigits(np.array(self.elements, dtype=np.int64)).T

    @property
    def inverse(self) -> np.ndarray:
        f = self.field
        gp = prime_field(f.p)
        aug = np.hstack([self.coordinate_matrix, np.eye(f.m, dtype=np.int64)])
        R, _, _ = rref(gp, aug)
        return R[:, f.m:]

    def coordinates(self, values) -> np.ndarray:
        """Coordinates over GF(p), shape ``values.shape + (m,)``."""
        digits = self.field.vdigits(values)
        return (digits @ self.inverse.T) % self.field.p


def expand_generator(G, field: FieldSpec, basis: SubfieldBasis | None = None) -> np.ndarray:
    """Replace each entry by its m coordinates, stacked per original row."""
    basis = SubfieldBasis.polynomial(field) if basis is None else basis
    if basis.field != field:
        raise FieldError("basis belongs to a different field")
    G = np.atleast_2d(np.asarray(G, dtype=np.int64))
    k, n = G.shape
    coords = basis.coordinates(G)  # (k, n, m)
    return coords.transpose(0, 2, 1).reshape(k * field.m, n)


def subfield_code(code: LinearCode, basis: SubfieldBasis | None = None) -> LinearCode:
    expanded = expand_generator(code.generator, code.field, basis)
    return LinearCode(prime_field(code.field.p), expanded,
                      name=f"subfield code of {code.name}".strip())


def basis_independence_check(code: LinearCode, bases: Sequence[SubfieldBasis]) -> bool:
    codes = [subfield_code(code, b) for b in bases]
    return all(codes_equal_as_sets(codes[0], c) for c in codes[1:])


def random_basis(field: FieldSpec, rng: np.random.Generator) -> SubfieldBasis:
    gp = prime_field(field.p)
    while True:
        M = rng.integers(0, field.p, size=(field.m, field.m))
        if rank(gp, M) == field.m:
            weights = field.p ** np.arange(field.m)
            return SubfieldBasis(field, tuple(int(v) for v in weights @ M))


# -- trace representations ---------------------------------------------------------


@dataclass(frozen=True)
class TraceCodeword:
    coords: tuple[int, ...]
    a: int
    b: int
    c: int


def _tails(field: FieldSpec, a: int, b: int, with_b: bool) -> list[int]:
    return [field.trace(a), field.trace(b)] if with_b else [field.trace(a)]


def trace_codeword(field: FieldSpec, exponent: int, a: int, b: int, c: int,
                   with_b: bool = True) -> TraceCodeword:
    """((Tr(a x^e + b x) + c)_x, Tr(a)[, Tr(b)]) with x in canonical order."""
    xs = field.elements
    body = field.vadd(field.vmul(np.full_like(xs, a), field.vpow(xs, exponent)),
                      field.vmul(np.full_like(xs, b), xs))
    coords = (field.vtrace(body) + c) % field.p
    return TraceCodeword(tuple(int(v) for v in coords) + tuple(_tails(field, a, b, with_b)), a, b, c)


def all_trace_codewords(field: FieldSpec, exponent: int, with_b: bool = True) -> np.ndarray:
    """Codewords for every (a, b, c) in GF(q) x GF(q) x GF(p), c fastest."""
    xs = field.elements
    q, p = field.q, field.p
    tr_ax = field.vtrace(field.vmul(xs[:, None], field.vpow(xs, exponent)[None, :]))  # (a, x)
    tr_bx = field.vtrace(field.vmul(xs[:, None], xs[None, :]))  # (b, x)
    body = (tr_ax[:, None, None, :] + tr_bx[None, :, None, :]
            + np.arange(p)[None, None, :, None]) % p
    tails = [np.broadcast_to(field.vtrace(xs)[:, None, None], (q, q, p))]
    if with_b:
        tails.append(np.broadcast_to(field.vtrace(xs)[None, :, None], (q, q, p)))
    words = np.concatenate([body] + [t[..., None] for t in tails], axis=-1)
    return words.reshape(q * q * p, -1)


def trace_generator(field: FieldSpec, exponent: int, with_b: bool = True) -> np.ndarray:
    """Rows for a, b in {alpha^0..alpha^(m-1)} and c = 1 (2m+1 rows, possibly redundant)."""
    basis = [field.pow(field.generator, i) for i in range(field.m)]
    rows = [trace_codeword(field, exponent, a, 0, 0, with_b).coords for a in basis]
    rows += [trace_codeword(field, exponent, 0, b, 0, with_b).coords for b in basis]
    rows.append(trace_codeword(field, exponent, 0, 0, 1, with_b).coords)
    return np.array(rows, dtype=np.int64)


def trace_code_translation(field: FieldSpec) -> LinearCode:
    """Binary subfield code of the translation hyperoval code, [2^m+2, m+2, 2]."""
    if field.p != 2 or field.m < 2:
        raise FieldError("translation family needs GF(2^m) with m >= 2")
    return LinearCode(prime_field(2), trace_generator(field, 2), name="translation-binary")


def trace_code_segre(field: FieldSpec) -> LinearCode:
    """Binary subfield code of the Segre hyperoval code (x^6)."""
    if field.p != 2 or field.m < 2:
        raise FieldError("Segre family needs GF(2^m)")
    if field.m % 2 == 0:
        warnings.warn(f"x^6 is not an o-polynomial over {field}; no closed-form oracle",
                      NoClosedFormWarning, stacklevel=2)
    return LinearCode(prime_field(2), trace_generator(field, 6), name="segre")


def trace_code_translation_odd(field: FieldSpec) -> LinearCode:
    """p-ary generalisation ((Tr(a x^2 + b x) + c)_x, Tr(a), Tr(b)), p odd."""
    if field.p == 2:
        raise FieldError("translation-odd family needs p odd")
    return LinearCode(prime_field(field.p), trace_generator(field, 2), name="translation-odd")


def trace_code_conic(field: FieldSpec) -> LinearCode:
    """p-ary subfield code of the conic code: ((Tr(a x^2 + b x) + c)_x, Tr(a))."""
    if field.p == 2:
        raise FieldError("conic family needs p odd")
    return LinearCode(prime_field(field.p), trace_generator(field, 2, with_b=False), name="conic-subfield")
