"""Points of PG(2, q): arcs, o-polynomials, hyperovals, conics and their codes."""

from __future__ import annotations

import itertools
import json
import re
from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .charsums import evaluate_poly
from .codes import LinearCode
from .gf import FieldError, FieldSpec

O_POLY_LIMIT = 2**10

Point = tuple[int, int, int]


class GeometryError(ValueError):
    pass


def normalize(field: FieldSpec, triple: Sequence[int]) -> Point:
    """Scale so the first nonzero coordinate is 1."""
    lead = next((int(c) for c in triple if c), None)
    if lead is None:
        raise GeometryError("(0, 0, 0) is not a projective point")
    inv = field.inv(lead)
    return tuple(field.mul(int(c), inv) for c in triple)  # type: ignore[return-value]


@dataclass(frozen=True)
class PointSet:
    """Normalized points of PG(2, q), in construction order."""

    field: FieldSpec
    points: tuple[Point, ...]

    @classmethod
    def from_triples(cls, field: FieldSpec, triples) -> PointSet:
        return cls(field, tuple(normalize(field, t) for t in triples))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=np.int64).reshape(-1, 3)

    def to_json(self) -> str:
        """Triples of canonical enumeration indices."""
        f = self.field
        return json.dumps([[f.index_of(c) for c in pt] for pt in self.points])

    @classmethod
    def from_json(cls, field: FieldSpec, text: str) -> PointSet:
        return cls.from_triples(field, [[field.at_index(i) for i in t] for t in json.loads(text)])


class ArcCheck(NamedTuple):
    is_arc: bool
    witness: tuple[Point, ...] | None


def _det3(f: FieldSpec, a, b, c):
    # a, b, c: (..., 3) arrays of packed elements
    def minor(i, j):
        return f.vsub(f.vmul(b[..., i], c[..., j]), f.vmul(b[..., j], c[..., i]))

    t0 = f.vmul(a[..., 0], minor(1, 2))
    t1 = f.vmul(a[..., 1], minor(0, 2))
    t2 = f.vmul(a[..., 2], minor(0, 1))
    return f.vadd(f.vsub(t0, t1), t2)


def is_arc(points: PointSet) -> ArcCheck:
    """No three points collinear; on failure return one collinear triple."""
    if len(points) < 3:
        raise GeometryError("an arc needs at least 3 points")
    if len(set(points.points)) != len(points):
        raise GeometryError("duplicate points")
    f = points.field
    P = points.as_array()
    triples = np.array(list(itertools.combinations(range(len(P)), 3)), dtype=np.int64)
    for chunk in np.array_split(triples, max(1, len(triples) // 200_000)):
        det = _det3(f, P[chunk[:, 0]], P[chunk[:, 1]], P[chunk[:, 2]])
        bad = np.nonzero(det == 0)[0]
        if bad.size:
            i, j, k = chunk[bad[0]]
            return ArcCheck(False, (points.points[i], points.points[j], points.points[k]))
    return ArcCheck(True, None)


# -- o-polynomials -------------------------------------------------------------


def parse_polynomial(text: str, field: FieldSpec | None = None) -> tuple[int, ...]:
    """Parse ``x^6``, ``x^2+x^4``, ``3*x^2+1`` or a comma list ``0,0,1``.

    Coefficients are packed field elements; the result is constant-term first.
    """
    text = text.replace(" ", "")
    if not text:
        raise GeometryError("empty polynomial")
    if re.fullmatch(r"\d+(,\d+)*", text) and "," in text:
        coeffs = [int(t) for t in text.split(",")]
    else:
        terms: dict[int, int] = {}
        for term in text.split("+"):
            m = re.fullmatch(r"(?:(\d+)\*?)?(x(?:\^(\d+))?)?", term)
            if not term or m is None or (m.group(1) is None and m.group(2) is None):
                raise GeometryError(f"cannot parse term {term!r}")
            coef = int(m.group(1)) if m.group(1) else 1
            deg = 0 if m.group(2) is None else int(m.group(3) or 1)
            if field is not None and deg in terms:
                terms[deg] = field.add(terms[deg], coef)
            else:
                terms[deg] = terms.get(deg, 0) + coef
        coeffs = [0] * (max(terms) + 1)
        for d, c in terms.items():
            coeffs[d] = c
    if field is not None and any(not 0 <= c < field.q for c in coeffs):
        raise GeometryError("coefficient outside the field")
    return tuple(coeffs)


class OPolyCheck(NamedTuple):
    ok: bool
    reason: str


@dataclass(frozen=True)
class OPolynomial:
    """An o-polynomial over GF(2^m) that passed :func:`is_o_polynomial`."""

    field: FieldSpec
    coeffs: tuple[int, ...]

    @classmethod
    def verified(cls, field: FieldSpec, coeffs: Sequence[int] | str) -> OPolynomial:
        if isinstance(coeffs, str):
            coeffs = parse_polynomial(coeffs, field)
        check = is_o_polynomial(coeffs, field)
        if not check.ok:
            raise GeometryError(f"not an o-polynomial over {field}: {check.reason}")
        return cls(field, tuple(coeffs))

    def values(self, xs=None) -> np.ndarray:
        return evaluate_poly(self.field, self.coeffs, xs)


def _is_perm_rows(vals: np.ndarray) -> np.ndarray:
    s = np.sort(vals, axis=-1)
    return (s == np.arange(vals.shape[-1])).all(axis=-1)


def is_o_polynomial(coeffs: Sequence[int] | str, field: FieldSpec) -> OPolyCheck:
    """Exhaustive check of both o-polynomial conditions over GF(2^m)."""
    if field.p != 2:
        raise FieldError("o-polynomials live in characteristic 2")
    if field.q > O_POLY_LIMIT:
        raise GeometryError(f"refusing exhaustive o-polynomial check for q > {O_POLY_LIMIT}")
    if isinstance(coeffs, str):
        coeffs = parse_polynomial(coeffs, field)
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    q = field.q
    if len(coeffs) - 1 >= q:
        return OPolyCheck(False, f"degree {len(coeffs) - 1} >= q")
    fv = evaluate_poly(field, coeffs, np.arange(q))  # indexed by packed value
    if fv[0] != 0:
        return OPolyCheck(False, "f(0) != 0")
    if fv[1] != 1:
        return OPolyCheck(False, "f(1) != 1")
    if not _is_perm_rows(fv[None, :])[0]:
        return OPolyCheck(False, "f is not a permutation")
    xs = np.arange(q, dtype=np.int64)
    x_pow = field.vpow(xs, q - 2)
    shifted = field.vadd(xs[None, :], xs[:, None])  # row a: x + a
    g = field.vmul(field.vadd(fv[shifted], fv[xs][:, None]), x_pow[None, :])
    perm = _is_perm_rows(g)
    if not perm.all():
        a = int(np.nonzero(~perm)[0][0])
        return OPolyCheck(False, f"g_a is not a permutation for a = {a}")
    return OPolyCheck(True, "")


# -- point sets and codes --------------------------------------------------------


def _hyperoval_columns(f: OPolynomial) -> np.ndarray:
    field = f.field
    xs = field.elements
    cols = np.stack([f.values(xs), xs, np.ones_like(xs)], axis=0)
    special = np.array([[1, 0], [0, 1], [0, 0]], dtype=np.int64)
    return np.hstack([cols, special])


def _conic_columns(field: FieldSpec) -> np.ndarray:
    if field.p == 2:
        raise FieldError("conic construction needs q odd")
    xs = field.elements
    cols = np.stack([field.vmul(xs, xs), xs, np.ones_like(xs)], axis=0)
    return np.hstack([cols, np.array([[1], [0], [0]], dtype=np.int64)])


def hyperoval_points(f: OPolynomial) -> PointSet:
    if not isinstance(f, OPolynomial):
        raise GeometryError("hyperoval_points needs a verified OPolynomial")
    return PointSet.from_triples(f.field, _hyperoval_columns(f).T)


def conic_points(field: FieldSpec) -> PointSet:
    return PointSet.from_triples(field, _conic_columns(field).T)


def all_lines(field: FieldSpec) -> np.ndarray:
    """Normalized coefficient triples of the q^2 + q + 1 lines."""
    xs = field.elements
    q = field.q
    a = np.stack(np.meshgrid(xs, xs, indexing="ij"), axis=-1).reshape(-1, 2)
    lines = [np.column_stack([np.ones(q * q, dtype=np.int64), a]),
             np.column_stack([np.zeros(q, dtype=np.int64), np.ones(q, dtype=np.int64), xs]),
             np.array([[0, 0, 1]], dtype=np.int64)]
    return np.vstack(lines)


def line_intersection_profile(points: PointSet) -> dict[int, int]:
    """Map |line ∩ points| -> number of lines with that intersection size."""
    f = points.field
    L = all_lines(f)
    P = points.as_array()
    dots = f.vadd(f.vadd(f.vmul(L[:, None, 0], P[None, :, 0]),
                         f.vmul(L[:, None, 1], P[None, :, 1])),
                  f.vmul(L[:, None, 2], P[None, :, 2]))
    sizes = (dots == 0).sum(axis=1)
    return dict(sorted(Counter(int(s) for s in sizes).items()))


def hyperoval_code(f: OPolynomial) -> LinearCode:
    """[q+2, 3] code with columns (f(x), x, 1) in canonical order, then (1,0,0), (0,1,0)."""
    if not isinstance(f, OPolynomial):
        raise GeometryError("hyperoval_code needs a verified OPolynomial")
    return LinearCode(f.field, _hyperoval_columns(f), name="hyperoval")


def conic_code(field: FieldSpec) -> LinearCode:
    """[q+1, 3] code with columns (x^2, x, 1) in canonical order, then (1,0,0)."""
    return LinearCode(field, _conic_columns(field), name="conic")


def translation_opoly(field: FieldSpec) -> OPolynomial:
    return OPolynomial.verified(field, (0, 0, 1))


def segre_opoly(field: FieldSpec) -> OPolynomial:
    return OPolynomial.verified(field, (0, 0, 0, 0, 0, 0, 1))
