"""Closed-form weight distributions, counting identities and optimality labels.

Everything here is exact integer arithmetic.  Sign factors such as
(-1)^((p-1)(m+1)/4) or (sqrt(-1))^((p-1)m/2) are evaluated from the parity of
their exponents and asserted to be +1 or -1.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable

from .charsums import segre_root
from .codes import CodeError, WeightDistribution, sphere_packing_max_d
from .gf import FieldError, FieldSpec, factorize


class OutsideTheoremScope(ValueError):
    """Parameters are valid for construction but no closed form applies."""


def _minus_one_pow(num: int, den: int = 1) -> int:
    """(-1)^(num/den); the exponent must be an integer."""
    if num % den:
        raise AssertionError(f"non-integral sign exponent {num}/{den}")
    return -1 if (num // den) % 2 else 1


def _sqrt_minus_one_pow(e: int) -> int:
    """(sqrt(-1))^e, which must be real."""
    if e % 2:
        raise AssertionError(f"i^{e} is not real")
    return _minus_one_pow(e, 2)


def _half(x: int) -> int:
    if x % 2:
        raise AssertionError(f"odd numerator {x} in a halved multiplicity")
    return x // 2


@dataclass(frozen=True)
class PredictedDistribution:
    """Table rows (weight, multiplicity) as exact integers, before merging."""

    family: str
    p: int
    m: int
    q: int  # alphabet size of the code
    n: int
    k: int
    rows: tuple[tuple[int, int], ...]
    notes: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if any(mult < 0 for _, mult in self.rows):
            raise AssertionError(f"negative multiplicity in {self.family} prediction")
        if sum(mult for _, mult in self.rows) != self.q**self.k:
            raise AssertionError(f"{self.family} rows do not sum to {self.q}^{self.k}")

    def merged(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for w, mult in self.rows:
            if mult:
                out[w] = out.get(w, 0) + mult
        return dict(sorted(out.items()))

    def distribution(self) -> WeightDistribution:
        return WeightDistribution(self.n, self.k, self.q, self.merged())

    @property
    def min_distance(self) -> int:
        return min(w for w in self.merged() if w > 0)


def _prime_power(q: int) -> tuple[int, int]:
    fac = factorize(q)
    if len(fac) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, m), = fac.items()
    return p, m


def predict_hyperoval(q: int) -> PredictedDistribution:
    p, m = _prime_power(q)
    if p != 2 or q <= 2:
        raise FieldError("hyperoval codes need q = 2^m > 2")
    rows = ((0, 1), (q, (q + 2) * (q * q - 1) // 2), (q + 2, q * (q - 1) ** 2 // 2))
    return PredictedDistribution("hyperoval", p, m, q, q + 2, 3, rows)


def predict_conic(q: int) -> PredictedDistribution:
    p, m = _prime_power(q)
    if p == 2:
        raise FieldError("conic codes need q odd")
    rows = ((0, 1), (q - 1, q * (q * q - 1) // 2), (q, q * q - 1), (q + 1, q * (q - 1) ** 2 // 2))
    return PredictedDistribution("conic", p, m, q, q + 1, 3, rows)


def predict_translation_binary(m: int) -> PredictedDistribution:
    if m < 2:
        raise OutsideTheoremScope("translation-binary needs m >= 2")
    h = 2 ** (m - 1)
    rows = ((0, 1), (2, 1), (2**m, 1), (2**m + 2, 1),
            (h, 2 * (h - 1)), (h + 1, 2 ** (m + 1)), (h + 2, 2 * (h - 1)))
    return PredictedDistribution("translation-binary", 2, m, 2, 2**m + 2, m + 2, rows)


def predict_segre_binary(m: int) -> PredictedDistribution:
    if m < 3 or m % 2 == 0:
        raise OutsideTheoremScope("Segre closed form needs odd m >= 3")
    h = 2 ** (m - 1)
    s = 2 ** ((m - 1) // 2)
    rows = ((0, 1), (2**m, 1),
            (h, (h - 1) * (h + 2)),
            (h + 1, 2**m * (h + 1)),
            (h + 2, h * (h - 1)),
            (h + s, 2 ** (m - 2) * (h - 1)),
            (h - s, 2 ** (m - 2) * (h - 1)),
            (h + s + 1, h * (h - 1)),
            (h - s + 1, h * (h - 1)),
            (h + s + 2, 2 ** (m - 2) * (h + 1)),
            (h - s + 2, 2 ** (m - 2) * (h + 1)))
    return PredictedDistribution("segre", 2, m, 2, 2**m + 2, 2 * m + 1, rows)


def _odd_params(p: int, m: int):
    if p == 2:
        raise FieldError("odd-characteristic family called with p = 2")
    if m < 1:
        raise FieldError("m must be positive")
    return p ** (m - 1), p ** (m - 1) * (p - 1)


def iota(p: int, m: int) -> int:
    """(sqrt(-1))^((p-1)m/2) for even m, as +1/-1."""
    return _sqrt_minus_one_pow((p - 1) * m // 2)


def predict_translation_odd(p: int, m: int) -> PredictedDistribution:
    """Weight distribution of ((Tr(ax^2+bx)+c)_x, Tr(a), Tr(b)) for odd p."""
    P, base = _odd_params(p, m)
    pm = p**m
    if m % 2:
        e = _minus_one_pow((p - 1) * (m + 1), 4)
        s = p ** ((m - 1) // 2) * e
        rows = [(0, 1), (pm, p - 1),
                (base, (P - 1) * (p + P)),
                (base + 1, (pm - P) * (p + 2 * P - 1)),
                (base + 2, (pm - P) ** 2)]
        for w in (base - s, base + s):
            rows += [(w, _half(P * (p - 1) * (P - 1))),
                     (w + 1, _half(P * (p - 1) ** 2 * (2 * P - 1))),
                     (w + 2, _half(p ** (2 * m - 2) * (p - 1) ** 3))]
    else:
        e = _minus_one_pow(m * (p - 1), 4)
        io = iota(p, m)
        t = p ** ((m - 2) // 2)
        u = (p - 1) * t * e
        rows = [(0, 1), (pm, p - 1),
                (base, p * (P - 1)),
                (base + 1, pm * (p - 1)),
                (base + u, _half(P * (P - 1 - (p - 1) * t * io))),
                (base + u + 1, _half(P * (p - 1) * (2 * P - 1 - (p - 2) * t * io))),
                (base + u + 2, _half(P * (p - 1) ** 2 * (P + t * io))),
                (base - u, _half(P * (P - 1 + (p - 1) * t * io))),
                (base - u + 1, _half(P * (p - 1) * (2 * P - 1 + (p - 2) * t * io))),
                (base - u + 2, _half(P * (p - 1) ** 2 * (P - t * io))),
                (base - t * e, _half(P * (p - 1) * (P - 1 - (p - 1) * t * io))),
                (base - t * e + 1, _half(P * (p - 1) ** 2 * (2 * P - 1 - (p - 2) * t * io))),
                (base - t * e + 2, _half(P * (p - 1) ** 3 * (P + t * io))),
                (base + t * e, _half(P * (p - 1) * (P - 1 + (p - 1) * t * io))),
                (base + t * e + 1, _half(P * (p - 1) ** 2 * (2 * P - 1 + (p - 2) * t * io))),
                (base + t * e + 2, _half(P * (p - 1) ** 3 * (P - t * io)))]
    return PredictedDistribution("translation-odd", p, m, p, pm + 2, 2 * m + 1, tuple(rows))


def predict_conic_subfield(p: int, m: int) -> PredictedDistribution:
    """Weight distribution of ((Tr(ax^2+bx)+c)_x, Tr(a)) for odd p and m > 1."""
    P, base = _odd_params(p, m)
    if m < 2:
        raise OutsideTheoremScope("conic subfield closed form needs m > 1")
    pm = p**m
    if m % 2:
        e = _minus_one_pow((p - 1) * (m + 1), 4)
        s = p ** ((m - 1) // 2) * e
        rows = [(0, 1), (pm, p - 1),
                (base, p * (pm - 1) + pm * (P - 1)),
                (base + 1, pm * (pm - P))]
        for w in (base - s, base + s):
            rows += [(w, _half(pm * (P - 1) * (p - 1))),
                     (w + 1, _half(p ** (2 * m - 1) * (p - 1) ** 2))]
    else:
        e = _minus_one_pow(m * (p - 1), 4)
        io = iota(p, m)
        t = p ** ((m - 2) // 2)
        u = (p - 1) * t * e
        rows = [(0, 1), (pm, p - 1),
                (base, p * (pm - 1)),
                (base + u, _half(pm * (P - 1 - (p - 1) * t * io))),
                (base + u + 1, _half(pm * (p - 1) * (P + t * io))),
                (base - u, _half(pm * (P - 1 + (p - 1) * t * io))),
                (base - u + 1, _half(pm * (p - 1) * (P - t * io))),
                (base - t * e, _half(pm * (p - 1) * (P - 1 - (p - 1) * t * io))),
                (base - t * e + 1, _half(pm * (p - 1) ** 2 * (P + t * io))),
                (base + t * e, _half(pm * (p - 1) * (P - 1 + (p - 1) * t * io))),
                (base + t * e + 1, _half(pm * (p - 1) ** 2 * (P - t * io)))]
    return PredictedDistribution("conic-subfield", p, m, p, pm + 1, 2 * m + 1, tuple(rows))


def predicted_min_distance(family: str, p: int, m: int) -> int:
    """Minimum distance from the closed-form parameters, independent of the weight rows."""
    if family == "translation-binary":
        return 2
    if family == "segre":
        return 2 ** (m - 1) - 2 ** ((m - 1) // 2)
    if family in ("translation-odd", "conic-subfield"):
        if family == "translation-odd" and m == 1:
            return p - 1
        if m % 2:
            return p ** (m - 1) * (p - 1) - p ** ((m - 1) // 2)
        return p ** (m - 1) * (p - 1) - (p - 1) * p ** ((m - 2) // 2)
    raise KeyError(family)


# -- counting identities -----------------------------------------------------------


def count_N0_even(field: FieldSpec, a: int, b: int) -> int:
    """#{x : Tr(a x^2 + b x) = 0} over GF(2^m): q if a = b^2, else q/2."""
    if field.p != 2:
        raise FieldError("needs p = 2")
    return field.q if a == field.mul(b, b) else field.q // 2


def count_N0_segre(field: FieldSpec, a: int, b: int) -> tuple[int, ...]:
    """Admissible values of #{x : Tr(a x^6 + b x) = 0}; two values when the sign is open."""
    if field.p != 2 or field.m % 2 == 0:
        raise FieldError("needs p = 2 and m odd")
    m = field.m
    if a == 0:
        return (2**m,) if b == 0 else (2 ** (m - 1),)
    if field.trace(field.mul(b, segre_root(field, a))) == 0:
        return (2 ** (m - 1),)
    s = 2 ** ((m - 1) // 2)
    return (2 ** (m - 1) - s, 2 ** (m - 1) + s)


def _eta_prime(p: int, c: int) -> int:
    return 1 if pow(c % p, (p - 1) // 2, p) == 1 else -1


def count_N0_odd(field: FieldSpec, a: int, b: int, c: int) -> int:
    """#{x : Tr(a x^2 + b x) + c = 0} over GF(p^m), p odd, c in GF(p)."""
    p, m = field.p, field.m
    if p == 2:
        raise FieldError("needs p odd")
    P = p ** (m - 1)
    c %= p
    if a == 0:
        if b != 0:
            return P
        return p**m if c == 0 else 0
    T = field.trace(field.mul(field.mul(b, b), field.inv(field.mul(4 % p, a))))
    eta_a = 1 if field.is_square(a) else -1
    if m % 2:
        if c == T:
            return P
        e = _minus_one_pow((p - 1) * (m + 1), 4)
        return P + p ** ((m - 1) // 2) * e * eta_a * _eta_prime(p, c - T)
    e = _minus_one_pow(m * (p - 1), 4)
    t = p ** ((m - 2) // 2)
    if c == T:
        return P - (p - 1) * t * e * eta_a
    return P + t * e * eta_a


def count_lemma_segre(field: FieldSpec, a: int, case: int) -> int:
    """#{b : (Tr(b), Tr(b y_a)) = pattern} for case 1..4 = (0,0), (1,0), (0,1), (1,1)."""
    if field.p != 2 or field.m % 2 == 0:
        raise FieldError("needs p = 2 and m odd")
    if a == 0:
        raise FieldError("a must be nonzero")
    if case not in (1, 2, 3, 4):
        raise ValueError("case must be 1..4")
    m = field.m
    if a == 1:
        return 2 ** (m - 1) if case in (1, 4) else 0
    return 2 ** (m - 2)


def count_lemma_eta_trace(field: FieldSpec, sign: int, trace_zero: bool) -> int:
    """#{a != 0 : eta(a) = sign, Tr(a) == 0 (or != 0)} over GF(p^m), p odd."""
    p, m = field.p, field.m
    if p == 2:
        raise FieldError("needs p odd")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    P = p ** (m - 1)
    if m % 2:
        return (P - 1) // 2 if trace_zero else P * (p - 1) // 2
    ti = p ** ((m - 2) // 2) * iota(p, m)
    if trace_zero:
        return _half(P - 1 - sign * (p - 1) * ti)
    return _half((p - 1) * (P + sign * ti))


# -- optimality --------------------------------------------------------------------


class Optimality(str, enum.Enum):
    OPTIMAL = "Optimal"
    ALMOST_OPTIMAL = "AlmostOptimal"
    SPHERE_PACKING = "DistanceOptimalBySpherePacking"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class BestKnownTable:
    """(p, n, k) -> best known minimum distance."""

    entries: dict[tuple[int, int, int], tuple[int, str]]

    @classmethod
    def from_csv(cls, text: str) -> BestKnownTable:
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None or [h.strip() for h in reader.fieldnames] != ["p", "n", "k", "d_best", "source"]:
            raise CodeError("best-known table needs header p,n,k,d_best,source")
        entries = {}
        for lineno, row in enumerate(reader, 2):
            try:
                key = (int(row["p"]), int(row["n"]), int(row["k"]))
                entries[key] = (int(row["d_best"]), row["source"].strip())
            except (TypeError, ValueError) as exc:
                raise CodeError(f"malformed best-known row at line {lineno}: {row}") from exc
        return cls(entries)

    @classmethod
    def bundled(cls) -> BestKnownTable:
        return cls.from_csv(resources.files("ovalcodes.data").joinpath("best_known.csv").read_text())

    @classmethod
    def empty(cls) -> BestKnownTable:
        return cls({})

    def merge(self, other: BestKnownTable) -> BestKnownTable:
        return BestKnownTable({**self.entries, **other.entries})

    def lookup(self, p: int, n: int, k: int) -> int | None:
        hit = self.entries.get((p, n, k))
        return None if hit is None else hit[0]


def optimality_label(n: int, k: int, d: int, p: int, table: BestKnownTable | None = None) -> Optimality:
    table = BestKnownTable.bundled() if table is None else table
    best = table.lookup(p, n, k)
    if best is not None:
        if d == best:
            return Optimality.OPTIMAL
        if d + 1 == best:
            return Optimality.ALMOST_OPTIMAL
    if d == sphere_packing_max_d(n, k, p):
        return Optimality.SPHERE_PACKING
    return Optimality.UNKNOWN


def distribution_mismatch(predicted: dict[int, int], enumerated: dict[int, int]) -> list[dict]:
    rows = []
    for w in sorted(set(predicted) | set(enumerated)):
        a, b = predicted.get(w, 0), enumerated.get(w, 0)
        if a != b:
            rows.append({"weight": w, "predicted": a, "enumerated": b})
    return rows


def all_families() -> Iterable[str]:
    return ("translation-binary", "segre", "translation-odd", "conic-subfield")
