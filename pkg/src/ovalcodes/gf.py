"""Exact arithmetic in GF(p) and GF(p^m).

Elements are stored as integers: the coefficient vector ``(c_0, ..., c_{m-1})``
of the residue polynomial ``sum c_i x^i`` is packed as ``sum c_i p^i``.  So the
prime subfield GF(p) is exactly the integers ``0..p-1`` and the packing of a
prime-field element is its value.

Scalar operations work for any ``q = p^m <= 2**63``.  Vectorised operations on
numpy integer arrays (``vadd``, ``vmul``, ...) rely on exp/log tables and are
limited to ``q <= enum_limit`` (default ``2**20``).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_ORDER = 2**63
DEFAULT_ENUM_LIMIT = int(os.environ.get("OVALCODES_ENUM_LIMIT", 2**20))
# scalar ops switch to table lookups below this size
_SCALAR_TABLE_LIMIT = 2**16


class FieldError(ValueError):
    """Invalid field parameters or an illegal field operation."""


# -- integer helpers ---------------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = 3
    while r * r <= n:
        if n % r == 0:
            return False
        r += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# -- polynomials over Z_p (coefficient tuples, constant term first) ---------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * inv_lead % p
        quot[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return quot, a


def poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return poly_divmod(prod, mod, p)[1]


def _monic_polys(p: int, deg: int) -> Iterator[list[int]]:
    """Monic polynomials of exact degree ``deg`` in increasing packed order."""
    for low in range(p**deg):
        coeffs = []
        for _ in range(deg):
            coeffs.append(low % p)
            low //= p
        yield coeffs + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _trim([c % p for c in poly])
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for cand in _monic_polys(p, d):
            if not poly_divmod(poly, cand, p)[1]:
                return False
    return True


def default_modulus(p: int, m: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree m, ordered by packed value sum c_i p^i."""
    if m == 1:
        return (0, 1)
    for cand in _monic_polys(p, m):
        if cand[0] != 0 and is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")  # unreachable


def load_modulus_config(path: str | os.PathLike) -> dict[tuple[int, int], tuple[int, ...]]:
    """Parse ``p,m = c0,c1,...,cm`` lines (``#`` starts a comment)."""
    table: dict[tuple[int, int], tuple[int, ...]] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            key, val = line.split("=")
            p, m = (int(t) for t in key.split(","))
            coeffs = tuple(int(t) for t in val.split(","))
        except ValueError as exc:
            raise FieldError(f"{path}:{lineno}: cannot parse {raw!r}") from exc
        table[(p, m)] = coeffs
    return table


# -- the field ---------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """A concrete GF(p^m): prime, degree, modulus and a verified primitive element.

    ``generator`` is the packed integer of the primitive element.  Build
    instances with :func:`make_field`, which performs all verification.
    """

    p: int
    m: int
    modulus: tuple[int, ...]
    generator: int
    enum_limit: int = field(default=DEFAULT_ENUM_LIMIT, compare=False, repr=False)

    @property
    def q(self) -> int:
        return self.p**self.m

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    def __str__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    # packing
    def decode(self, value: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            out.append(value % self.p)
            value //= self.p
        return tuple(out)

    def encode(self, coeffs: Iterable[int]) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.m:
            # reduce arbitrary polynomials modulo the modulus
            coeffs = poly_divmod(coeffs, self.modulus, self.p)[1]
        val = 0
        for c in reversed(coeffs):
            val = val * self.p + (c % self.p)
        return val

    def element(self, x: int | Sequence[int]) -> FieldElement:
        if isinstance(x, (int, np.integer)):
            x = int(x)
            if not 0 <= x < self.q:
                raise FieldError(f"{x} is not a packed element of {self}")
            return FieldElement(self, x)
        return FieldElement(self, self.encode(x))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    @property
    def alpha(self) -> FieldElement:
        return FieldElement(self, self.generator)

    # scalar arithmetic on packed ints
    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % p
        out, scale = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        if self.m == 1:
            return (-a) % p
        out, scale = 0, 1
        while a:
            out += ((-(a % p)) % p) * scale
            a //= p
            scale *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.m == 1:
            return a * b % self.p
        if self.q <= _SCALAR_TABLE_LIMIT:
            lg = self.log_table
            return int(self.exp_table[(lg[a] + lg[b]) % (self.q - 1)])
        return self.encode(poly_mulmod(self.decode(a), self.decode(b), self.modulus, self.p))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.m == 1:
            return pow(a, e, self.p)
        if self.q <= _SCALAR_TABLE_LIMIT:
            return int(self.exp_table[(int(self.log_table[a]) * e) % (self.q - 1)])
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        if self.m == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.q - 2)

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def trace(self, a: int) -> int:
        """Absolute trace to GF(p); returned as an int in ``range(p)``."""
        if self.q <= self.enum_limit and "trace_table" in self.__dict__:
            return int(self.trace_table[a])
        acc, t = a, a
        for _ in range(self.m - 1):
            t = self.frobenius(t)
            acc = self.add(acc, t)
        if acc >= self.p:
            raise AssertionError(f"trace left the prime field: {acc}")
        return acc

    def multiplicative_order(self, a: int) -> int:
        if a == 0:
            raise FieldError("zero has no multiplicative order")
        order = self.q - 1
        for r in factorize(self.q - 1):
            while order % r == 0 and self.pow(a, order // r) == 1:
                order //= r
        return order

    def is_square(self, a: int) -> bool:
        if a == 0:
            return True
        if self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    # tables and vectorised arithmetic
    def _require_enumerable(self) -> None:
        if self.q > self.enum_limit:
            raise FieldError(f"{self} exceeds the enumeration limit {self.enum_limit}")

    def _mul_matrix(self, c: int) -> np.ndarray:
        """Matrix over Z_p of multiplication by c on coefficient vectors."""
        cols = [self.decode(self.encode(poly_mulmod(self.decode(c), [0] * i + [1], self.modulus, self.p)))
                for i in range(self.m)]
        return np.array(cols, dtype=np.int64).T

    @cached_property
    def exp_table(self) -> np.ndarray:
        """``exp_table[k]`` is the packed value of alpha^k, k in [0, q-2]."""
        self._require_enumerable()
        p, m, n = self.p, self.m, self.q - 1
        if m == 1:
            out = np.empty(n, dtype=np.int64)
            v = 1
            for k in range(n):
                out[k] = v
                v = v * self.generator % p
            return out
        weights = p ** np.arange(m, dtype=np.int64)
        block = np.zeros((1, m), dtype=np.int64)
        block[0, 0] = 1
        step = self.generator
        while block.shape[0] < n:
            mat = self._mul_matrix(step)
            block = np.vstack([block, (block @ mat.T) % p])
            step = self.encode(poly_mulmod(self.decode(step), self.decode(step), self.modulus, p))
        return (block[:n] @ weights).astype(np.int64)

    @cached_property
    def log_table(self) -> np.ndarray:
        """Inverse of :attr:`exp_table`; ``log_table[0] == -1``."""
        lg = np.full(self.q, -1, dtype=np.int64)
        lg[self.exp_table] = np.arange(self.q - 1, dtype=np.int64)
        if (lg[1:] < 0).any():
            raise AssertionError("generator is not primitive")
        return lg

    @cached_property
    def trace_table(self) -> np.ndarray:
        xs = np.arange(self.q, dtype=np.int64)
        acc, t = xs.copy(), xs
        for _ in range(self.m - 1):
            t = self.vpow(t, self.p)
            acc = self.vadd(acc, t)
        if (acc >= self.p).any():
            raise AssertionError("trace left the prime field")
        return acc

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        p = self.p
        if p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % p
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        scale = 1
        for _ in range(self.m):
            out += ((a // scale % p + b // scale % p) % p) * scale
            scale *= p
        return out

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        p = self.p
        if p == 2:
            return a.copy()
        if self.m == 1:
            return (-a) % p
        out = np.zeros_like(a)
        scale = 1
        for _ in range(self.m):
            out += ((-(a // scale % p)) % p) * scale
            scale *= p
        return out

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a * b) % self.p
        lg, ex = self.log_table, self.exp_table
        prod = ex[(lg[a] + lg[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, prod)

    def vpow(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        lg, ex = self.log_table, self.exp_table
        out = ex[(lg[a] * (e % (self.q - 1))) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if (a == 0).any():
            raise ZeroDivisionError(f"inverse of zero in {self}")
        return self.vpow(a, self.q - 2)

    def vtrace(self, a) -> np.ndarray:
        return self.trace_table[np.asarray(a, dtype=np.int64)]

    def vdigits(self, a) -> np.ndarray:
        """Coefficient vectors of packed elements, shape ``a.shape + (m,)``."""
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // (self.p ** np.arange(self.m, dtype=np.int64))) % self.p

    # canonical enumeration 0, alpha^0, alpha^1, ..., alpha^(q-2)
    @cached_property
    def elements(self) -> np.ndarray:
        """Packed elements in canonical order."""
        return np.concatenate([[0], self.exp_table]).astype(np.int64)

    def enumerate_elements(self) -> list[FieldElement]:
        return [FieldElement(self, int(v)) for v in self.elements]

    def index_of(self, a: int) -> int:
        """Position of a packed element in the canonical enumeration."""
        return 0 if a == 0 else int(self.log_table[a]) + 1

    def at_index(self, i: int) -> int:
        return int(self.elements[i])


@dataclass(frozen=True)
class FieldElement:
    """An element of a :class:`FieldSpec`, stored packed."""

    field: FieldSpec
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.decode(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("elements of different fields")
            return other.value
        if isinstance(other, int):
            # integers embed through the prime subfield
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __sub__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.mul(self.value, self.field.inv(o)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    def trace(self) -> int:
        return self.field.trace(self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(f"{c}" if not mono else (mono if c == 1 else f"{c}{mono}"))
        return "+".join(reversed(terms)) or "0"


def make_field(
    p: int,
    m: int = 1,
    modulus: Sequence[int] | None = None,
    *,
    config: str | os.PathLike | None = None,
    enum_limit: int = DEFAULT_ENUM_LIMIT,
) -> FieldSpec:
    """Build and verify GF(p^m).

    The modulus is, in order of preference: the explicit ``modulus``, an
    entry of the ``config`` file, or :func:`default_modulus`.  The generator is
    the first primitive element when candidates are scanned by packed value.
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if m < 1:
        raise FieldError(f"degree must be positive, got {m}")
    if p**m > MAX_ORDER:
        raise FieldError(f"GF({p}^{m}) exceeds the 2^63 size guard")
    if modulus is None and config is not None:
        modulus = load_modulus_config(config).get((p, m))
    if modulus is None:
        modulus = default_modulus(p, m)
    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) != m + 1 or modulus[-1] != 1:
        raise FieldError(f"modulus {modulus} is not monic of degree {m}")
    if not is_irreducible(modulus, p):
        raise FieldError(f"modulus {modulus} is reducible over GF({p})")

    probe = FieldSpec(p, m, modulus, 1, enum_limit)
    q = p**m
    if q == 2:
        return FieldSpec(p, m, modulus, 1, enum_limit)
    primes = list(factorize(q - 1))
    for cand in range(2, q):
        if all(_pow_poly(probe, cand, (q - 1) // r) != 1 for r in primes):
            return FieldSpec(p, m, modulus, cand, enum_limit)
    raise FieldError(f"no primitive element found in GF({p}^{m})")  # unreachable


def _pow_poly(f: FieldSpec, a: int, e: int) -> int:
    # table-free exponentiation, usable before a generator is known
    if f.m == 1:
        return pow(a, e, f.p)
    result, base = [1], list(f.decode(a))
    while e:
        if e & 1:
            result = poly_mulmod(result, base, f.modulus, f.p)
        base = poly_mulmod(base, base, f.modulus, f.p)
        e >>= 1
    return f.encode(result)


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out
