"""Linear codes over a FieldSpec.

Matrices are numpy int64 arrays of packed field elements.  Weight
distributions are computed by brute force over all q^k messages, so every
public routine here has a budget guard.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, NamedTuple

import numpy as np

from .gf import FieldSpec

DEFAULT_BUDGET = int(os.environ.get("OVALCODES_BUDGET", 2**28))
DEFAULT_COLUMN_LIMIT = 6
# entries per enumeration block (rows x n)
_BLOCK_ENTRIES = 2**22


class CodeError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed its budget."""


class TrivialDualError(CodeError):
    """The dual of a full-space code is the zero code."""


# -- linear algebra ------------------------------------------------------------


def rref(field: FieldSpec, mat) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row echelon form over ``field``; returns (R, rank, pivot columns)."""
    R = np.array(mat, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise CodeError("rref needs a 2-d matrix")
    rows, cols = R.shape
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = field.vmul(R[r], field.inv(int(R[r, c])))
        col = R[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            R[mask] = field.vsub(R[mask], field.vmul(col[mask][:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, r, pivots


def rank(field: FieldSpec, mat) -> int:
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0
    return rref(field, mat)[1]


def null_space(field: FieldSpec, mat) -> np.ndarray:
    """Basis (as rows) of {x : mat x = 0}."""
    R, r, pivots = rref(field, mat)
    n = R.shape[1]
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = field.neg(int(R[row, fc]))
    return basis


def span(field: FieldSpec, rows) -> np.ndarray:
    """All q^len(rows) linear combinations, message order lexicographic."""
    rows = np.asarray(rows, dtype=np.int64)
    n = rows.shape[1] if rows.ndim == 2 else 0
    out = np.zeros((1, n), dtype=np.int64)
    scalars = field.elements
    for row in rows:
        scaled = field.vmul(scalars[:, None], row[None, :])  # (q, n)
        out = field.vadd(out[:, None, :], scaled[None, :, :]).reshape(-1, n)
    return out


# -- codes -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Row space of ``generator`` over ``field``.  Redundant rows are allowed."""

    field: FieldSpec
    generator: np.ndarray
    name: str = ""
    meta: Mapping = field(default_factory=dict, compare=False)

    def __post_init__(self):
        g = np.atleast_2d(np.asarray(self.generator, dtype=np.int64))
        if ((g < 0) | (g >= self.field.q)).any():
            raise CodeError("generator entries outside the field")
        object.__setattr__(self, "generator", g)
        if self.k < 1:
            raise CodeError("code has dimension 0")

    @cached_property
    def _echelon(self) -> tuple[np.ndarray, int, list[int]]:
        return rref(self.field, self.generator)

    @property
    def basis(self) -> np.ndarray:
        R, r, _ = self._echelon
        return R[:r]

    @property
    def n(self) -> int:
        return self.generator.shape[1]

    @property
    def k(self) -> int:
        return self._echelon[1]

    @property
    def q(self) -> int:
        return self.field.q

    def __repr__(self) -> str:
        label = f"{self.name} " if self.name else ""
        return f"<{label}[{self.n},{self.k}] code over {self.field}>"

    def encode(self, message) -> np.ndarray:
        msg = np.asarray(message, dtype=np.int64)
        f = self.field
        out = np.zeros(self.n, dtype=np.int64)
        for coef, row in zip(msg, self.basis):
            out = f.vadd(out, f.vmul(np.full(self.n, coef), row))
        return out

    def contains(self, word) -> bool:
        stacked = np.vstack([self.basis, np.asarray(word, dtype=np.int64)[None, :]])
        return rank(self.field, stacked) == self.k

    def to_json(self, header: Mapping | None = None) -> dict:
        f = self.field
        return {
            **(header or {}),
            "field": {"p": f.p, "m": f.m, "modulus": list(f.modulus), "generator": f.generator},
            "element_encoding": "packed coefficient vector sum c_i p^i",
            "n": self.n,
            "k": self.k,
            "generator_matrix": self.generator.tolist(),
        }


@dataclass(frozen=True)
class WeightDistribution:
    """Exact weight counts of a linear code; ``counts`` omits zero entries."""

    n: int
    k: int
    q: int
    counts: Mapping[int, int]

    def __post_init__(self):
        counts = {int(w): int(c) for w, c in self.counts.items() if c}
        object.__setattr__(self, "counts", dict(sorted(counts.items())))
        if counts.get(0) != 1:
            raise CodeError(f"A_0 must be 1, got {counts.get(0)}")
        if any(w < 0 or w > self.n for w in counts):
            raise CodeError("weight outside [0, n]")
        if sum(counts.values()) != self.q**self.k:
            raise CodeError(f"counts sum to {sum(counts.values())}, expected {self.q}^{self.k}")

    def __getitem__(self, w: int) -> int:
        return self.counts.get(w, 0)

    def as_list(self) -> list[int]:
        return [self[w] for w in range(self.n + 1)]

    @property
    def min_distance(self) -> int:
        nonzero = [w for w in self.counts if w > 0]
        return min(nonzero) if nonzero else 0

    @property
    def nonzero_weights(self) -> list[int]:
        return [w for w in self.counts if w > 0]

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "k": self.k, "q": self.q,
                           "counts": {str(w): c for w, c in self.counts.items()}})

    @classmethod
    def from_json(cls, text: str) -> WeightDistribution:
        d = json.loads(text)
        return cls(d["n"], d["k"], d["q"], {int(w): int(c) for w, c in d["counts"].items()})

    def to_csv(self) -> str:
        return "weight,count\n" + "".join(f"{w},{c}\n" for w, c in self.counts.items())


def _weight_block(field: FieldSpec, low: np.ndarray, shift: np.ndarray, n: int) -> np.ndarray:
    words = field.vadd(low, shift[None, :])
    return np.bincount(np.count_nonzero(words, axis=1), minlength=n + 1)


def weight_distribution(code: LinearCode, budget: int | None = None, workers: int = 1) -> WeightDistribution:
    """Enumerate all q^k codewords of a row basis and count weights.

    The message space is split by its leading symbols; each part yields a
    partial histogram and the parts are summed.
    """
    budget = DEFAULT_BUDGET if budget is None else budget
    f, B, n, k = code.field, code.basis, code.n, code.k
    total = f.q**k
    if total > budget:
        raise BudgetExceeded(f"{f.q}^{k} codewords exceed budget {budget}")
    lo = k
    while lo > 0 and f.q**lo * n > _BLOCK_ENTRIES:
        lo -= 1
    low = span(f, B[k - lo:])
    heads = B[: k - lo]

    def leading_words(rows):
        if f.q ** rows.shape[0] * n <= _BLOCK_ENTRIES:
            yield from span(f, rows)
            return
        for c in f.elements:
            base = f.vmul(np.full(n, c), rows[0])
            for w in leading_words(rows[1:]):
                yield f.vadd(w, base)

    hist = np.zeros(n + 1, dtype=np.int64)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            for h in pool.map(lambda s: _weight_block(f, low, s, n), leading_words(heads)):
                hist += h
    else:
        for s in leading_words(heads):
            hist += _weight_block(f, low, s, n)
    return WeightDistribution(n, k, f.q, {w: int(c) for w, c in enumerate(hist)})


def minimum_distance(code: LinearCode, budget: int | None = None) -> int:
    return weight_distribution(code, budget).min_distance


def is_mds(code: LinearCode, d: int | None = None) -> bool:
    d = minimum_distance(code) if d is None else d
    return d == code.n - code.k + 1


def is_almost_mds(code: LinearCode, d: int | None = None) -> bool:
    d = minimum_distance(code) if d is None else d
    return d == code.n - code.k


def dual_code(code: LinearCode) -> LinearCode:
    if code.k == code.n:
        raise TrivialDualError(f"{code!r} is the full space; its dual is {{0}}")
    return LinearCode(code.field, null_space(code.field, code.basis), name=f"dual of {code.name}".strip())


def krawtchouk(j: int, i: int, n: int, q: int) -> int:
    return sum((-1) ** s * (q - 1) ** (j - s) * math.comb(i, s) * math.comb(n - i, j - s)
               for s in range(j + 1))


def macwilliams_transform(dist: WeightDistribution, n: int | None = None,
                          k: int | None = None, q: int | None = None) -> WeightDistribution:
    """Dual weight distribution via Krawtchouk polynomials, in exact integers."""
    n = dist.n if n is None else n
    k = dist.k if k is None else k
    q = dist.q if q is None else q
    size = q**k
    out = {}
    for j in range(n + 1):
        acc = sum(a * krawtchouk(j, i, n, q) for i, a in dist.counts.items())
        if acc % size:
            raise CodeError(f"non-integral dual coefficient at weight {j}")
        out[j] = acc // size
    if any(v < 0 for v in out.values()):
        raise CodeError("negative dual coefficient: input is not a linear code distribution")
    return WeightDistribution(n, n - k, q, out)


class DualDistance(NamedTuple):
    distance: int | None  # None means "greater than limit"
    support: tuple[int, ...]
    coefficients: tuple[int, ...]
    limit: int

    def __str__(self) -> str:
        return str(self.distance) if self.distance is not None else f">= {self.limit + 1}"


_COLUMN_CHUNK = 2**20


def _vector_keys(field: FieldSpec, vecs: np.ndarray) -> np.ndarray:
    k = vecs.shape[-1]
    if field.q**k >= 2**62:
        raise CodeError("column vectors too long for integer keys")
    weights = field.q ** np.arange(k, dtype=np.int64)
    return vecs @ weights


def _combination_sums(field, cols, size, normalize_first, subsets=None):
    """Sums over ``size``-subsets of columns with nonzero coefficients.

    Uses every subset unless ``subsets`` is given.  Returns (subsets,
    coefficient tuples, sums) flattened to one axis.
    """
    n, k = cols.shape
    if subsets is None:
        subsets = np.array(list(itertools.combinations(range(n), size)), dtype=np.int64).reshape(-1, size)
    nonzero = field.elements[1:].tolist()
    choices = [[1] if (normalize_first and t == 0) else nonzero for t in range(size)]
    coefs = np.array(list(itertools.product(*choices)), dtype=np.int64).reshape(-1, size)
    sums = np.zeros((subsets.shape[0], coefs.shape[0], k), dtype=np.int64)
    for t in range(size):
        term = field.vmul(coefs[None, :, t, None], cols[subsets[:, t]][:, None, :])
        sums = field.vadd(sums, term)
    S, C = subsets.shape[0], coefs.shape[0]
    sub_idx = np.repeat(np.arange(S), C)
    coef_idx = np.tile(np.arange(C), S)
    return subsets[sub_idx], coefs[coef_idx], sums.reshape(S * C, k)


def _subset_chunks(n: int, size: int, per_chunk: int):
    it = itertools.combinations(range(n), size)
    while True:
        block = list(itertools.islice(it, per_chunk))
        if not block:
            return
        yield np.array(block, dtype=np.int64).reshape(-1, size)


def dual_min_distance_via_columns(code: LinearCode, limit: int = DEFAULT_COLUMN_LIMIT,
                                  budget: int | None = None) -> DualDistance:
    """Smallest s <= limit such that some s columns of the generator are dependent.

    The generator of ``code`` is a parity-check matrix of its dual, so this
    is the dual's minimum distance.  Meet-in-the-middle: a minimal relation on
    sorted support S is split into its first s//2 columns (coefficient of the
    first one scaled to 1) and the remaining ones.
    """
    if limit > DEFAULT_COLUMN_LIMIT:
        raise CodeError(f"column limit {limit} exceeds {DEFAULT_COLUMN_LIMIT}")
    budget = DEFAULT_BUDGET if budget is None else budget
    f = code.field
    cols = code.basis.T.copy()  # (n, k)
    n = cols.shape[0]
    for s in range(1, min(limit, n) + 1):
        h, H = s // 2, s - s // 2
        cost = math.comb(n, H) * (f.q - 1) ** H + math.comb(n, h) * (f.q - 1) ** max(h - 1, 0)
        if cost > budget:
            raise BudgetExceeded(f"column search at s={s} needs {cost} combinations")
        if h:
            lsub, lcoef, lsum = _combination_sums(f, cols, h, True)
        else:
            lsub = np.zeros((1, 0), dtype=np.int64)
            lcoef = np.zeros((1, 0), dtype=np.int64)
            lsum = np.zeros((1, cols.shape[1]), dtype=np.int64)
        lkeys = _vector_keys(f, lsum)
        lmax = lsub.max(axis=1) if h else np.full(lsub.shape[0], -1)
        order = np.lexsort((lmax, lkeys))
        lkeys_s, lmax_s = lkeys[order], lmax[order]
        uniq, first = np.unique(lkeys_s, return_index=True)
        best_max = lmax_s[first]  # smallest max index per key (sorted within key)
        best_pos = order[first]
        # the right half is streamed to bound memory
        per_chunk = max(1, _COLUMN_CHUNK // (f.q - 1) ** (H - (h == 0)))
        for subsets in _subset_chunks(n, H, per_chunk):
            rsub, rcoef, rsum = _combination_sums(f, cols, H, h == 0, subsets)
            rkeys = _vector_keys(f, f.vneg(rsum))
            pos_c = np.minimum(np.searchsorted(uniq, rkeys), len(uniq) - 1)
            hit = (uniq[pos_c] == rkeys) & (best_max[pos_c] < rsub.min(axis=1))
            if hit.any():
                r = int(np.nonzero(hit)[0][0])
                li = int(best_pos[pos_c[r]])
                support = tuple(int(x) for x in np.concatenate([lsub[li], rsub[r]]))
                coefs = tuple(int(x) for x in np.concatenate([lcoef[li], rcoef[r]]))
                return DualDistance(s, support, coefs, limit)
    return DualDistance(None, (), (), limit)


def sphere_packing_max_d(n: int, k: int, q: int) -> int:
    """Largest d allowed by the sphere-packing bound, capped by Singleton (n - k + 1)."""
    room = q ** (n - k)
    best = 1
    for d in range(1, n - k + 2):
        t = (d - 1) // 2
        ball = sum(math.comb(n, i) * (q - 1) ** i for i in range(t + 1))
        if ball <= room:
            best = d
        else:
            break
    return best


def codes_equal_as_sets(a: LinearCode, b: LinearCode) -> bool:
    if a.field != b.field or a.n != b.n:
        return False
    if a.k != b.k:
        return False
    return rank(a.field, np.vstack([a.basis, b.basis])) == a.k


def puncture(code: LinearCode, positions) -> LinearCode:
    keep = [i for i in range(code.n) if i not in set(positions)]
    return LinearCode(code.field, code.generator[:, keep], name=f"{code.name} punctured".strip())
