"""Acceptance criteria, one test each; every test records a PASS/FAIL line."""

import itertools
import time
from collections import Counter

import numpy as np
import pytest

from ovalcodes.codes import (LinearCode, codes_equal_as_sets, dual_min_distance_via_columns,
                             macwilliams_transform, sphere_packing_max_d, weight_distribution)
from ovalcodes.charsums import (CLOSED_FORM_TOL, AffinePPoly, gauss_sum_exhaustive,
                                gauss_sum_quadratic_closed_form, segre_root, weil_sum_affine_p_poly)
from ovalcodes.formulas import (Optimality, count_lemma_eta_trace, count_lemma_segre, count_N0_even,
                                count_N0_odd, count_N0_segre, optimality_label, predict_conic,
                                predict_conic_subfield, predict_hyperoval, predict_segre_binary,
                                predict_translation_binary, predict_translation_odd)
from ovalcodes.geometry import OPolynomial, conic_code, hyperoval_code, segre_opoly, translation_opoly
from ovalcodes.gf import make_field
from ovalcodes.subfield import (SubfieldBasis, all_trace_codewords, basis_independence_check, random_basis,
                                subfield_code, trace_code_conic, trace_code_segre, trace_code_translation,
                                trace_code_translation_odd)
from tests.conftest import ACCEPTANCE_LINES

ODD_GRID = [(3, 1), (3, 2), (3, 3), (3, 4), (5, 1), (5, 2), (5, 3), (7, 1), (7, 2)]
CONIC_GRID = [(p, m) for p, m in ODD_GRID if m >= 2]


class Criterion:
    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.failures: list[str] = []
        self.t0 = time.perf_counter()

    def check(self, ok: bool, what: str) -> None:
        if not ok:
            self.failures.append(what)

    def finish(self, extra: str = "") -> None:
        elapsed = time.perf_counter() - self.t0
        status = "PASS" if not self.failures else "FAIL"
        detail = "; ".join(self.failures[:5]) if self.failures else extra
        line = f"criterion {self.number} [{status}] {self.title} ({elapsed:.2f}s){': ' + detail if detail else ''}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert not self.failures, line


def _dist(code):
    return weight_distribution(code).counts


# -- 1 -----------------------------------------------------------------------------


def test_criterion_1_hyperoval_codes():
    c = Criterion(1, "hyperoval codes: two-weight enumerator, dual distance 4, under 10 s")
    cases = [(m, translation_opoly) for m in (2, 3, 4, 5)] + [(m, segre_opoly) for m in (3, 5)]
    for m, make in cases:
        f = make_field(2, m)
        code = hyperoval_code(make(f))
        c.check(_dist(code) == predict_hyperoval(f.q).merged(), f"distribution q={f.q} {make.__name__}")
        c.check(dual_min_distance_via_columns(code).distance == 4, f"dual distance q={f.q}")
    elapsed = time.perf_counter() - c.t0
    c.check(elapsed < 10.0, f"runtime {elapsed:.1f}s >= 10s")
    c.finish()


# -- 2 -----------------------------------------------------------------------------


def test_criterion_2_conic_codes():
    c = Criterion(2, "conic codes: four-term enumerator, dual [q+1,q-2,4]")
    for p, m in [(3, 1), (5, 1), (7, 1), (3, 2), (3, 3)]:
        f = make_field(p, m)
        code = conic_code(f)
        q = f.q
        c.check(_dist(code) == predict_conic(q).merged(), f"distribution q={q}")
        c.check(code.n - code.k == q - 2, f"dual dimension q={q}")
        c.check(dual_min_distance_via_columns(code).distance == 4, f"dual distance q={q}")
    c.finish()


# -- 3 -----------------------------------------------------------------------------


def test_criterion_3_translation_binary():
    c = Criterion(3, "binary translation subfield codes match the seven-row table; dual distance-optimal")
    for m in range(2, 7):
        code = trace_code_translation(make_field(2, m))
        dist = weight_distribution(code)
        n = 2**m + 2
        c.check(dist.counts == predict_translation_binary(m).merged(), f"distribution m={m}")
        c.check((code.n, code.k, dist.min_distance) == (n, m + 2, 2), f"parameters m={m}")
        d_dual = dual_min_distance_via_columns(code).distance
        c.check(d_dual == 4 == macwilliams_transform(dist).min_distance, f"dual distance m={m}")
        c.check(d_dual == sphere_packing_max_d(n, n - m - 2, 2), f"sphere packing m={m}")
        if m == 2:
            dual_k = code.n - code.k
            c.check((code.n, code.k, dist.min_distance, dual_k, d_dual) == (6, 4, 2, 2, 4), "[6,4,2]/[6,2,4]")
    c.finish()


# -- 4 -----------------------------------------------------------------------------


def test_criterion_4_segre():
    c = Criterion(4, "binary Segre subfield codes match the eleven-row table; duals [10,3,4], [34,23,4]")
    expected = {3: ((10, 7, 2), (10, 3, 4)), 5: ((34, 11, 12), (34, 23, 4))}
    for m, (params, dual_params) in expected.items():
        code = trace_code_segre(make_field(2, m))
        dist = weight_distribution(code)
        c.check(dist.counts == predict_segre_binary(m).merged(), f"distribution m={m}")
        c.check((code.n, code.k, dist.min_distance) == params, f"parameters m={m}")
        dual = macwilliams_transform(dist)
        c.check((dual.n, dual.k, dual.min_distance) == dual_params, f"dual m={m} (MacWilliams)")
        if m == 3:
            c.check(dual_min_distance_via_columns(code).distance == 4, "dual m=3 (columns)")
    c.finish()


# -- 5 -----------------------------------------------------------------------------


def test_criterion_5_translation_odd():
    c = Criterion(5, "p-ary translation codes match the odd/even-m tables; optimality labels")
    labels = {(3, 3): ((29, 7, 15), Optimality.OPTIMAL), (5, 3): ((127, 7, 95), Optimality.OPTIMAL),
              (3, 4): ((83, 9, 48), Optimality.ALMOST_OPTIMAL), (3, 1): ((5, 3, 2), None)}
    for p, m in ODD_GRID:
        code = trace_code_translation_odd(make_field(p, m))
        dist = weight_distribution(code)
        c.check(dist.counts == predict_translation_odd(p, m).merged(), f"distribution ({p},{m})")
        c.check(code.k == 2 * m + 1, f"dimension ({p},{m})")
        if (p, m) in labels:
            params, label = labels[(p, m)]
            c.check((code.n, code.k, dist.min_distance) == params, f"parameters ({p},{m})")
            if label is not None:
                c.check(optimality_label(*params, p) is label, f"label ({p},{m})")
        if m == 1:
            c.check(dist.min_distance == code.n - code.k, f"almost MDS ({p},1)")
    c.finish()


# -- 6 -----------------------------------------------------------------------------


def test_criterion_6_conic_subfield():
    c = Criterion(6, "p-ary conic subfield codes match the tables; labels; duals for p in {5,7}")
    labels = {(3, 2): ((10, 5, 4), Optimality.ALMOST_OPTIMAL), (3, 3): ((28, 7, 15), Optimality.OPTIMAL),
              (3, 4): ((82, 9, 48), Optimality.OPTIMAL), (5, 2): ((26, 5, 16), Optimality.ALMOST_OPTIMAL),
              (5, 3): ((126, 7, 95), Optimality.OPTIMAL)}
    for p, m in CONIC_GRID:
        code = trace_code_conic(make_field(p, m))
        dist = weight_distribution(code)
        c.check(dist.counts == predict_conic_subfield(p, m).merged(), f"distribution ({p},{m})")
        if (p, m) in labels:
            params, label = labels[(p, m)]
            c.check((code.n, code.k, dist.min_distance) == params, f"parameters ({p},{m})")
            c.check(optimality_label(*params, p) is label, f"label ({p},{m})")
        if p in (5, 7) and m == 2:
            n, k_dual = p**m + 1, p**m - 2 * m
            d = dual_min_distance_via_columns(code).distance
            c.check(code.n - code.k == k_dual and d == 4, f"dual parameters ({p},{m})")
            c.check(d == sphere_packing_max_d(n, k_dual, p), f"dual sphere packing ({p},{m})")
    c.finish()


# -- 7 -----------------------------------------------------------------------------


def _trace_sums(field, values):
    """Complex sums of zeta_p^Tr(v) along the last axis."""
    tr = field.vtrace(values)
    return np.exp(2j * np.pi * tr / field.p).sum(axis=-1)


def _uniform_or_constant(field, values, expected_const, cond):
    """Exact check: each row's trace vector is constant (= expected) when cond, uniform otherwise."""
    tr = field.vtrace(values)
    counts = np.stack([(tr == t).sum(axis=-1) for t in range(field.p)], axis=-1)
    const_ok = counts[np.arange(len(tr)), expected_const] == field.q
    uniform_ok = (counts == field.q // field.p).all(axis=-1)
    return bool(np.where(cond, const_ok, uniform_ok).all())


def test_criterion_7_character_sums():
    c = Criterion(7, "Gauss and Weil sum lemmas (tolerance 1e-6 against closed forms)")
    for p in (3, 5, 7):
        for m in (1, 2, 3, 4):
            f = make_field(p, m)
            g = complex(gauss_sum_exhaustive(f, (f.q - 1) // 2))
            c.check(abs(g - gauss_sum_quadratic_closed_form(f)) < CLOSED_FORM_TOL, f"Gauss sum p={p} m={m}")

    # quadratic Weil sums, all (a2 != 0, a1, a0)
    for p, m in [(3, 1), (5, 1), (3, 2), (3, 3)]:
        f = make_field(p, m)
        q = f.q
        xs = f.elements
        G = gauss_sum_quadratic_closed_form(f)
        a2, a1, a0 = (g.ravel() for g in np.meshgrid(np.arange(1, q), np.arange(q), np.arange(q), indexing="ij"))
        vals = f.vadd(f.vadd(f.vmul(a2[:, None], f.vmul(xs, xs)[None, :]), f.vmul(a1[:, None], xs[None, :])),
                      a0[:, None])
        exhaustive = _trace_sums(f, vals)
        shift = f.vsub(a0, f.vmul(f.vmul(a1, a1), f.vinv(f.vmul(np.full_like(a2, 4 % p), a2))))
        eta = np.where(np.isin(a2, f.vmul(xs[1:], xs[1:])), 1, -1)
        closed = np.exp(2j * np.pi * f.vtrace(shift) / p) * eta * G
        c.check(np.abs(exhaustive - closed).max() < CLOSED_FORM_TOL, f"quadratic Weil sums GF({q})")

    # even characteristic, all quadratics and all b != 0
    for m in (2, 3, 4):
        f = make_field(2, m)
        q = f.q
        xs = f.elements
        a2, a1, a0 = (g.ravel() for g in np.meshgrid(xs, xs, xs, indexing="ij"))
        base = f.vadd(f.vadd(f.vmul(a2[:, None], f.vmul(xs, xs)[None, :]), f.vmul(a1[:, None], xs[None, :])),
                      a0[:, None])
        for b in range(1, q):
            cond = a2 == f.vmul(np.full_like(a1, b), f.vmul(a1, a1))
            expected = f.vtrace(f.vmul(np.full_like(a0, b), a0))
            ok = _uniform_or_constant(f, f.vmul(np.full_like(base, b), base), expected, cond)
            c.check(ok, f"even-characteristic Weil sums GF({q}) b={b}")

    # affine p-polynomials: r <= 1 exhaustively, 1000 random cases with r in {2, 3}
    rng = np.random.default_rng(2024)
    for p, m in [(2, 3), (3, 2), (2, 4), (3, 3)]:
        f = make_field(p, m)
        q = f.q
        xs = f.elements
        xp = f.vpow(xs, p)
        for r in (0, 1):
            grids = np.meshgrid(*[xs] * (r + 2), indexing="ij")
            coeffs, const = [g.ravel() for g in grids[:-1]], grids[-1].ravel()
            vals = f.vadd(f.vmul(coeffs[0][:, None], xs[None, :]), const[:, None])
            if r == 1:
                vals = f.vadd(vals, f.vmul(coeffs[1][:, None], xp[None, :]))
            for b in range(1, q):
                bb = np.full_like(const, b)
                if r == 0:
                    cond = f.vmul(bb, coeffs[0]) == 0
                else:
                    cond = f.vadd(f.vmul(bb, coeffs[1]), f.vpow(f.vmul(bb, coeffs[0]), p)) == 0
                expected = f.vtrace(f.vmul(bb, const))
                ok = _uniform_or_constant(f, f.vmul(np.full_like(vals, b), vals), expected, cond)
                c.check(ok, f"affine p-polynomials r={r} GF({q}) b={b}")
        for _ in range(1000):
            r = int(rng.integers(2, 4))
            poly = AffinePPoly(tuple(int(v) for v in rng.integers(0, q, r + 1)), int(rng.integers(0, q)))
            b = int(rng.integers(1, q))
            same = weil_sum_affine_p_poly(f, poly, b).exact_equals(weil_sum_affine_p_poly(f, poly, b, "exhaustive"))
            c.check(same, f"affine p-polynomial {poly} b={b} GF({q})")
    c.finish()


# -- 8 -----------------------------------------------------------------------------


def test_criterion_8_counting_lemmas():
    c = Criterion(8, "counting lemmas and N0 formulas against direct enumeration")
    for m in (3, 5):
        f = make_field(2, m)
        q = f.q
        bs = f.elements
        tr_b = f.vtrace(bs)
        for a in range(1, q):
            tr_by = f.vtrace(f.vmul(bs, np.full_like(bs, segre_root(f, a))))
            for case, (u, v) in enumerate([(0, 0), (1, 0), (0, 1), (1, 1)], 1):
                direct = int(((tr_b == u) & (tr_by == v)).sum())
                c.check(direct == count_lemma_segre(f, a, case), f"Segre lemma m={m} a={a} case {case}")

    for p in (3, 5):
        for m in (1, 2, 3, 4):
            f = make_field(p, m)
            nz = f.elements[1:]
            squares = set(f.vmul(nz, nz).tolist())
            eta = np.array([1 if int(a) in squares else -1 for a in nz])
            tz = f.vtrace(nz) == 0
            for sign in (1, -1):
                for zero in (True, False):
                    direct = int(((eta == sign) & (tz == zero)).sum())
                    c.check(direct == count_lemma_eta_trace(f, sign, zero), f"eta/trace lemma p={p} m={m}")

    for m in range(2, 7):
        f = make_field(2, m)
        xs = f.elements
        x2 = f.vmul(xs, xs)
        for a in xs:
            tr = f.vtrace(f.vadd(f.vmul(np.full((f.q, f.q), a), x2[None, :]), f.vmul(xs[:, None], xs[None, :])))
            direct = (tr == 0).sum(axis=1)
            c.check(all(int(direct[i]) == count_N0_even(f, int(a), int(b)) for i, b in enumerate(xs)),
                    f"N0 even m={m} a={a}")

    for m in (3, 5):
        f = make_field(2, m)
        xs = f.elements
        x6 = f.vpow(xs, 6)
        for a in xs:
            tr = f.vtrace(f.vadd(f.vmul(np.full((f.q, f.q), a), x6[None, :]), f.vmul(xs[:, None], xs[None, :])))
            direct = (tr == 0).sum(axis=1)
            c.check(all(int(direct[i]) in count_N0_segre(f, int(a), int(b)) for i, b in enumerate(xs)),
                    f"N0 Segre m={m} a={a}")

    for p, m in ODD_GRID:
        f = make_field(p, m)
        xs = f.elements
        x2 = f.vmul(xs, xs)
        for a in xs:
            tr = f.vtrace(f.vadd(f.vmul(np.full((f.q, f.q), a), x2[None, :]), f.vmul(xs[:, None], xs[None, :])))
            for cc in range(p):
                direct = ((tr + cc) % p == 0).sum(axis=1)
                ok = all(int(direct[i]) == count_N0_odd(f, int(a), int(b), cc) for i, b in enumerate(xs))
                c.check(ok, f"N0 odd p={p} m={m} a={a} c={cc}")
    c.finish()


# -- 9 -----------------------------------------------------------------------------


def test_criterion_9_structure():
    c = Criterion(9, "trace = expansion, basis independence, dual bound, MacWilliams involution, repetition")
    pairs = []  # (parent, subfield code) pairs
    for m in range(2, 7):
        f = make_field(2, m)
        parent = hyperoval_code(translation_opoly(f))
        pairs.append((f"translation m={m}", parent, trace_code_translation(f)))
    for m in (3, 5):
        f = make_field(2, m)
        pairs.append((f"Segre m={m}", hyperoval_code(segre_opoly(f)), trace_code_segre(f)))
    for p, m in CONIC_GRID:
        f = make_field(p, m)
        pairs.append((f"conic ({p},{m})", conic_code(f), trace_code_conic(f)))

    for name, parent, trace_code in pairs:
        expanded = subfield_code(parent)
        c.check(codes_equal_as_sets(trace_code, expanded), f"trace = expansion for {name}")
        # parents live over large fields: their dual distance comes from MacWilliams
        parent_dist = weight_distribution(parent)
        d_parent = macwilliams_transform(parent_dist).min_distance
        d_sub = dual_min_distance_via_columns(trace_code).distance
        c.check(d_parent == 4 and (d_sub is None or d_sub >= d_parent), f"dual bound for {name}")
        for dist in (weight_distribution(trace_code), parent_dist):
            c.check(macwilliams_transform(macwilliams_transform(dist)) == dist, f"MacWilliams involution {name}")

    for p, m in ODD_GRID:
        f = make_field(p, m)
        odd = trace_code_translation_odd(f)
        dist = weight_distribution(odd)
        c.check(macwilliams_transform(macwilliams_transform(dist)) == dist, f"MacWilliams involution odd ({p},{m})")

    rng = np.random.default_rng(11)
    for (p, m), parent_of in [((2, 3), lambda f: hyperoval_code(translation_opoly(f))),
                              ((3, 2), conic_code), ((3, 3), conic_code)]:
        f = make_field(p, m)
        poly = SubfieldBasis.polynomial(f)
        bases = [poly, SubfieldBasis(f, poly.elements[::-1]), random_basis(f, rng), random_basis(f, rng)]
        c.check(basis_independence_check(parent_of(f), bases), f"basis independence ({p},{m})")

    for m in (2, 3, 4):
        words = all_trace_codewords(make_field(2, m), 2)
        mult = Counter(map(bytes, words.astype(np.uint8)))
        c.check(set(mult.values()) == {2 ** (m - 1)}, f"repetition multiplicity m={m}")
    c.finish()
