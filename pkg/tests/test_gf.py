import numpy as np
import pytest
from hypothesis import given, strategies as st

from ovalcodes.gf import (FieldError, default_modulus, factorize, is_irreducible, is_prime,
                          load_modulus_config, make_field)
from tests.conftest import SMALL_FIELDS


def elements_of(field):
    return st.integers(0, field.q - 1)


def test_is_prime_and_factorize():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert factorize(2**6 - 1) == {3: 2, 7: 1}
    assert factorize(1) == {}


def test_gf4_default_modulus_and_generator():
    f = make_field(2, 2)
    assert f.modulus == (1, 1, 1)
    a = f.generator
    assert f.mul(a, a) == f.add(a, 1)


def test_gf3_generator_is_2():
    f = make_field(3, 1)
    assert f.generator == 2
    assert f.multiplicative_order(2) == 2


def test_explicit_modulus_x4_x_1():
    f = make_field(2, 4, (1, 1, 0, 0, 1))
    assert f.q == 16
    assert f.multiplicative_order(0b10) == 15


def test_default_moduli_are_smallest():
    assert default_modulus(2, 3) == (1, 1, 0, 1)
    assert default_modulus(2, 4) == (1, 1, 0, 0, 1)
    assert default_modulus(3, 2) == (1, 0, 1)


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        make_field(2, 2, (1, 0, 1))  # (x+1)^2
    assert not is_irreducible((0, 1, 1), 2)


@pytest.mark.parametrize("args", [(4, 1), (2, 0), (2, 64), (1, 1)])
def test_bad_parameters(args):
    with pytest.raises(FieldError):
        make_field(*args)


def test_non_monic_modulus_rejected():
    with pytest.raises(FieldError):
        make_field(3, 2, (1, 0, 2))


def test_gf4_products():
    f = make_field(2, 2)
    a = f.alpha
    assert (a * a).value == (a + 1).value


def test_gf9_x_squared_is_minus_one():
    f = make_field(3, 2)
    x = f.element((0, 1))
    assert (x * x).value == 2


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        make_field(5, 1).inv(0)


def test_trace_values_gf4():
    f = make_field(2, 2)
    assert f.trace(0) == 0
    assert f.trace(1) == 0
    assert f.trace(f.generator) == 1


def test_enumeration_order():
    assert make_field(2, 1).elements.tolist() == [0, 1]
    assert make_field(3, 1).elements.tolist() == [0, 1, 2]
    f = make_field(2, 2)
    a = f.generator
    assert f.elements.tolist() == [0, 1, a, f.add(a, 1)]


def test_enumeration_is_bijection(small_field):
    f = small_field
    els = f.elements
    assert sorted(els.tolist()) == list(range(f.q))
    assert [f.at_index(f.index_of(x)) for x in range(f.q)] == list(range(f.q))


def test_modulus_config(tmp_path):
    cfg = tmp_path / "moduli.txt"
    cfg.write_text("# overrides\n2,4 = 1,0,0,1,1   # x^4+x^3+1\n3,2 = 2,2,1\n")
    table = load_modulus_config(cfg)
    assert table[(2, 4)] == (1, 0, 0, 1, 1)
    f = make_field(2, 4, config=cfg)
    assert f.modulus == (1, 0, 0, 1, 1)
    g = make_field(3, 2, config=cfg)
    assert g.modulus == (2, 2, 1)


def test_modulus_config_garbage(tmp_path):
    cfg = tmp_path / "bad.txt"
    cfg.write_text("2,4 = one,two\n")
    with pytest.raises(FieldError):
        load_modulus_config(cfg)


def test_frobenius_is_automorphism():
    for p, m in [(2, 5), (3, 4), (2, 13)]:
        f = make_field(p, m)
        x = f.elements
        y = np.roll(x, 7)
        fx, fy = f.vpow(x, p), f.vpow(y, p)
        assert np.array_equal(f.vpow(f.vmul(x, y), p), f.vmul(fx, fy))
        assert np.array_equal(f.vpow(f.vadd(x, y), p), f.vadd(fx, fy))
        assert len(set(fx.tolist())) == f.q


def test_vector_ops_agree_with_scalar(small_field):
    f = small_field
    x = np.arange(f.q)
    y = (x * 5 + 3) % f.q
    assert f.vadd(x, y).tolist() == [f.add(int(a), int(b)) for a, b in zip(x, y)]
    assert f.vmul(x, y).tolist() == [f.mul(int(a), int(b)) for a, b in zip(x, y)]
    assert f.vtrace(x).tolist() == [f.trace(int(a)) for a in x]
    assert f.vinv(x[1:]).tolist() == [f.inv(int(a)) for a in x[1:]]


def test_large_field_scalar_fallback():
    f = make_field(2, 17)  # above the scalar table limit
    a = 0x1abcd
    assert f.mul(a, f.inv(a)) == 1
    assert f.pow(a, f.q - 1) == 1
    assert f.trace(f.add(a, f.pow(a, 2))) == 0


def test_element_repr():
    f = make_field(2, 2)
    assert repr(f.element(3)) == "x+1"
    assert repr(f.zero) == "0"


@pytest.mark.parametrize("pm", SMALL_FIELDS)
@given(data=st.data())
def test_field_axioms(pm, data):
    f = make_field(*pm)
    x, y, z = (data.draw(elements_of(f)) for _ in range(3))
    assert f.add(x, f.neg(x)) == 0
    assert f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z))
    assert f.mul(f.mul(x, y), z) == f.mul(x, f.mul(y, z))
    assert f.trace(f.add(x, y)) == (f.trace(x) + f.trace(y)) % f.p
    assert f.trace(f.pow(x, f.p)) == f.trace(x)
    if x:
        assert f.mul(x, f.inv(x)) == 1
        assert f.pow(x, f.q - 1) == 1


@given(st.sampled_from(SMALL_FIELDS), st.integers(0, 10**6))
def test_encode_decode_roundtrip(pm, v):
    f = make_field(*pm)
    v %= f.q
    assert f.encode(f.decode(v)) == v
    assert all(0 <= c < f.p for c in f.decode(v))
