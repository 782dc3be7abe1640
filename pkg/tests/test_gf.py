import numpy as np
import pytest
from hypothesis import given, strategies as st

from invforge.gf import (FieldError, build_field, field_of_order, find_irreducible_quadratic,
                         parse_field, prime_power, smallest_irreducible)


def test_prime_field_modulus():
    F = build_field(2, 1)
    assert F.q == 2
    assert F.modulus == (0, 1)


def test_f4_modulus_is_x2_x_1():
    assert build_field(2, 2).modulus == (1, 1, 1)


def test_f9_tables():
    F = build_field(3, 2)
    assert F.q == 9
    assert len(F.exp_table) == 8
    assert sorted(F.exp_table) == list(range(1, 9))


def test_modulus_is_smallest_irreducible():
    # x^2 + 1 is the first monic irreducible quadratic over F_3
    assert smallest_irreducible(3, 2) == [1, 0, 1]
    assert smallest_irreducible(2, 3) == [1, 1, 0, 1]


@pytest.mark.parametrize("p,e", [(4, 1), (6, 1), (2, 17), (2, 0)])
def test_build_field_rejects(p, e):
    with pytest.raises(FieldError):
        build_field(p, e)


def test_prime_power():
    assert prime_power(8) == (2, 3)
    assert prime_power(9) == (3, 2)
    assert prime_power(6) is None
    assert prime_power(1) is None


def test_parse_field_and_str():
    F = parse_field("3^2")
    assert F.q == 9 and str(F) == "3^2"
    assert parse_field("5").q == 5


def test_small_products():
    F3 = field_of_order(3)
    assert F3.mul(2, 2) == 1
    F4 = field_of_order(4)
    w = F4.generator
    assert F4.mul(w, F4.mul(w, w)) == 1


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        field_of_order(5).inv(0)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 125, 243, 256, 512])
def test_fermat_exhaustive(q):
    F = field_of_order(q)
    for x in F.elements():
        assert F.pow(x, q) == x
        if x:
            assert F.pow(x, q - 1) == 1


def test_frobenius_examples():
    F2 = field_of_order(2)
    assert all(F2.frobenius(x) == x for x in F2.elements())
    F4 = field_of_order(4)
    w = F4.generator
    assert F4.frobenius(w) == F4.mul(w, w)
    F9 = field_of_order(9)
    assert all(F9.frobenius_inverse(F9.frobenius(x)) == x for x in F9.elements())


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16])
def test_frobenius_is_automorphism(q):
    F = field_of_order(q)
    xs = np.arange(q)
    X, Y = np.meshgrid(xs, xs)
    assert np.array_equal(F.frobenius(F.add(X, Y)), F.add(F.frobenius(X), F.frobenius(Y)))
    assert np.array_equal(F.frobenius(F.mul(X, Y)), F.mul(F.frobenius(X), F.frobenius(Y)))


def test_quadratic_examples():
    g = find_irreducible_quadratic(field_of_order(3))
    assert (g.tau, g.delta) == (0, 1)
    g = find_irreducible_quadratic(field_of_order(2))
    assert (g.tau, g.delta) == (1, 1)
    g = find_irreducible_quadratic(field_of_order(5))
    assert (g.tau, g.delta) == (0, 2)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27])
def test_quadratic_has_no_root(q):
    F = field_of_order(q)
    g = find_irreducible_quadratic(F)
    assert all(g(F, A) != 0 for A in F.elements())
    assert g.tau == (1 if F.p == 2 else 0)


def test_sqrt_examples():
    F9 = field_of_order(9)
    assert F9.sqrt(1) == 1
    assert field_of_order(5).sqrt(4) == 2
    assert field_of_order(5).sqrt(2) is None
    F4 = field_of_order(4)
    assert all(F4.sqrt(x) == F4.pow(x, 2) for x in F4.elements())


@given(st.sampled_from([2, 3, 4, 5, 8, 9, 25]), st.data())
def test_field_axioms(q, data):
    F = field_of_order(q)
    el = st.integers(0, q - 1)
    x, y, z = data.draw(el), data.draw(el), data.draw(el)
    assert F.add(x, y) == F.add(y, x)
    assert F.mul(x, y) == F.mul(y, x)
    assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    assert F.add(F.add(x, y), z) == F.add(x, F.add(y, z))
    assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
    assert F.add(x, F.neg(x)) == 0
    if x:
        assert F.mul(x, F.inv(x)) == 1


@given(st.sampled_from([2, 3, 4, 5, 9]), st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**31))
def test_rank_and_kernel(q, m, n, seed):
    F = field_of_order(q)
    rng = np.random.default_rng(seed)
    A = rng.integers(0, q, size=(m, n))
    Z = F.left_kernel(A)
    r = F.rank(A)
    assert Z.shape[0] == m - r
    if Z.size:
        assert not F.matmul(Z, A).any()
    N = F.nullspace(A)
    assert N.shape[0] == n - r
    if N.size:
        assert not F.matmul(A, N.T).any()
