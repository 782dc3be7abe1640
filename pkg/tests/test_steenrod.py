from math import comb

import pytest
from hypothesis import given, strategies as st

from invforge.gf import field_of_order
from invforge.groups import Group, Space, conjugation_action
from invforge.mpoly import RingSpec, apply_substitution, parse_poly
from invforge.steenrod import binomial_mod_p, steenrod_component, steenrod_total

from test_mpoly import polys


def ring(q):
    return RingSpec(field_of_order(q), ("a", "b", "c", "d"))


def test_constant_and_variable():
    R = ring(3)
    assert steenrod_total(R.const(2)).components == (R.const(2),)
    a = R.var("a")
    assert steenrod_total(a).components == (a, a ** 3)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_p1_det_is_f3(q):
    R = ring(q)
    a, b, c, d = R.gens()
    det = a * d - b * c
    assert steenrod_component(det, 1) == a ** q * d + a * d ** q - b ** q * c - b * c ** q
    assert steenrod_component(det, 3) == 0


def test_p1_det_char2_text():
    R = ring(2)
    det = parse_poly(R, "a*d + b*c")
    assert steenrod_component(det, 1) == parse_poly(R, "a^2*d + a*d^2 + b^2*c + b*c^2")


def test_negative_index():
    with pytest.raises(ValueError):
        steenrod_component(ring(2).var("a"), -1)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_lucas_against_comb(p):
    for n in range(60):
        for k in range(n + 2):
            assert binomial_mod_p(n, k, p) == comb(n, k) % p


@given(st.sampled_from([2, 3, 4]), st.data())
def test_component_zero_and_grading(q, data):
    R = ring(q)
    f = data.draw(polys(R, max_deg=2))
    P = steenrod_total(f)
    assert P[0] == f
    for i, comp in enumerate(P.components):
        if comp:
            assert i <= max(f.degree(), 0)
    m = R.monomial((1, 2, 0, 1))
    for i in range(4):
        Pi = steenrod_component(m, i)
        assert not Pi or (Pi.is_homogeneous() and Pi.degree() == 4 + i * (q - 1))


@given(st.sampled_from([2, 3, 5]), st.data())
def test_cartan(q, data):
    R = ring(q)
    f, g = data.draw(polys(R, max_terms=3, max_deg=2)), data.draw(polys(R, max_terms=3, max_deg=2))
    lhs = steenrod_total(f * g)
    rhs = steenrod_total(f) * steenrod_total(g)
    for i in range(max(len(lhs), len(rhs))):
        assert lhs[i] == rhs[i]


@given(st.sampled_from([2, 3, 4]), st.data())
def test_naturality(q, data):
    R = ring(q)
    f = data.draw(polys(R, max_terms=3, max_deg=2))
    subs = conjugation_action(Group.GL2, Space.GL2, R.field).substitutions
    s = subs[data.draw(st.integers(0, len(subs) - 1))]
    for i in range(3):
        assert steenrod_component(apply_substitution(f, s), i) == apply_substitution(steenrod_component(f, i), s)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_invariance_propagates(q):
    R = ring(q)
    a, b, c, d = R.gens()
    A = conjugation_action(Group.GL2, Space.GL2, R.field)
    for i in range(3):
        assert A.fixes(steenrod_component(a * d - b * c, i), exhaustive=True)
