import pytest
from hypothesis import given, strategies as st

from invforge.gf import field_of_order
from invforge.groups import Group, Space, conjugation_action, tau_ad_substitution
from invforge.mpoly import (LinearSubstitution, NotASquare, RingMismatch, RingSpec,
                            apply_substitution, evaluate, jacobian_det, leading_monomial_lex,
                            parse_poly, partial_derivative, project, sqrt_char2, to_text)
from invforge.constructions import gl2_primaries, symmetric_projection, traceless_projection


def ring(q, names="abcd"):
    return RingSpec(field_of_order(q), tuple(names))


@st.composite
def polys(draw, R, max_terms=5, max_deg=3):
    n = R.nvars
    terms = draw(st.lists(st.tuples(st.tuples(*[st.integers(0, max_deg)] * n),
                                    st.integers(1, R.field.q - 1)), max_size=max_terms))
    f = R.zero()
    for m, c in terms:
        f = f + R.monomial(m, c)
    return f


def test_arith_examples():
    R = ring(3)
    a, b, c, d = R.gens()
    assert (a + d) * (a - d) == a * a - d * d
    R2 = ring(2)
    a, b, c, d = R2.gens()
    assert (a + d) ** 2 == a * a + d * d
    assert (a + b) * R2.zero() == 0


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        ring(3).var("a") + ring(5).var("a")


def test_substitution_examples():
    F = field_of_order(2)
    R = ring(2)
    a, b, c, d = R.gens()
    f = a * b + c
    assert apply_substitution(f, LinearSubstitution.identity(R)) == f
    assert apply_substitution(a + d, tau_ad_substitution(F)) == a + d
    O2 = conjugation_action(Group.O2, Space.GL2, F)
    swap = next(s for s in O2.substitutions if s != LinearSubstitution.identity(R))
    assert apply_substitution(a, swap) == d


def test_derivative_examples():
    for q in (2, 3, 4, 5):
        R = ring(q)
        a, b, c, d = R.gens()
        assert partial_derivative(a * d - b * c, "a") == d
        assert partial_derivative(a ** q, "a") == 0
        f3 = gl2_primaries(R.field).primaries[2]
        assert partial_derivative(f3, "a") == d ** q
    with pytest.raises(KeyError):
        partial_derivative(ring(3).var("a"), "z")


def test_jacobian_examples():
    R = ring(3)
    assert jacobian_det(list(R.gens())) == 1
    f1, f2, f3, f4 = gl2_primaries(R.field).primaries
    h = jacobian_det([f1, f2, f3, f4])
    assert h and h.is_homogeneous() and h.degree() == 9
    assert jacobian_det([f1, f1, f3, f4]) == 0
    with pytest.raises(ValueError):
        jacobian_det([f1])


def test_leading_monomials():
    R = ring(3)
    a, b, c, d = R.gens()
    assert leading_monomial_lex(a * d - b * c) == (1, 0, 0, 1)
    assert leading_monomial_lex(gl2_primaries(field_of_order(2)).primaries[3]) == (1, 1, 0, 0)
    assert leading_monomial_lex(gl2_primaries(field_of_order(3)).primaries[3]) == (4, 2, 0, 0)
    with pytest.raises(ValueError):
        leading_monomial_lex(R.zero())


def test_sqrt_char2_examples():
    R = ring(2, "ab")
    a, b = R.gens()
    assert sqrt_char2(a * a + b * b) == a + b
    with pytest.raises(NotASquare):
        sqrt_char2(a * b)
    F = field_of_order(2)
    T, assignment = traceless_projection(F)
    pf4 = project(gl2_primaries(F).primaries[3], T, assignment)
    r = sqrt_char2(pf4)
    assert r.is_homogeneous() and r.degree() == 1


def test_projection_examples():
    F = field_of_order(3)
    R = ring(3)
    a, b, c, d = R.gens()
    T, asg = traceless_projection(F)
    ta, tb, tc = T.gens()
    assert project(a + d, T, asg) == 0
    assert project(a * d - b * c, T, asg) == -(ta * ta) - tb * tc
    W, asg = symmetric_projection(F)
    wa, wb, wd = W.gens()
    assert project(a * d - b * c, W, asg) == wa * wd - wb * wb


def test_evaluate_examples():
    R = ring(5)
    a, b, c, d = R.gens()
    assert evaluate(a * d - b * c, [1, 0, 0, 1]) == 1
    assert evaluate(gl2_primaries(R.field).primaries[3], [0, 0, 0, 0]) == 0
    with pytest.raises(ValueError):
        evaluate(a, [1])


def test_text_format():
    R = ring(3)
    f = parse_poly(R, "1*a^2*d + 2*b*c")
    assert to_text(f) == "a^2*d + 2*b*c"
    assert parse_poly(R, to_text(f)) == f
    assert to_text(R.zero()) == "0"
    assert to_text(R.const(2)) == "2"


@given(st.data())
def test_text_round_trip(data):
    R = ring(5)
    f = data.draw(polys(R))
    assert parse_poly(R, to_text(f)) == f
    assert to_text(parse_poly(R, to_text(f))) == to_text(f)


@given(st.sampled_from([2, 3, 4]), st.data())
def test_substitution_inverse(q, data):
    R = ring(q)
    f = data.draw(polys(R))
    subs = conjugation_action(Group.GL2, Space.GL2, R.field).substitutions
    s = subs[data.draw(st.integers(0, len(subs) - 1))]
    assert apply_substitution(apply_substitution(f, s), s.inverse()) == f


@given(st.sampled_from([3, 5]), st.data())
def test_substitution_is_homomorphism(q, data):
    R = ring(q)
    f, g = data.draw(polys(R)), data.draw(polys(R))
    s = conjugation_action(Group.GL2, Space.GL2, R.field).generators[0]
    assert apply_substitution(f * g, s) == apply_substitution(f, s) * apply_substitution(g, s)
    assert apply_substitution(f + g, s) == apply_substitution(f, s) + apply_substitution(g, s)


@given(st.sampled_from([2, 3, 5]), st.data())
def test_leibniz(q, data):
    R = ring(q)
    f, g = data.draw(polys(R)), data.draw(polys(R))
    for v in "ab":
        lhs = partial_derivative(f * g, v)
        assert lhs == f * partial_derivative(g, v) + g * partial_derivative(f, v)


@given(st.data())
def test_jacobian_alternates(data):
    R = ring(3, "abc")
    fs = [data.draw(polys(R, max_terms=3, max_deg=2)) for _ in range(3)]
    assert jacobian_det([fs[1], fs[0], fs[2]]) == -jacobian_det(fs)


@given(st.sampled_from([2, 4, 8]), st.data())
def test_sqrt_char2_round_trip(q, data):
    R = ring(q, "abc")
    f = data.draw(polys(R))
    assert sqrt_char2(f * f) == f
