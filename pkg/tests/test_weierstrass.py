import json
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from oracles import kodaira_from_valuations, order_at_zero, short_discriminant
from resurf.errors import DomainError, IncompletePlacesError, SingularSurfaceError
from resurf.kodaira import (
    I, II, II_STAR, III, III_STAR, IV, IV_STAR, IStar, euler_number, quadratic_base_change,
    validate_configuration,
)
from resurf.weierstrass import (
    Place, PolyQ, WeierstrassModel, b_invariants, classify_fiber, classify_surface, discriminant,
    discriminant_unchecked, load_model, minimize_at, parse_places, poly_gcd, valuation,
)

ZERO, INF = Place.finite(0), Place.infinity()
t = PolyQ.t()


def model(**kw):
    return WeierstrassModel.from_coeffs(**kw)


def test_poly_arithmetic():
    p = PolyQ.of(1, 2, 3)
    q = PolyQ.of(-1, 1)
    quo, rem = (p * q + 5).divmod(q)
    assert quo == p and rem == PolyQ.of(5)
    assert (t ** 3).degree == 3 and PolyQ().degree == -1
    assert p(Fraction(1, 2)) == Fraction(11, 4)
    assert poly_gcd((t - 1) * (t + 2), (t - 1) * t) == PolyQ.of(-1, 1)
    assert p.shift(1)(0) == p(1)


def test_place_parsing():
    assert parse_places("0,inf,-3/2") == [ZERO, INF, Place.finite(Fraction(-3, 2))]
    assert Place.parse("∞") == INF
    assert str(INF) == "inf"


def test_valuation_examples():
    assert valuation(t * t * (t - 1), ZERO) == 2
    assert valuation(t, INF, 6) == 5
    assert valuation(PolyQ(), Place.finite(3)) == float("inf")
    with pytest.raises(DomainError):
        valuation(t ** 7, INF, 6)


def test_degree_cap_enforced():
    with pytest.raises(DomainError):
        model(a6=[0] * 7 + [1])


def test_b_invariants():
    b2, b4, b6, b8 = b_invariants(model(a6=[0, 1]))
    assert (b2, b4, b6, b8) == (PolyQ(), PolyQ(), PolyQ.of(0, 4), PolyQ())
    b2, b4, b6, b8 = b_invariants(model(a1=[1]))
    assert b2 == PolyQ.of(1) and b4.is_zero() and b6.is_zero() and b8.is_zero()
    assert all(b.is_zero() for b in b_invariants(model()))


def test_discriminant_examples():
    assert discriminant(model(a6=[0, 1])) == PolyQ.of(0, 0, -432)
    assert discriminant(model(a4=[1])) == PolyQ.of(-64)
    assert discriminant_unchecked(model()).is_zero()
    with pytest.raises(SingularSurfaceError):
        discriminant(model())


def test_minimize_examples():
    m = minimize_at(model(a6=[0] * 6 + [1]), ZERO)
    assert m.a6 == PolyQ.of(1)
    m = minimize_at(model(a4=[0] * 4 + [1], a6=[0] * 6 + [1]), ZERO)
    assert m.a4 == PolyQ.of(1) and m.a6 == PolyQ.of(1)
    w = model(a6=[0, 1])
    assert minimize_at(w, ZERO) == w


def test_base_example_fibers():
    assert classify_fiber(model(a6=[0, 1]), ZERO) == II
    assert classify_fiber(model(a6=[0, 1]), INF) == II_STAR
    assert classify_fiber(model(a6=[0, 0, 1]), ZERO) == IV
    assert classify_fiber(model(a6=[0, 0, 1]), INF) == IV_STAR


def test_surface_examples():
    assert str(classify_surface(model(a6=[0, 1]), [ZERO, INF])) == "(II, II*)"
    assert str(classify_surface(model(a6=[0, 0, 1]), [ZERO, INF])) == "(IV, IV*)"
    assert str(classify_surface(model(a4=[0, 0, 0, 1]), [ZERO, INF])) == "(III, III*)"
    assert str(classify_surface(model(a4=[0, 0, 1]), [ZERO, INF])) == "(I0*, I0*)"


def test_twisted_example_at_infinity():
    # y^2 - t y = x^3 - x^2 - x + (t - 1)
    w = model(a3=[0, -1], a2=[-1], a4=[-1], a6=[-1, 1])
    assert classify_fiber(w, INF) == IV_STAR


def test_unlisted_repeated_root():
    with pytest.raises(IncompletePlacesError):
        classify_surface(model(a6=[0, 0, 0, 1, 0, 1]), [ZERO, INF])


def test_unlisted_simple_roots_count_as_i1():
    w = model(a4=[-3], a6=[0, 0, 0, 0, 0, 0, 1])
    c = classify_surface(w, [ZERO, INF])
    assert validate_configuration(c).euler_sum == 12


def test_load_model(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"a6": ["0", "1"]}))
    assert load_model(path) == model(a6=[0, 1])
    path.write_text(json.dumps({"a7": [1]}))
    with pytest.raises(DomainError):
        load_model(path)
    path.write_text("{")
    with pytest.raises(DomainError):
        load_model(path)


def test_json_roundtrip():
    w = model(a3=[0, -1], a2=[-1], a4=[-1], a6=[-1, Fraction(1, 2)])
    assert WeierstrassModel.from_json(w.to_json()) == w


@st.composite
def short_models(draw):
    """y^2 = x^3 + t^a u(t) x + t^b w(t) with u(0), w(0) nonzero."""
    coeff = st.integers(-3, 3)
    unit = st.integers(1, 3) | st.integers(-3, -1)

    def part(cap):
        k = draw(st.integers(0, cap))
        if draw(st.booleans()):
            return []
        tail = [draw(coeff) for _ in range(draw(st.integers(0, cap - k)))]
        return [0] * k + [draw(unit)] + tail

    return part(4), part(6)


@given(short_models())
def test_classify_matches_valuation_table(coeffs):
    a4, a6 = coeffs
    v4, v6 = order_at_zero(a4), order_at_zero(a6)
    assume(not (v4 >= 4 and v6 >= 6))
    disc = short_discriminant(a4, a6)
    vd = order_at_zero(disc)
    assume(vd != float("inf"))
    w = model(a4=a4, a6=a6)
    f = classify_fiber(w, ZERO)
    assert str(f) == kodaira_from_valuations(v4, v6, vd)
    assert euler_number(f) == vd


@given(short_models())
def test_classify_idempotent_under_minimize(coeffs):
    a4, a6 = coeffs
    w = model(a4=a4, a6=a6)
    assume(not discriminant_unchecked(w).is_zero())
    for place in (ZERO, INF, Place.finite(1)):
        assert classify_fiber(minimize_at(w, place), place) == classify_fiber(w, place)


def _pullback(w):
    """Substitute t -> t^2; degrees double, so the caps do too."""
    def sq(p):
        out = []
        for c in p.coeffs:
            out += [c, 0]
        return PolyQ(tuple(out[:-1]) if out else ())
    return WeierstrassModel(*(sq(p) for p in w.coeffs()), cap_scale=2 * w.cap_scale)


def test_pullback_of_base_example():
    w = model(a6=[0, 1])
    assert _pullback(w) == WeierstrassModel.from_coeffs(a6=[0, 0, 1], cap_scale=2)
    for place in (ZERO, INF):
        assert classify_fiber(_pullback(w), place) == quadratic_base_change(classify_fiber(w, place))


@given(short_models())
def test_pullback_matches_base_change_table(coeffs):
    a4, a6 = coeffs
    w = model(a4=a4, a6=a6)
    assume(not discriminant_unchecked(w).is_zero())
    for place in (ZERO, INF):
        before = classify_fiber(w, place)
        after = classify_fiber(_pullback(w), place)
        if before.kind == "I" and before.n == 0:
            assert after == I(0)
        else:
            assert after == quadratic_base_change(before)


def test_more_star_types():
    # (t+1)^3 has I0* at -1; a4 = -3t^2, a6 = t^3 (2 + t) gives I1* at 0
    assert classify_fiber(model(a6=[1, 3, 3, 1]), Place.finite(-1)) == IStar(0)
    assert classify_fiber(model(a4=[0, 0, -3], a6=[0, 0, 0, 2, 1]), ZERO) == IStar(1)
    assert classify_fiber(model(a4=[0, 1]), ZERO) == III
    assert classify_fiber(model(a4=[0, 0, 0, 1]), INF) == III
    assert classify_fiber(model(a4=[0, 0, 0, 1]), ZERO) == III_STAR
