import cmath
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from schottky.algebra import PolyFraction, fraction_equal, x_index
from schottky.moebius import (
    INF,
    DegenerateError,
    FixedPointForm,
    MoebiusMap,
    apply,
    compose,
    cross_ratio,
    derivative,
    fixed_point_form,
    fixed_point_forms,
    from_fixed_points,
)

rat = st.fractions(min_value=-20, max_value=20, max_denominator=9)
cplx = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@st.composite
def rational_maps(draw):
    a, b, c, d = (draw(rat) for _ in range(4))
    assume(a * d - b * c != 0)
    return MoebiusMap(a, b, c, d)


def test_infinity_image():
    s = Fraction(1, 10)
    m = from_fixed_points(FixedPointForm(1, -1, s))
    assert apply(m, INF) == (1 + s) / (1 - s)


def test_unit_multiplier_is_identity():
    m = from_fixed_points(FixedPointForm(Fraction(2), Fraction(-3), Fraction(1)))
    assert m.equals(MoebiusMap.identity(Fraction(1)))
    with pytest.raises(DegenerateError):
        FixedPointForm(2.0, -3.0, 1.0).check_contracting()


def test_degenerate_data_rejected():
    with pytest.raises(DegenerateError):
        FixedPointForm(1, 1, Fraction(1, 2))
    with pytest.raises(DegenerateError):
        MoebiusMap(1, 2, 2, 4)


def test_cross_ratio_infinity_convention():
    # with (a-c)(b-d)/((a-d)(b-c)), the order (INF, 0, 1, l) returns l
    lam = Fraction(7, 3)
    assert cross_ratio(INF, 0, 1, lam) == lam
    assert cross_ratio(0, INF, 1, lam) == 1 / lam


@given(rat, rat, rat, rat)
def test_cross_ratio_pair_swap(a, b, c, d):
    assume(len({a, b, c, d}) == 4)
    assert cross_ratio(a, b, c, d) == cross_ratio(b, a, d, c)


@given(rational_maps(), st.lists(rat, min_size=4, max_size=4, unique=True))
def test_cross_ratio_moebius_invariance_exact(m, pts):
    imgs = [apply(m, z) for z in pts]
    assume(all(w is not INF for w in imgs))
    assert cross_ratio(*imgs) == cross_ratio(*pts)


def test_cross_ratio_invariance_symbolic():
    nv = 4
    v = [PolyFraction.variable(k, nv) for k in range(nv)]
    m = MoebiusMap(PolyFraction.from_int(2, nv), PolyFraction.from_int(3, nv), PolyFraction.from_int(1, nv), PolyFraction.from_int(5, nv))
    imgs = [apply(m, z) for z in v]
    assert fraction_equal(cross_ratio(*imgs), cross_ratio(*v))


@given(rational_maps(), rational_maps(), rat)
def test_chain_rule(f, g, z):
    gz = apply(g, z)
    assume(gz is not INF and g.c * z + g.d != 0 and f.c * gz + f.d != 0)
    assert derivative(compose(f, g), z) == derivative(f, gz) * derivative(g, z)


@given(rational_maps(), rat)
def test_inverse_and_identity(m, z):
    assert compose(m, m.inverse()).equals(MoebiusMap.identity(Fraction(1)))
    assert apply(MoebiusMap.identity(Fraction(1)), z) == z


@given(rat, rat, st.fractions(min_value=Fraction(-9, 10), max_value=Fraction(9, 10), max_denominator=11))
def test_fixed_point_round_trip_exact(tp, tm, s):
    assume(tp != tm and s != 0)
    m = from_fixed_points(FixedPointForm(tp, tm, s))
    assert derivative(m, tp) == s
    assert apply(m, tp) == tp and apply(m, tm) == tm
    f = fixed_point_form(m)
    assert (f.t_plus, f.t_minus, f.s) == (tp, tm, s)


@given(cplx, cplx, st.complex_numbers(min_magnitude=1e-3, max_magnitude=0.9), cplx)
def test_fixed_point_round_trip_numeric(tp, tm, s, z):
    assume(abs(tp - tm) > 0.1 and abs(z - tp) > 0.1 and abs(z - tm) > 0.1)
    m = from_fixed_points(FixedPointForm(tp, tm, s))
    f = fixed_point_form(m)
    assert abs(f.t_plus - tp) < 1e-9 * (1 + abs(tp))
    assert abs(f.t_minus - tm) < 1e-9 * (1 + abs(tm))
    assert abs(f.s - s) < 1e-9
    # local coordinate (z - t+)/(z - t-) is scaled by s
    w = apply(m, z)
    assume(w is not INF and abs(w - tm) > 1e-6)
    lhs = (w - tp) / (w - tm)
    rhs = s * (z - tp) / (z - tm)
    assert cmath.isclose(lhs, rhs, rel_tol=1e-8, abs_tol=1e-10)


def test_fixed_points_symbolic():
    g = 2
    nv = 2 * g
    tp = PolyFraction.variable(x_index(1, g), nv)
    tm = PolyFraction.variable(x_index(-1, g), nv)
    s = PolyFraction.variable(x_index(2, g), nv)
    m = from_fixed_points(FixedPointForm(tp, tm, s))
    forms = fixed_point_forms(m)
    ok = any(
        fraction_equal(f.t_plus, tp) and fraction_equal(f.t_minus, tm) and fraction_equal(f.s, s) for f in forms
    )
    assert ok
