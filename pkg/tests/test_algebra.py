from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from schottky.algebra import (
    EVALUATED,
    QQ,
    FractionField,
    MultiPoly,
    MultiSeries,
    PolyFraction,
    QSeries,
    fraction_equal,
    qseries_inverse,
    qseries_mul,
    qseries_pow,
    series_inverse,
    series_mul,
    x_index,
)
from schottky.algebra.serialize import (
    fraction_from_json,
    fraction_to_json,
    qseries_from_json,
    qseries_to_json,
    series_from_json,
    series_to_json,
)
from schottky.moebius import cross_ratio

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def y(k, nv=2, D=3, ring=QQ):
    return MultiSeries.gen(k, nv, D, ring)


def one(nv=2, D=3, ring=QQ):
    return MultiSeries.one(nv, D, ring)


@st.composite
def series(draw, nv=2, D=3):
    from schottky.algebra import monomials

    terms = {e: draw(small) for e in monomials(nv, D) if draw(st.booleans())}
    return MultiSeries(nv, D, QQ, terms)


@st.composite
def units(draw, nv=2, D=3):
    s = draw(series(nv, D))
    c = draw(small.filter(lambda v: v != 0))
    return s - MultiSeries.constant(s.constant_term(), nv, D, QQ) + MultiSeries.constant(c, nv, D, QQ)


def xvar(k, g=2):
    return PolyFraction.variable(x_index(k, g), 2 * g)


# -- examples -----------------------------------------------------------------------

def test_difference_of_squares():
    p = (one(D=2) + y(0, D=2)) * (one(D=2) - y(0, D=2))
    assert p == one(D=2) - y(0, D=2) * y(0, D=2)
    assert p.coefficient((2, 0)) == -1


def test_square_of_trinomial_matches_convolution():
    s = one(D=2) + y(0, D=2) + y(1, D=2)
    sq = s * s
    expect = {(0, 0): 1, (1, 0): 2, (0, 1): 2, (2, 0): 1, (1, 1): 2, (0, 2): 1}
    assert dict(sq.terms) == {e: Fraction(c) for e, c in expect.items()}


def test_geometric_inverse():
    inv = series_inverse(one(1, 3) - MultiSeries.gen(0, 1, 3, QQ))
    assert all(inv.coefficient((k,)) == 1 for k in range(4))


def test_constant_inverse():
    c = MultiSeries.constant(Fraction(3, 7), 2, 3, QQ)
    assert series_inverse(c) == MultiSeries.constant(Fraction(7, 3), 2, 3, QQ)


def test_non_unit_inverse_rejected():
    with pytest.raises((ZeroDivisionError, ArithmeticError, ValueError)):
        series_inverse(y(0))


def test_qseries_examples():
    q = QSeries.monomial(1, 5)
    qinv = QSeries.monomial(-1, 3)
    assert qseries_mul(q, qinv) == QSeries.one(4)
    geo = qseries_inverse(QSeries.one(4) - QSeries.monomial(1, 4))
    assert [geo[n] for n in range(5)] == [1] * 5
    N = 2
    prod = QSeries.one(N)
    for n in range(1, N + 1):
        prod = prod * (QSeries.one(N) - QSeries.monomial(n, N))
    delta = QSeries.monomial(1, N + 1) * qseries_pow(prod, 24)
    assert [delta[n] for n in (1, 2)] == [1, -24]


def test_fraction_equal_examples():
    x1, x2, x3 = xvar(1), xvar(-1), xvar(2)
    a = (x1 - x2) / (x1 - x3)
    assert fraction_equal(a, a)
    two = PolyFraction.from_int(2, 4)
    assert fraction_equal((two * (x1 - x2)) / (two * (x1 - x3)), a)
    cr1 = cross_ratio(xvar(1), xvar(-1), xvar(2), xvar(-2))
    cr2 = cross_ratio(xvar(2), xvar(-2), xvar(1), xvar(-1))
    assert fraction_equal(cr1, cr2)
    assert not fraction_equal(a, (x1 - x3) / (x1 - x2))


def test_x_index_layout():
    assert [x_index(k, 3) for k in (1, 2, 3, -1, -2, -3)] == [0, 1, 2, 3, 4, 5]


def test_fraction_evaluate_and_substitute():
    x1, x2 = xvar(1), xvar(2)
    f = (x1 * x1 - x2) / (x1 - x2)
    assert f.evaluate([3, 5, 0, 0]) == Fraction(9 - 5, 3 - 5)
    imgs = [MultiPoly.variable(0, 4), MultiPoly.variable(1, 4), -MultiPoly.variable(0, 4), -MultiPoly.variable(1, 4)]
    assert f.substitute(imgs).evaluate([3, 5, 7, 11]) == Fraction(4, -2)


def test_symbolic_division_by_zero_fraction():
    with pytest.raises(ZeroDivisionError):
        xvar(1) / (xvar(1) - xvar(1))


# -- properties ---------------------------------------------------------------------

@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + (b - a) == b
    assert a * one() == a


@given(units())
def test_inverse_two_sided(u):
    inv = series_inverse(u)
    assert series_mul(u, inv) == one()
    assert series_mul(inv, u) == one()


@given(st.lists(small, min_size=1, max_size=6), st.lists(small, min_size=1, max_size=6), st.integers(-2, 2))
def test_qseries_ring_axioms(ca, cb, shift):
    a, b = QSeries(shift, ca), QSeries(0, cb)
    assert a * b == b * a
    assert (a + b) * b == a * b + b * b
    if ca[0] != 0:
        prod = qseries_mul(a, qseries_inverse(a))
        assert all(prod[n] == (1 if n == 0 else 0) for n in range(prod.min_exponent, prod.max_exponent + 1))


def _rand_fraction(coeffs):
    g = 2
    vs = [xvar(k, g) for k in (1, 2, -1, -2)]
    num = PolyFraction.from_rational(coeffs[0], 4) + vs[0] * PolyFraction.from_rational(coeffs[1], 4)
    den = vs[coeffs[2] % 4] - vs[(coeffs[2] + 1) % 4]
    return num / den


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3), st.integers(1, 3), st.integers(1, 3))
def test_fraction_equal_is_equivalence(c, k1, k2):
    a = _rand_fraction(c)
    scale1 = PolyFraction.from_int(k1, 4) * (xvar(1) - xvar(-2))
    scale2 = PolyFraction.from_int(k2, 4) * (xvar(2) + xvar(-1))
    b = (a * scale1) / scale1
    cc = (b * scale2) / scale2
    assert fraction_equal(a, a)
    assert fraction_equal(a, b) and fraction_equal(b, a)
    assert fraction_equal(b, cc) and fraction_equal(a, cc)


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_fraction_field_axioms(c1, c2):
    a, b = _rand_fraction(c1), _rand_fraction(c2)
    assert fraction_equal(a * b, b * a)
    assert fraction_equal((a + b) - b, a)
    if not a.is_zero():
        assert fraction_equal(a * a.inverse(), PolyFraction.from_int(1, 4))


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3), st.lists(st.integers(-9, 9), min_size=4, max_size=4))
def test_fraction_evaluate_is_ring_map(c, pt):
    a = _rand_fraction(c)
    b = _rand_fraction([c[1], c[2], c[0] + 1])
    try:
        va, vb = a.evaluate(pt), b.evaluate(pt)
    except ZeroDivisionError:
        return
    assert (a * b).evaluate(pt) == va * vb
    assert (a + b).evaluate(pt) == va + vb


def test_symbolic_evaluated_commute():
    ring = FractionField(4)
    a = MultiSeries.one(2, 3, ring) + MultiSeries.gen(0, 2, 3, ring).scale(xvar(1)) + MultiSeries.gen(1, 2, 3, ring).scale(
        (xvar(2) - xvar(-1)).inverse()
    )
    b = series_inverse(a) * a * a
    pt = [Fraction(2), Fraction(3), Fraction(-5), Fraction(7, 2)]
    ea = a.evaluate_coefficients(pt)
    assert ea.mode == EVALUATED
    assert b.evaluate_coefficients(pt) == series_inverse(ea) * ea * ea


def test_evaluate_y_and_shift():
    s = one() + y(0) * y(1) + y(1).scale(Fraction(1, 2))
    assert s.evaluate_y([Fraction(2), Fraction(4)]) == 1 + 8 + 2
    t = s.shift((1, 0))
    assert t.coefficient((2, 1)) == 1 and t.degree == 4
    assert t.divide_monomial((1, 0)).truncate(2) == s.truncate(2)


# -- serialization ----------------------------------------------------------------

@given(series())
def test_series_json_round_trip(s):
    assert series_from_json(series_to_json(s)) == s
    assert series_to_json(series_from_json(series_to_json(s))) == series_to_json(s)


def test_symbolic_series_json_round_trip():
    ring = FractionField(4)
    s = MultiSeries.one(2, 2, ring) + MultiSeries.gen(1, 2, 2, ring).scale(cross_ratio(xvar(1), xvar(-1), xvar(2), xvar(-2)))
    back = series_from_json(series_to_json(s))
    assert back == s
    f = s.coefficient((0, 1))
    assert fraction_equal(fraction_from_json(fraction_to_json(f)), f)


@given(st.lists(small, min_size=1, max_size=8), st.integers(-3, 3))
def test_qseries_json_round_trip(cs, lo):
    q = QSeries(lo, cs)
    assert qseries_from_json(qseries_to_json(q)) == q
