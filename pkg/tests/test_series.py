from fractions import Fraction

import pytest
from helpers import polynomials
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_radius.arith import INF, vp
from padic_radius.errors import SchemaError
from padic_radius.series import (
    GenericPoint,
    PSeries,
    boundary_seminorm,
    gauss_norm,
    gauss_valuation,
    multi_indices,
    parse_vector,
    ratfunc_norm,
    series_inverse,
    taylor_shift,
)

x = PSeries.variable(0, 1)


def test_taylor_shift_examples():
    assert taylor_shift(x * x, (1,)).dense() == [1, 2, 1]
    assert taylor_shift(x, (0,)) == x
    assert taylor_shift(x**3 - x, (2,)).dense() == [6, 11, 6, 1]


def test_gauss_norm_examples():
    assert gauss_norm(PSeries.constant(Fraction(1, 4)), GenericPoint.maximal(1), 2).logp == 2
    assert gauss_norm(3 + x, GenericPoint.disk((0,), -2), 3).logp == -1
    assert gauss_norm(x - 1, GenericPoint.maximal(1), 2).logp == 0


def test_ratfunc_norm_examples():
    one = PSeries.constant(1)
    assert ratfunc_norm(one, x, GenericPoint.disk((0,), -1), 2).logp == 1
    assert ratfunc_norm(x, x, GenericPoint.disk((0,), Fraction(-1, 3)), 5).logp == 0
    assert ratfunc_norm(x - 1, x + 1, GenericPoint.maximal(1), 2).logp == 0
    with pytest.raises(ZeroDivisionError):
        ratfunc_norm(one, PSeries.constant(0), GenericPoint.maximal(1), 2)


def test_boundary_seminorm_examples():
    assert boundary_seminorm(PSeries.constant(1), (-3,), 2).logp == 0
    assert boundary_seminorm(x * Fraction(1, 2), (-1,), 2).logp == 0
    assert boundary_seminorm(x * x, (-1,), 2).logp == -2


def test_truncated_gauss_norm_is_flagged():
    f = (1 + x).truncate(3)
    assert not gauss_norm(f, GenericPoint.maximal(1), 2).exact
    assert gauss_norm(1 + x, GenericPoint.maximal(1), 2).exact


def test_zero_coefficients_are_dropped():
    f = x - x
    assert f.is_zero() and f.coeffs == {} and f.degree() == -1
    assert gauss_norm(f, GenericPoint.maximal(1), 3).is_zero


def test_truncation_propagates():
    f = (1 + x).truncate(4)
    g = f * f * f * f * f
    assert g.trunc == 4
    assert max(sum(a) for a in g.coeffs) <= 4


def test_multi_indices_enumeration():
    assert sorted(multi_indices(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert len(list(multi_indices(3, 4))) == 15


def test_divided_derivative_matches_shift():
    y = PSeries.variable(1, 2)
    f = PSeries.variable(0, 2) ** 3 * y**2 + 5 * y
    a = (Fraction(2), Fraction(-1, 3))
    shifted = taylor_shift(f, a)
    for alpha in [(0, 0), (1, 0), (2, 1), (3, 2), (0, 1)]:
        assert f.divided_derivative(alpha).evaluate(a) == shifted.coefficient(alpha)


def test_series_inverse():
    f = 1 + x * 2 + x * x
    inv = series_inverse(f, 10)
    assert (f * inv).truncate(10) == PSeries.constant(1).truncate(10)
    with pytest.raises(ZeroDivisionError):
        series_inverse(x, 3)


def test_generic_point_validation():
    with pytest.raises(ValueError):
        GenericPoint((0,), (1,))
    pt = GenericPoint.rational((Fraction(1, 3),))
    assert pt.is_rational and pt.radius_log == (-INF,)
    assert not GenericPoint.rational((Fraction(1, 2),)).in_unit_polydisk(2)


def test_json_round_trip_and_errors():
    f = (x - Fraction(1, 3)) ** 3
    assert PSeries.from_json(f.to_json()) == f
    with pytest.raises(SchemaError):
        PSeries.from_json({"vars": 1, "terms": [{"exp": [1, 2], "num": "1"}]})
    with pytest.raises(SchemaError):
        PSeries.from_json({"vars": 1, "terms": [{"exp": [1], "num": "1", "den": "0"}]})
    with pytest.raises(SchemaError):
        PSeries.from_json({"terms": []})


def test_parse_vector():
    assert parse_vector("1/2,3") == (Fraction(1, 2), Fraction(3))


radii = st.integers(-6, 0).map(Fraction) | st.fractions(-3, 0, max_denominator=4)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3]), st.data())
def test_multiplicativity(p, data):
    d = data.draw(st.integers(1, 2))
    f = data.draw(polynomials(p, d, 8))
    g = data.draw(polynomials(p, d, 8))
    center = tuple(data.draw(st.integers(-4, 4)) for _ in range(d))
    q = tuple(data.draw(radii) for _ in range(d))
    xi = GenericPoint(center, q)
    assert gauss_norm(f * g, xi, p) == gauss_norm(f, xi, p) * gauss_norm(g, xi, p)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.data())
def test_ultrametric(p, data):
    d = data.draw(st.integers(1, 2))
    f = data.draw(polynomials(p, d, 6))
    g = data.draw(polynomials(p, d, 6))
    xi = GenericPoint((0,) * d, tuple(data.draw(radii) for _ in range(d)))
    nf, ng, ns = gauss_norm(f, xi, p), gauss_norm(g, xi, p), gauss_norm(f + g, xi, p)
    assert ns <= max(nf, ng)
    if nf != ng:
        assert ns == max(nf, ng)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3]), st.data())
def test_shift_round_trip(p, data):
    d = data.draw(st.integers(1, 2))
    f = data.draw(polynomials(p, d, 6))
    a = tuple(data.draw(st.fractions(-5, 5, max_denominator=7)) for _ in range(d))
    assert taylor_shift(taylor_shift(f, a), tuple(-t for t in a)) == f


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.data())
def test_rational_point_is_substitution(p, data):
    d = data.draw(st.integers(1, 2))
    f = data.draw(polynomials(p, d, 6))
    a = tuple(data.draw(st.integers(-9, 9)) for _ in range(d))
    assert gauss_valuation(f, GenericPoint.rational(a), p) == vp(f.evaluate(a), p)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]), st.data())
def test_gauss_norm_is_sup_over_shifted_centers(p, data):
    # moving the center inside the closed disk does not change the point t_{a,r}
    f = data.draw(polynomials(p, 1, 6))
    q = data.draw(st.integers(-3, 0))
    b = data.draw(st.integers(-20, 20)) * Fraction(p) ** (-q)
    assert gauss_norm(f, GenericPoint.disk((0,), q), p) == gauss_norm(f, GenericPoint.disk((b,), q), p)
