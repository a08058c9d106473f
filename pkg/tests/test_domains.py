import random
from fractions import Fraction

import pytest
from helpers import limit_of_tail
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_radius.arith import vp
from padic_radius.domains import (
    LaurentSpec,
    UnsupportedDomain,
    decompose,
    derivation_norm_log,
    diameter,
    diameter_cap,
    diameter_cup,
    log_grid,
    member,
    parse_grid,
    shilov_points,
    zero_free,
)
from padic_radius.errors import DomainError, SchemaError
from padic_radius.polygon import nearest_zero_radius
from padic_radius.series import GenericPoint, PSeries, taylor_shift

x = PSeries.variable(0, 1)


def brute_force_cap(f, r, a, p, grid):
    """Largest grid eps with sup_alpha |f^[alpha](a)| eps^alpha <= p^r."""
    shifted = taylor_shift(f, (a,))
    ok = [
        q for q in grid
        if all(-vp(c, p) + k * q <= r for (k,), c in shifted.coeffs.items())
    ]
    return max(ok) if ok else None


def test_member_examples():
    assert member(LaurentSpec(1, (), ((x, -1),)), GenericPoint.maximal(1), 2)
    assert not member(LaurentSpec(1, ((x, -1),)), GenericPoint.rational((1,)), 2)
    assert member(LaurentSpec.polydisk(2), GenericPoint((Fraction(1, 3), 5), (-2, 0)), 2)


def test_diameter_cap_examples():
    zero = GenericPoint.rational((0,))
    rep = diameter_cap(x, -1, zero, 2)
    assert rep.delta.logp == -1 and rep.witness[2] == (1,)
    assert diameter_cap(PSeries(1), -1, zero, 2).delta.logp == 0
    assert diameter_cap(x * x, -1, zero, 2).delta.logp == Fraction(-1, 2)
    with pytest.raises(DomainError):
        diameter_cap(x, -1, GenericPoint.rational((1,)), 2)


def test_diameter_cup_examples():
    assert diameter_cup(x, -1, GenericPoint.rational((2,)), 2).delta.logp == -1
    assert diameter_cup(x, -2, GenericPoint.disk((0,), -1), 2).delta.logp == -1
    assert diameter_cup(PSeries.constant(1), -3, GenericPoint.maximal(1), 2).delta.logp == 0
    with pytest.raises(DomainError):
        diameter_cup(x, -1, GenericPoint.disk((0,), -2), 2)


def test_diameter_examples():
    assert diameter(LaurentSpec.annulus(-2), GenericPoint.disk((0,), -1), 2).delta.logp == -1
    assert diameter(LaurentSpec.polydisk(1), GenericPoint.disk((0,), -1), 3).delta.logp == 0
    both = LaurentSpec(1, ((x, -1),), ((x, -1),))
    assert diameter(both, GenericPoint.rational((2,)), 2).delta.logp == -1


def test_spec_json_round_trip():
    spec = LaurentSpec(1, ((x - 1, -1),), ((x, -3),))
    assert LaurentSpec.from_json(spec.to_json()) == spec
    with pytest.raises(SchemaError):
        LaurentSpec.from_json({"caps": [{"poly": x.to_json()}]})
    with pytest.raises(SchemaError):
        LaurentSpec.from_json({"caps": []})


def test_grids():
    assert log_grid(-3, 0, 4) == [-3, -2, -1, 0]
    assert parse_grid("-1:0:3") == [-1, Fraction(-1, 2), 0]
    with pytest.raises(SchemaError):
        parse_grid("1:2")


def test_shilov_points_and_derivation_norm():
    ann = LaurentSpec.annulus(-2)
    assert [(pt.center, pt.radius_log) for pt in shilov_points(ann, 2)] == [((0,), (0,)), ((0,), (-2,))]
    assert derivation_norm_log(ann, 0, 2) == 2
    assert derivation_norm_log(LaurentSpec.polydisk(1), 0, 5) == 0
    small = LaurentSpec(1, ((x - 1, -1),))
    assert [(pt.center, pt.radius_log) for pt in shilov_points(small, 2)] == [((1,), (-1,))]
    assert derivation_norm_log(small, 0, 2) == 1
    # the hole at 0 lies outside the disk |x - 1| <= 1/2 and is dropped
    two = LaurentSpec(1, ((x - 1, -1),), ((x, -3),))
    assert decompose(two, 2)[0].holes == []


def test_unsupported_domains():
    y = PSeries.variable(1, 2)
    with pytest.raises(UnsupportedDomain):
        shilov_points(LaurentSpec(2, ((PSeries.variable(0, 2) + y, -1),)), 2)
    with pytest.raises(UnsupportedDomain):
        shilov_points(LaurentSpec(1, ((x * x - 2, -1),)), 2)


def test_zero_free():
    ann = LaurentSpec.annulus(-2)
    assert zero_free(ann, x, 2)
    assert zero_free(ann, x - 8, 2)  # |8| = 1/8 lies in the hole
    assert zero_free(ann, x - Fraction(1, 8), 2)  # |1/8| = 8, outside the unit disk
    assert not zero_free(ann, x - 1, 2)
    assert not zero_free(ann, x - 4, 2)  # |4| = 1/4 sits on the inner boundary
    assert not zero_free(ann, (x - 8) * (x - 2), 2)
    assert zero_free(LaurentSpec.polydisk(1), x - 3, 3) is False
    assert zero_free(LaurentSpec.polydisk(1), x * 3 - 1, 3)
    y = PSeries.variable(1, 2)
    assert zero_free(LaurentSpec.polydisk(2), 1 + 2 * PSeries.variable(0, 2) * y, 2)
    assert not zero_free(LaurentSpec.polydisk(2), 1 + PSeries.variable(0, 2) * y, 2)


def _member_cap_instance(rng, p):
    a = Fraction(rng.randint(-12, 12), rng.choice([k for k in (1, 3, 5, 7) if k % p]))
    h = PSeries.constant(rng.randint(-5, 5))
    for k in range(1, rng.randint(1, 3) + 1):
        h = h + rng.randint(-6, 6) * x**k
    # f(a) = p * c, so |f(a)| <= 1/p and a is a member of {|f| <= 1/p}
    return (x - a) * h + p * rng.randint(-4, 4), a


@pytest.mark.parametrize("p", [2, 3, 5])
def test_diameter_cap_against_brute_force(p):
    rng = random.Random(p)
    grid = log_grid(-2, 0, 64)
    step = grid[1] - grid[0]
    for _ in range(20):
        f, a = _member_cap_instance(rng, p)
        delta = diameter_cap(f, -1, GenericPoint.rational((a,)), p).delta.logp
        brute = brute_force_cap(f, -1, a, p, grid)
        assert brute is not None and brute <= delta < brute + step


@pytest.mark.parametrize("p", [2, 3, 5])
def test_diameter_cup_is_distance_to_nearest_zero(p):
    rng = random.Random(50 + p)
    for _ in range(20):
        roots = [Fraction(rng.randint(-20, 20), rng.choice([1, 1, 7])) * Fraction(p) ** rng.randint(0, 3) for _ in range(rng.randint(1, 5))]
        g = PSeries.constant(1)
        for b in roots:
            g = g * (x - b)
        a = Fraction(rng.randint(-20, 20))
        if a in roots:
            a += 1
        if a in roots:
            continue
        s = -vp(g.evaluate((a,)), p)
        got = diameter_cup(g, s, GenericPoint.rational((a,)), p).delta.logp
        assert got == nearest_zero_radius(g, a, p).logp
        assert got == min([Fraction(0)] + [-vp(a - b, p) for b in roots])


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(-3, 0), st.data())
def test_positive_diameter_on_members(p, q, data):
    spec = LaurentSpec(1, ((x - 1, 0),), ((x, -3),))
    c = data.draw(st.integers(-30, 30))
    xi = GenericPoint.disk((Fraction(c),), q)
    if member(spec, xi, p):
        assert diameter(spec, xi, p).delta.logp > -1000


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("spec", [
    LaurentSpec.annulus(-3),
    LaurentSpec(1, ((x * x, -1),)),
    LaurentSpec(1, ((x - 1, 0),), ((x - 1, -2), (x, -3))),
])
def test_diameter_upper_semicontinuous(p, spec):
    # t_{a+c, r p^(-1/k)} with |c| = r tends to t_{a, r} as k grows
    checked = 0
    for a, r in [(Fraction(0), -1), (Fraction(0), -2), (Fraction(1), -1), (Fraction(0), 0)]:
        limit_pt = GenericPoint.disk((a,), r)
        if not member(spec, limit_pt, p):
            continue
        c = Fraction(p) ** (-r)
        samples = []
        for k in range(8, 64, 8):
            pt = GenericPoint.disk((a + c,), r - Fraction(1, k))
            if member(spec, pt, p):
                samples.append((k, diameter(spec, pt, p).delta.logp))
        if len(samples) < 3:
            continue
        assert limit_of_tail(samples) <= diameter(spec, limit_pt, p).delta.logp
        checked += 1
    assert checked
