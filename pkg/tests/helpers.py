"""Shared generators for randomized tests."""

from fractions import Fraction

from hypothesis import strategies as st

from padic_radius.series import PSeries

PRIMES = (2, 3, 5)


def p_rationals(p: int, max_exp: int = 3):
    """Rationals ``u * p^e`` with small units, so valuations spread over ``[-max_exp, max_exp]``."""
    units = st.integers(-20, 20).filter(lambda u: u % p != 0)
    dens = st.integers(1, 12).filter(lambda u: u % p != 0)
    return st.builds(
        lambda u, w, e: Fraction(u, w) * Fraction(p) ** e,
        units,
        dens,
        st.integers(-max_exp, max_exp),
    )


@st.composite
def polynomials(draw, p: int, d: int = 1, max_deg: int = 4, nonzero: bool = True):
    n_terms = draw(st.integers(1 if nonzero else 0, 6))
    coeffs = {}
    for _ in range(n_terms):
        alpha = tuple(draw(st.integers(0, max_deg)) for _ in range(d))
        if sum(alpha) > max_deg:
            continue
        coeffs[alpha] = draw(p_rationals(p))
    if nonzero and not coeffs:
        coeffs[(0,) * d] = draw(p_rationals(p))
    return PSeries(d, coeffs)


def random_poly(rng, p: int, d: int, max_deg: int, terms: int = 5, max_exp: int = 3) -> PSeries:
    coeffs = {}
    for _ in range(terms):
        alpha = tuple(rng.randint(0, max_deg) for _ in range(d))
        while sum(alpha) > max_deg:
            alpha = tuple(rng.randint(0, max_deg) for _ in range(d))
        u = rng.choice([k for k in range(-9, 10) if k % p])
        coeffs[alpha] = Fraction(u) * Fraction(p) ** rng.randint(-max_exp, max_exp)
    return PSeries(d, coeffs)


def limit_of_tail(samples):
    """Exact limit of a sequence ``(k, a + b/k)``, after checking the last three samples agree."""
    (k1, v1), (k2, v2), (k3, v3) = samples[-3:]
    b = (v2 - v3) / (Fraction(1, k2) - Fraction(1, k3))
    a = v3 - b / k3
    assert a + b / k1 == v1
    return a
