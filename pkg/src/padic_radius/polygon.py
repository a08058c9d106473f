"""Valuation polygons of polynomials in several variables.

``v(f, mu) = min_alpha (v(f_alpha) + <alpha, mu>)`` is a concave piecewise
linear function of ``mu``.  Points where the minimum is attained twice are
exactly the valuation vectors of zeros of ``f`` over an algebraically closed
complete extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arith import INF, LogValue, Radius, vp
from .series import PSeries, taylor_shift


@dataclass(frozen=True)
class PolygonResult:
    value: Fraction
    minimizers: tuple
    regular: bool


def v_of(f: PSeries, mu: Sequence, p: int) -> PolygonResult:
    if not f.is_polynomial:
        raise ValueError("valuation polygons are only computed for exact polynomials")
    if f.is_zero():
        raise ValueError("v(0, mu) is identically +inf")
    mu = tuple(Fraction(m) for m in mu)
    if len(mu) != f.d:
        raise ValueError("mu has the wrong dimension")
    best = None
    argmin: list = []
    for alpha, c in f.coeffs.items():
        val = vp(c, p) + sum(a * m for a, m in zip(alpha, mu))
        if best is None or val < best:
            best, argmin = val, [alpha]
        elif val == best:
            argmin.append(alpha)
    argmin.sort()
    return PolygonResult(best, tuple(argmin), len(argmin) == 1)


@dataclass(frozen=True)
class ZeroCertificate:
    """Answer of :func:`zero_detect`.

    ``needs_extension`` is set when some ``mu_i`` is not an integer: the zero
    then only exists over a ramified extension of ``Q_p``.
    """

    exists: bool
    mu: tuple
    needs_extension: bool

    def __bool__(self) -> bool:
        return self.exists


def zero_detect(f: PSeries, mu: Sequence, p: int) -> ZeroCertificate:
    res = v_of(f, mu, p)
    mu = tuple(Fraction(m) for m in mu)
    return ZeroCertificate(
        exists=not res.regular,
        mu=mu,
        needs_extension=any(m.denominator != 1 for m in mu),
    )


@dataclass(frozen=True)
class ZeroLocus:
    """A zero ``zeta`` with ``|zeta_i| = r_i`` (``bound == "="``) or ``|zeta_i| <= r_i`` (``"<="``)."""

    radius_log: tuple
    bound: str


def drop_implies_zero(f: PSeries, xi: Sequence, p: int) -> ZeroLocus | None:
    """Certify a zero from comparing ``|f(xi)|`` with ``|f(0)|``."""
    xi = tuple(Fraction(x) for x in xi)
    at_xi = vp(f.evaluate(xi), p)
    at_0 = vp(f.constant_term(), p)
    radii = tuple(-vp(x, p) for x in xi)
    if at_xi > at_0:
        return ZeroLocus(radii, "=")
    if at_xi < at_0:
        return ZeroLocus(radii, "<=")
    return None


def nearest_zero_radius(g: PSeries, a, p: int) -> Radius:
    """Distance from ``a`` to the nearest zero of the one-variable polynomial ``g``, capped at 1.

    Equals ``min_k (|g(a)| / |g^{[k]}(a)|)^{1/k}`` over ``k >= 1``.
    """
    if g.d != 1:
        raise ValueError("nearest_zero_radius is for one-variable polynomials")
    coeffs = taylor_shift(g, (a,)).dense()
    if not coeffs or coeffs[0] == 0:
        raise ValueError(f"{a} is a zero of g")
    v0 = vp(coeffs[0], p)
    best: LogValue = Fraction(0)
    for k, c in enumerate(coeffs[1:], start=1):
        if c:
            best = min(best, (vp(c, p) - v0) / k)
    # |g(a)|^{1/k} |c_k|^{-1/k} has log_p equal to (v(c_k) - v(g(a))) / k
    return Radius(best)


def lower_hull(points: Sequence[tuple]) -> list[tuple]:
    """Lower convex hull of points ``(x, y)`` with distinct ``x``, left to right."""
    pts = sorted(points)
    hull: list[tuple] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point when it is on or above the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def root_valuations(f: PSeries, p: int) -> list[tuple]:
    """Valuations of the roots of a one-variable polynomial with multiplicities.

    Read off the Newton polygon: a segment of slope ``m`` and width ``w``
    carries ``w`` roots of valuation ``-m``.  Roots at zero are reported
    with valuation ``INF``.
    """
    if f.d != 1 or f.is_zero():
        raise ValueError("root_valuations needs a nonzero one-variable polynomial")
    pts = [(k, vp(c, p)) for (k,), c in f.coeffs.items()]
    out: list[tuple] = []
    low = min(k for k, _ in pts)
    if low:
        out.append((INF, low))
    hull = lower_hull(pts)
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1) / (x2 - x1)
        out.append((-slope, x2 - x1))
    return out


def count_zeros(f: PSeries, center, radius_log, p: int, closed: bool = True) -> int:
    """Number of zeros (with multiplicity) of a one-variable polynomial in ``D(center, r^{+/-})``."""
    if f.d != 1:
        raise ValueError("count_zeros is for one-variable polynomials")
    shifted = taylor_shift(f, (center,))
    res = v_of(shifted, (-Fraction(radius_log),), p)
    idx = [alpha[0] for alpha in res.minimizers]
    return max(idx) if closed else min(idx)
