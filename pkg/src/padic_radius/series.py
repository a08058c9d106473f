"""Multivariate polynomials and truncated power series over the rationals.

Coefficients are exact :class:`~fractions.Fraction` values, keyed by
exponent tuples.  The total degree of a multi-index is the *sum* of its
entries.  Norms at Berkovich points are computed from valuations of
coefficients, so every comparison is an exact rational comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .arith import INF, LogValue, Radius, fmt_log, vp
from .errors import SchemaError

Exp = tuple


def total(alpha: Sequence[int]) -> int:
    return sum(alpha)


def multi_indices(d: int, n: int):
    """All multi-indices of length ``d`` and total degree ``n``, in lexicographic order (descending first entry)."""
    if d == 1:
        yield (n,)
        return
    for k in range(n, -1, -1):
        for rest in multi_indices(d - 1, n - k):
            yield (k,) + rest


def factorial_multi(alpha: Sequence[int]) -> int:
    out = 1
    for a in alpha:
        out *= math.factorial(a)
    return out


class PSeries:
    """Polynomial (``trunc is None``) or power series truncated at total degree ``trunc``."""

    __slots__ = ("d", "coeffs", "trunc")

    def __init__(self, d: int, coeffs: Mapping[Exp, object] | None = None, trunc: int | None = None):
        if d < 1:
            raise ValueError("a series needs at least one variable")
        self.d = d
        self.trunc = trunc
        clean: dict[Exp, Fraction] = {}
        for alpha, c in (coeffs or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != d or min(alpha) < 0:
                raise ValueError(f"bad exponent {alpha} for {d} variables")
            if trunc is not None and sum(alpha) > trunc:
                continue
            c = Fraction(c)
            if c:
                clean[alpha] = clean.get(alpha, Fraction(0)) + c
        self.coeffs = {a: c for a, c in clean.items() if c}

    # construction ---------------------------------------------------------

    @classmethod
    def constant(cls, c, d: int = 1) -> "PSeries":
        return cls(d, {(0,) * d: c})

    @classmethod
    def variable(cls, i: int, d: int = 1) -> "PSeries":
        e = [0] * d
        e[i] = 1
        return cls(d, {tuple(e): 1})

    @classmethod
    def from_dense(cls, coeffs: Sequence, d: int = 1) -> "PSeries":
        """One-variable polynomial from ``[c0, c1, ...]``."""
        if d != 1:
            raise ValueError("from_dense builds one-variable polynomials")
        return cls(1, {(k,): c for k, c in enumerate(coeffs)})

    # inspection -----------------------------------------------------------

    @property
    def is_polynomial(self) -> bool:
        return self.trunc is None

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero series."""
        return max((sum(a) for a in self.coeffs), default=-1)

    def degree_in(self, i: int) -> int:
        return max((a[i] for a in self.coeffs), default=-1)

    def variables(self) -> set[int]:
        return {i for a in self.coeffs for i, k in enumerate(a) if k}

    def coefficient(self, alpha: Exp) -> Fraction:
        return self.coeffs.get(tuple(alpha), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.d)

    def dense(self) -> list[Fraction]:
        """Coefficient list of a one-variable series."""
        if self.d != 1:
            raise ValueError("dense() is for one-variable series")
        out = [Fraction(0)] * (self.degree() + 1)
        for (k,), c in self.coeffs.items():
            out[k] = c
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PSeries.constant(other, self.d)
        if not isinstance(other, PSeries):
            return NotImplemented
        return self.d == other.d and self.trunc == other.trunc and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.d, self.trunc, frozenset(self.coeffs.items())))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        return f"PSeries[{self.d}]({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            body = "0"
        else:
            parts = []
            for alpha in sorted(self.coeffs, key=lambda a: (sum(a), a)):
                mono = "*".join(
                    f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(alpha) if k
                )
                parts.append(f"({self.coeffs[alpha]})" + (f"*{mono}" if mono else ""))
            body = " + ".join(parts)
        tail = "" if self.trunc is None else f" + O(deg {self.trunc + 1})"
        return body + tail

    # ring operations --------------------------------------------------------

    def _coerce(self, other) -> "PSeries":
        if isinstance(other, PSeries):
            if other.d != self.d:
                raise ValueError("dimension mismatch")
            return other
        return PSeries.constant(other, self.d)

    @staticmethod
    def _mintrunc(a: int | None, b: int | None) -> int | None:
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def __add__(self, other) -> "PSeries":
        other = self._coerce(other)
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            out[a] = out.get(a, 0) + c
        return PSeries(self.d, out, self._mintrunc(self.trunc, other.trunc))

    __radd__ = __add__

    def __neg__(self) -> "PSeries":
        return PSeries(self.d, {a: -c for a, c in self.coeffs.items()}, self.trunc)

    def __sub__(self, other) -> "PSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PSeries":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PSeries":
        if not isinstance(other, PSeries):
            c = Fraction(other)
            return PSeries(self.d, {a: c * v for a, v in self.coeffs.items()}, self.trunc)
        other = self._coerce(other)
        trunc = self._mintrunc(self.trunc, other.trunc)
        out: dict[Exp, Fraction] = {}
        for a, c in self.coeffs.items():
            sa = sum(a)
            for b, e in other.coeffs.items():
                if trunc is not None and sa + sum(b) > trunc:
                    continue
                k = tuple(x + y for x, y in zip(a, b))
                out[k] = out.get(k, 0) + c * e
        return PSeries(self.d, out, trunc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PSeries":
        out = PSeries.constant(1, self.d)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def truncate(self, n: int) -> "PSeries":
        return PSeries(self.d, self.coeffs, self._mintrunc(self.trunc, n))

    def as_polynomial(self) -> "PSeries":
        return PSeries(self.d, self.coeffs)

    # calculus -------------------------------------------------------------

    def derivative(self, i: int) -> "PSeries":
        out = {}
        for a, c in self.coeffs.items():
            if a[i]:
                b = list(a)
                b[i] -= 1
                out[tuple(b)] = c * a[i]
        trunc = None if self.trunc is None else self.trunc - 1
        return PSeries(self.d, out, trunc)

    def divided_derivative(self, alpha: Sequence[int]) -> "PSeries":
        """``f^{[alpha]} = (1/alpha!) d^alpha f``, computed with binomials (no division)."""
        alpha = tuple(alpha)
        out = {}
        for a, c in self.coeffs.items():
            if all(x >= y for x, y in zip(a, alpha)):
                b = tuple(x - y for x, y in zip(a, alpha))
                m = 1
                for x, y in zip(a, alpha):
                    m *= math.comb(x, y)
                out[b] = c * m
        trunc = None if self.trunc is None else self.trunc - sum(alpha)
        return PSeries(self.d, out, trunc)

    def evaluate(self, point: Sequence) -> Fraction:
        point = [Fraction(x) for x in point]
        acc = Fraction(0)
        for a, c in self.coeffs.items():
            term = c
            for x, k in zip(point, a):
                if k:
                    term *= x**k
            acc += term
        return acc

    # serialisation ---------------------------------------------------------

    def to_json(self) -> dict:
        terms = []
        for alpha in sorted(self.coeffs):
            c = self.coeffs[alpha]
            terms.append({"exp": list(alpha), "num": str(c.numerator), "den": str(c.denominator)})
        return {"vars": self.d, "terms": terms}

    @classmethod
    def from_json(cls, obj) -> "PSeries":
        try:
            d = int(obj["vars"])
            coeffs: dict[Exp, Fraction] = {}
            for t in obj["terms"]:
                exp = tuple(int(e) for e in t["exp"])
                if len(exp) != d:
                    raise SchemaError(f"exponent {list(exp)} does not have {d} entries")
                den = int(t.get("den", 1))
                if den == 0:
                    raise SchemaError("zero denominator in polynomial literal")
                coeffs[exp] = coeffs.get(exp, 0) + Fraction(int(t["num"]), den)
            return cls(d, coeffs)
        except SchemaError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed polynomial literal: {exc}") from exc


def taylor_shift(f: PSeries, a: Sequence) -> PSeries:
    """Coefficients of ``f`` in the powers of ``x - a``: the divided derivatives ``f^{[alpha]}(a)``.

    Exact for polynomials.  For a truncated series the unknown tail is
    ignored and the result keeps the truncation order.
    """
    a = [Fraction(x) for x in a]
    if len(a) != f.d:
        raise ValueError("center dimension mismatch")
    coeffs = dict(f.coeffs)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        powers = [Fraction(1)]
        for _ in range(max((e[i] for e in coeffs), default=0)):
            powers.append(powers[-1] * ai)
        out: dict[Exp, Fraction] = {}
        for alpha, c in coeffs.items():
            k = alpha[i]
            for j in range(k + 1):
                beta = alpha[:i] + (j,) + alpha[i + 1:]
                out[beta] = out.get(beta, 0) + c * math.comb(k, j) * powers[k - j]
        coeffs = {b: c for b, c in out.items() if c}
    return PSeries(f.d, coeffs, f.trunc)


def series_inverse(f: PSeries, n: int) -> PSeries:
    """``1/f`` as a power series truncated at total degree ``n``; needs ``f(0) != 0``."""
    c0 = f.constant_term()
    if c0 == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    h = (f.truncate(n) * (1 / c0)) - 1  # f = c0 (1 + h), h has no constant term
    neg_h = -h
    out = PSeries.constant(1, f.d).truncate(n)
    term = out
    for _ in range(n):
        term = term * neg_h
        if term.is_zero():
            break
        out = out + term
    return out * (1 / c0)


@dataclass(frozen=True)
class GenericPoint:
    """The point ``t_{a,r}`` with ``r_i = p**q_i``; ``q_i = -inf`` collapses coordinate ``i`` to ``a_i``."""

    center: tuple
    radius_log: tuple

    def __post_init__(self):
        center = tuple(Fraction(c) for c in self.center)
        radius_log = tuple(q if q == -INF else Fraction(q) for q in self.radius_log)
        if len(center) != len(radius_log):
            raise ValueError("center and radius vectors differ in length")
        if any(q > 0 for q in radius_log):
            raise ValueError("generic points must have radii <= 1")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius_log", radius_log)

    @property
    def d(self) -> int:
        return len(self.center)

    @property
    def is_rational(self) -> bool:
        return all(q == -INF for q in self.radius_log)

    @classmethod
    def rational(cls, center: Sequence) -> "GenericPoint":
        return cls(tuple(center), (-INF,) * len(center))

    @classmethod
    def disk(cls, center: Sequence, q) -> "GenericPoint":
        """Maximal point of the closed polydisk with equal radii ``p**q`` around ``center``."""
        return cls(tuple(center), (q,) * len(center))

    @classmethod
    def maximal(cls, d: int = 1) -> "GenericPoint":
        return cls((0,) * d, (0,) * d)

    def in_unit_polydisk(self, p: int) -> bool:
        return all(vp(c, p) >= 0 for c in self.center)

    def same_as(self, other: "GenericPoint", p: int) -> bool:
        """``t_{a,r} = t_{b,r}`` exactly when ``|a_i - b_i| <= r_i`` in every coordinate."""
        if self.radius_log != other.radius_log:
            return False
        return all(-vp(a - b, p) <= q for a, b, q in zip(self.center, other.center, self.radius_log))

    def __str__(self) -> str:
        c = ",".join(str(x) for x in self.center)
        r = ",".join(fmt_log(q) for q in self.radius_log)
        return f"t[a=({c}), log_p r=({r})]"


def _term_log(c: Fraction, alpha: Exp, radius_log: tuple, p: int) -> LogValue:
    """``log_p(|c| r^alpha)`` with ``r_i = 0`` handled for ``alpha_i = 0``."""
    out = -vp(c, p)
    for k, q in zip(alpha, radius_log):
        if k:
            out = out + k * q
    return out


def gauss_norm(f: PSeries, xi: GenericPoint, p: int) -> Radius:
    """``|f(t_{a,r})| = max_alpha |f^{[alpha]}(a)| r^alpha`` as an exact radius.

    For truncated series the maximum over the known coefficients is only a
    lower bound and the result carries ``exact=False``.
    """
    if f.d != xi.d:
        raise ValueError("dimension mismatch between series and point")
    shifted = taylor_shift(f, xi.center) if any(xi.center) else f
    best: LogValue = -INF
    for alpha, c in shifted.coeffs.items():
        t = _term_log(c, alpha, xi.radius_log, p)
        if t > best:
            best = t
    return Radius(best, exact=f.is_polynomial)


def gauss_valuation(f: PSeries, xi: GenericPoint, p: int) -> LogValue:
    """Valuation ``-log_p |f(xi)|``."""
    return gauss_norm(f, xi, p).valuation


def ratfunc_norm(num: PSeries, den: PSeries, xi: GenericPoint, p: int) -> Radius:
    """``|num/den|`` at ``xi``; exact because norms at these points are multiplicative."""
    dn = gauss_norm(den, xi, p)
    if dn.is_zero:
        raise ZeroDivisionError(f"denominator vanishes at {xi}")
    return gauss_norm(num, xi, p) / dn


def boundary_seminorm(coeffs: Mapping[Exp, object] | PSeries, radius_log: Sequence, p: int) -> Radius:
    """``sup_alpha |a_alpha| R^alpha`` for a finite (Laurent) expansion around the center.

    Exponents may be negative.  For a finite expansion the limsup of the
    Gauss norms as the radius tends to ``R`` is this plain maximum.
    """
    if isinstance(coeffs, PSeries):
        coeffs = coeffs.coeffs
    radius_log = tuple(Fraction(q) for q in radius_log)
    best: LogValue = -INF
    for alpha, c in coeffs.items():
        c = Fraction(c)
        if not c:
            continue
        t = -vp(c, p) + sum(k * q for k, q in zip(alpha, radius_log))
        best = max(best, t)
    return Radius(best)


def parse_vector(text: str | Iterable) -> tuple:
    """``"1/2,3"`` -> ``(Fraction(1, 2), Fraction(3))``."""
    if isinstance(text, str):
        return tuple(Fraction(t) for t in text.split(",") if t.strip())
    return tuple(Fraction(t) for t in text)
