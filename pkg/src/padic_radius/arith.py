"""Exact p-adic valuation arithmetic.

Absolute values are never stored as floats.  A norm ``|x| = p**(-v)`` is kept
as its valuation ``v`` (a :class:`~fractions.Fraction`, or ``math.inf`` for
zero), and radii are kept as ``log_p`` of the radius.  ``math.inf`` mixes
correctly with ``Fraction`` under ``min``/``max``/``<`` and addition, which is
all the extended arithmetic the package needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Union

INF = math.inf

#: A valuation: an exact rational, or ``INF`` for the valuation of zero.
LogValue = Union[Fraction, float]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


def vp_int(n: int, p: int) -> int:
    """Exponent of ``p`` in the nonzero integer ``n``."""
    if n == 0:
        raise ValueError("vp_int is undefined at 0; use vp() for the +inf convention")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x, p: int) -> LogValue:
    """Valuation of a rational number; ``INF`` for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    return Fraction(vp_int(x.numerator, p) - vp_int(x.denominator, p))


def digit_sum(n: int, p: int) -> int:
    if n < 0:
        raise ValueError("digit_sum needs n >= 0")
    s = 0
    while n:
        n, r = divmod(n, p)
        s += r
    return s


def vp_factorial(n: int, p: int) -> int:
    """``v_p(n!)`` by Legendre's formula ``(n - S_p(n)) / (p - 1)``."""
    if n < 0:
        raise ValueError("vp_factorial needs n >= 0")
    return (n - digit_sum(n, p)) // (p - 1)


def curly_brace(s: int, n: int, p: int) -> int:
    """``log_p {s, n}_p``: the largest total valuation of ``n`` distinct integers in ``[1, s]``.

    Picking the ``n`` largest valuations is optimal because any ``n``
    distinct integers can be listed in strictly increasing order.
    """
    if s < 0 or n < 0:
        raise ValueError("curly_brace needs s, n >= 0")
    if n > s:
        raise ValueError(f"{{{s},{n}}}_p ranges over an empty family (n > s)")
    vals = sorted((vp_int(m, p) for m in range(1, s + 1)), reverse=True)
    return sum(vals[:n])


def fmt_log(x) -> str:
    """Serialise an extended rational: lowest-terms ``num/den``, ``inf`` or ``-inf``."""
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return str(Fraction(x))


def parse_log(text) -> LogValue:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    t = str(text).strip()
    if t in ("inf", "+inf"):
        return INF
    if t == "-inf":
        return -INF
    return Fraction(t)


def approx_power(p: int, logp, digits: int) -> str:
    """Decimal rendering of ``p**logp`` with ``digits`` significant digits."""
    if logp == INF:
        return "inf"
    if logp == -INF:
        return "0"
    q = Fraction(logp)
    with localcontext() as ctx:
        ctx.prec = digits + 10
        val = Decimal(p) ** (Decimal(q.numerator) / Decimal(q.denominator))
        ctx.prec = digits
        return str(+val)


@dataclass(frozen=True, order=True)
class Radius:
    """A radius ``p**logp``; ``logp`` may be ``-INF`` (radius 0) or ``INF``.

    ``exact`` is ``False`` for values that are only known to be lower bounds
    (Gauss norms of truncated series).  It does not take part in comparisons.
    """

    logp: LogValue
    exact: bool = field(default=True, compare=False)

    def __post_init__(self):
        if not (self.logp == INF or self.logp == -INF):
            object.__setattr__(self, "logp", Fraction(self.logp))

    @classmethod
    def from_valuation(cls, v: LogValue, exact: bool = True) -> "Radius":
        return cls(-v, exact)

    @property
    def valuation(self) -> LogValue:
        return -self.logp

    @property
    def is_zero(self) -> bool:
        return self.logp == -INF

    @property
    def is_infinite(self) -> bool:
        return self.logp == INF

    def __mul__(self, other: "Radius") -> "Radius":
        if {self.logp, other.logp} == {INF, -INF}:
            raise ValueError("0 * inf is undefined")
        return Radius(self.logp + other.logp, self.exact and other.exact)

    def __truediv__(self, other: "Radius") -> "Radius":
        if other.is_zero:
            raise ZeroDivisionError("division by a zero radius")
        if self.logp == other.logp and self.is_infinite:
            raise ValueError("inf / inf is undefined")
        return Radius(self.logp - other.logp, self.exact and other.exact)

    def root(self, n: int) -> "Radius":
        return Radius(self.logp / n if abs(self.logp) != INF else self.logp, self.exact)

    def approx(self, p: int, digits: int = 12) -> str:
        return approx_power(p, self.logp, digits)

    def __str__(self) -> str:
        return f"p^({fmt_log(self.logp)})"


ZERO_RADIUS = Radius(-INF)
UNIT_RADIUS = Radius(0)
INFINITE_RADIUS = Radius(INF)
