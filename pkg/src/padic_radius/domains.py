"""Laurent domains in the closed unit polydisk and their diameter function.

A domain is cut out by caps ``|f_i| <= r_i`` and cups ``|g_j| >= s_j`` with
polynomial ``f_i, g_j`` and radii in ``p^Q``.  The diameter at a point is the
radius of the largest open disk around it that stays inside the domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .arith import LogValue, Radius, fmt_log, parse_log, vp
from .errors import DomainError, SchemaError
from .polygon import count_zeros
from .series import GenericPoint, PSeries, gauss_norm, multi_indices, taylor_shift


@dataclass(frozen=True)
class LaurentSpec:
    d: int
    caps: tuple = ()
    cups: tuple = ()

    def __post_init__(self):
        caps = tuple((f, Fraction(r)) for f, r in self.caps)
        cups = tuple((g, Fraction(s)) for g, s in self.cups)
        for poly, q in caps + cups:
            if poly.d != self.d:
                raise ValueError("constraint polynomial has the wrong number of variables")
            if not poly.is_polynomial:
                raise ValueError("constraints must be exact polynomials")
            if q > 0:
                raise ValueError("constraint radii must lie in (0, 1]")
        object.__setattr__(self, "caps", caps)
        object.__setattr__(self, "cups", cups)

    @classmethod
    def polydisk(cls, d: int = 1) -> "LaurentSpec":
        return cls(d)

    @classmethod
    def annulus(cls, inner_log, outer_log=0) -> "LaurentSpec":
        """``p**inner_log <= |x| <= p**outer_log`` in one variable."""
        x = PSeries.variable(0)
        caps = ((x, outer_log),) if Fraction(outer_log) < 0 else ()
        return cls(1, caps, ((x, inner_log),))

    def to_json(self) -> dict:
        return {
            "vars": self.d,
            "caps": [{"poly": f.to_json(), "log_r": str(r)} for f, r in self.caps],
            "cups": [{"poly": g.to_json(), "log_s": str(s)} for g, s in self.cups],
        }

    @classmethod
    def from_json(cls, obj, d: int | None = None) -> "LaurentSpec":
        try:
            caps = [(PSeries.from_json(c["poly"]), parse_log(c["log_r"])) for c in obj.get("caps", [])]
            cups = [(PSeries.from_json(c["poly"]), parse_log(c["log_s"])) for c in obj.get("cups", [])]
            dims = {f.d for f, _ in caps + cups}
            if "vars" in obj:
                dims.add(int(obj["vars"]))
            if d is not None:
                dims.add(d)
            if len(dims) > 1:
                raise SchemaError(f"inconsistent dimensions {sorted(dims)} in domain")
            if not dims:
                raise SchemaError("domain dimension unknown: give 'vars' or a constraint")
            return cls(dims.pop(), tuple(caps), tuple(cups))
        except SchemaError:
            raise
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise SchemaError(f"malformed domain: {exc}") from exc


@dataclass(frozen=True)
class DiameterReport:
    delta: Radius
    witness: tuple | None = None  # (kind, constraint index, alpha)
    truncation_bound: int = 0


def violated_constraint(spec: LaurentSpec, xi: GenericPoint, p: int) -> str | None:
    """Description of the first constraint ``xi`` fails, or ``None`` for a member."""
    if xi.d != spec.d:
        raise ValueError("point and domain dimensions differ")
    if not xi.in_unit_polydisk(p):
        return "closed unit polydisk"
    for k, (f, r) in enumerate(spec.caps):
        if gauss_norm(f, xi, p).logp > r:
            return f"cap {k}: |{f}| <= p^({fmt_log(r)})"
    for k, (g, s) in enumerate(spec.cups):
        if gauss_norm(g, xi, p).logp < s:
            return f"cup {k}: |{g}| >= p^({fmt_log(s)})"
    return None


def member(spec: LaurentSpec, xi: GenericPoint, p: int) -> bool:
    return violated_constraint(spec, xi, p) is None


def _sup_norm_by_order(f: PSeries, p: int) -> dict[int, LogValue]:
    """``max_{|alpha| = n} log_p ||f^{[alpha]}||`` over the closed unit polydisk, per order ``n``."""
    eta = GenericPoint.maximal(f.d)
    out = {}
    for n in range(1, f.degree() + 1):
        out[n] = max(gauss_norm(f.divided_derivative(a), eta, p).logp for a in multi_indices(f.d, n))
    return out


def _cap_truncation(f: PSeries, r: LogValue, p: int) -> int:
    """First order ``N`` such that every ``||f^{[alpha]}||`` with ``|alpha| >= N`` is ``< r``."""
    norms = _sup_norm_by_order(f, p)
    n = f.degree() + 1
    while n > 1 and norms[n - 1] < r:
        n -= 1
    return max(n, 1)


def _diameter_terms(f: PSeries, numerator_log: LogValue, xi: GenericPoint, p: int, orders: range, kind: str, index: int):
    best: LogValue = Fraction(0)
    witness = None
    for n in orders:
        for alpha in multi_indices(f.d, n):
            c = gauss_norm(f.divided_derivative(alpha), xi, p)
            if c.is_zero:
                continue
            t = (numerator_log - c.logp) / n
            if t < best:
                best, witness = t, (kind, index, alpha)
    return best, witness


def diameter_cap(f: PSeries, r, xi: GenericPoint, p: int, index: int = 0) -> DiameterReport:
    """Diameter of ``{|f| <= p**r}`` at ``xi``."""
    r = Fraction(r)
    if gauss_norm(f, xi, p).logp > r:
        raise DomainError(f"cap constraint #{index} |f| <= p^{r} fails at {xi}")
    if f.is_zero():
        return DiameterReport(Radius(0), None, 1)
    n_max = _cap_truncation(f, r, p)
    best, witness = _diameter_terms(f, r, xi, p, range(1, n_max), "cap", index)
    return DiameterReport(Radius(best), witness, n_max)


def diameter_cup(g: PSeries, s, xi: GenericPoint, p: int, index: int = 0) -> DiameterReport:
    """Diameter of ``{|g| >= p**s}`` at ``xi``: distance to the nearest zero of ``g``, capped at 1."""
    s = Fraction(s)
    gx = gauss_norm(g, xi, p)
    if gx.logp < s:
        raise DomainError(f"cup constraint #{index} |g| >= p^{s} fails at {xi}")
    n_max = g.degree() + 1
    best, witness = _diameter_terms(g, gx.logp, xi, p, range(1, n_max), "cup", index)
    return DiameterReport(Radius(best), witness, n_max)


def diameter(spec: LaurentSpec, xi: GenericPoint, p: int) -> DiameterReport:
    if not xi.in_unit_polydisk(p):
        raise DomainError(f"{xi} is outside the closed unit polydisk")
    best = DiameterReport(Radius(0), None, 1)
    reports = [diameter_cap(f, r, xi, p, i) for i, (f, r) in enumerate(spec.caps)]
    reports += [diameter_cup(g, s, xi, p, j) for j, (g, s) in enumerate(spec.cups)]
    for rep in reports:
        if rep.delta < best.delta:
            best = DiameterReport(rep.delta, rep.witness, best.truncation_bound)
    bound = max((rep.truncation_bound for rep in reports), default=1)
    return DiameterReport(best.delta, best.witness, bound)


# -- domains that split as disks with holes, coordinate by coordinate ------


@dataclass
class DiskWithHoles:
    """``{|x - center| <= p**radius_log} minus the open disks in holes``, one coordinate."""

    center: Fraction = Fraction(0)
    radius_log: Fraction = Fraction(0)
    holes: list = field(default_factory=list)  # [(center, radius_log)], open disks


class UnsupportedDomain(ValueError):
    """The domain is not a product of one-variable disks with holes."""


def _single_variable_form(poly: PSeries, p: int):
    """Describe ``|poly(x)|`` as ``|c| |x_i - b|^k``: returns ``(i, v(c), b, k)``, or ``None`` for constants."""
    vars_ = poly.variables()
    if not vars_:
        return None
    if len(vars_) > 1:
        raise UnsupportedDomain("constraint involves several variables")
    i = vars_.pop()
    dense = {a[i]: c for a, c in poly.coeffs.items()}
    k = max(dense)
    if len(dense) == 1:
        return i, vp(dense[k], p), Fraction(0), k
    if k == 1:
        c1, c0 = dense[1], dense.get(0, Fraction(0))
        return i, vp(c1, p), -c0 / c1, 1
    raise UnsupportedDomain("constraint is neither linear nor a monomial")


def decompose(spec: LaurentSpec, p: int) -> list[DiskWithHoles]:
    """Split the domain into one disk-with-holes per coordinate, or raise :class:`UnsupportedDomain`."""
    pieces = [DiskWithHoles() for _ in range(spec.d)]
    for f, r in spec.caps:
        form = _single_variable_form(f, p)
        if form is None:
            if -vp(f.constant_term(), p) > r:
                raise DomainError("constant cap constraint is never satisfied")
            continue
        i, vc, b, k = form
        rho = (r + vc) / k
        if vp(b, p) < 0:
            raise UnsupportedDomain("cap disk centered outside the unit disk")
        piece = pieces[i]
        if rho >= piece.radius_log and -vp(b - piece.center, p) <= rho:
            continue  # contains the current disk
        if rho <= piece.radius_log and -vp(b - piece.center, p) <= piece.radius_log:
            piece.center, piece.radius_log = b, rho
            continue
        raise DomainError("cap constraints describe disjoint disks; the domain is empty")
    for g, s in spec.cups:
        form = _single_variable_form(g, p)
        if form is None:
            if -vp(g.constant_term(), p) < s:
                raise DomainError("constant cup constraint is never satisfied")
            continue
        i, vc, b, k = form
        pieces[i].holes.append((b, (s + vc) / k))
    for piece in pieces:
        kept = []
        for b, rho in piece.holes:
            dist = -vp(b - piece.center, p)
            if dist > piece.radius_log:
                continue  # disjoint from the disk
            if rho > piece.radius_log:
                raise DomainError("a cup constraint removes the whole disk")
            kept.append((b, rho))
        maximal = []
        for b, rho in kept:
            covered = any(
                (rho2 > rho or (rho2 == rho and (b2, rho2) in maximal)) and -vp(b - b2, p) < rho2
                for b2, rho2 in kept
                if (b2, rho2) != (b, rho)
            )
            if not covered and (b, rho) not in maximal:
                maximal.append((b, rho))
        piece.holes = maximal
    return pieces


def _coordinate_points(piece: DiskWithHoles, p: int) -> list[tuple]:
    pts = [(piece.center, piece.radius_log)]
    for b, rho in piece.holes:
        if rho == piece.radius_log:
            continue  # boundary point of the hole is the boundary point of the disk
        pts.append((b, rho))
    return pts


def shilov_points(spec: LaurentSpec, p: int) -> list[GenericPoint]:
    """Boundary points on which every analytic function on the domain attains its sup-norm."""
    pieces = decompose(spec, p)
    coords = [_coordinate_points(piece, p) for piece in pieces]
    out = []
    for combo in product(*coords):
        out.append(GenericPoint(tuple(c for c, _ in combo), tuple(q for _, q in combo)))
    return out


def derivation_norm_log(spec: LaurentSpec, i: int, p: int) -> Fraction:
    """Upper bound for ``log_p`` of the operator norm of ``d/dx_i`` on the domain.

    On a disk of radius ``rho`` minus holes of radii ``rho_h`` the monomial
    estimates give ``|d/dx| <= 1 / min(rho, rho_h)``.
    """
    piece = decompose(spec, p)[i]
    smallest = min([piece.radius_log] + [rho for _, rho in piece.holes])
    return -smallest


def zero_free(spec: LaurentSpec, poly: PSeries, p: int) -> bool:
    """True when the polynomial has no zero in the domain.

    In one coordinate: the zeros in the outer closed disk must all be
    accounted for by zeros inside the holes.  In several variables only
    polynomials in a single coordinate, or ones dominated by their constant
    term at the maximal point of the domain, are certified.
    """
    if poly.is_zero():
        return False
    vars_ = poly.variables()
    if not vars_:
        return True
    pieces = decompose(spec, p)
    if len(vars_) == 1:
        i = next(iter(vars_))
        one = PSeries(1, {(a[i],): c for a, c in poly.coeffs.items()})
        piece = pieces[i]
        inside = count_zeros(one, piece.center, piece.radius_log, p, closed=True)
        in_holes = sum(count_zeros(one, b, rho, p, closed=False) for b, rho in piece.holes)
        return inside == in_holes
    # several variables: |c_0| strictly dominating forbids zeros on a polydisk
    if any(piece.holes for piece in pieces):
        raise UnsupportedDomain("cannot certify a multivariate denominator on a domain with holes")
    center = tuple(piece.center for piece in pieces)
    point = GenericPoint(center, tuple(piece.radius_log for piece in pieces))
    shifted = taylor_shift(poly, center)
    c0 = shifted.constant_term()
    if c0 == 0:
        return False
    rest = PSeries(poly.d, {a: c for a, c in shifted.coeffs.items() if any(a)})
    return gauss_norm(rest, GenericPoint((0,) * poly.d, point.radius_log), p).logp < -vp(c0, p)


def check_member(spec: LaurentSpec, xi: GenericPoint, p: int) -> None:
    bad = violated_constraint(spec, xi, p)
    if bad is not None:
        raise DomainError(f"{xi} violates {bad}")


def log_grid(q1, q2, m: int) -> list[Fraction]:
    """``m`` equally spaced rationals from ``q1`` to ``q2``."""
    q1, q2 = Fraction(q1), Fraction(q2)
    if m < 1:
        raise ValueError("grid needs at least one point")
    if m == 1:
        return [q1]
    step = (q2 - q1) / (m - 1)
    return [q1 + k * step for k in range(m)]


def parse_grid(text: str) -> list[Fraction]:
    """``"q1:q2:m"`` -> equally spaced grid."""
    try:
        q1, q2, m = text.split(":")
        return log_grid(Fraction(q1), Fraction(q2), int(m))
    except ValueError as exc:
        raise SchemaError(f"bad grid {text!r}: expected 'q1:q2:m'") from exc


def points_on_segment(center: Sequence, grid: Sequence) -> list[GenericPoint]:
    return [GenericPoint.disk(center, q) for q in grid]

