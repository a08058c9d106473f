"""Linear differential systems ``dy/dx_i = G_i y`` with rational-function coefficients.

The iterated matrices ``G_alpha`` (``d^alpha y = G_alpha y``) are kept over a
shared denominator: if ``G_i = A_i / D`` then ``G_alpha = P_alpha / D^|alpha|``
with polynomial ``P_alpha``, and the recursion
``G_{alpha+1_i} = d_i G_alpha + G_alpha G_i`` becomes

    P_{alpha+1_i} = D d_i P_alpha - |alpha| (d_i D) P_alpha + P_alpha A_i

which needs no polynomial gcds.  Norms at Berkovich points are multiplicative,
so extra common factors between ``P_alpha`` and ``D`` never change a norm.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import INF, LogValue, Radius, check_prime, curly_brace, fmt_log, vp, vp_factorial
from .domains import (
    LaurentSpec,
    check_member,
    derivation_norm_log,
    diameter,
    shilov_points,
    zero_free,
)
from .errors import DomainError, IntegrabilityError, SchemaError
from .series import (
    GenericPoint,
    PSeries,
    gauss_valuation,
    multi_indices,
    series_inverse,
    taylor_shift,
)

log = logging.getLogger(__name__)

Matrix = tuple  # tuple of rows of PSeries


# -- small matrix helpers over PSeries ---------------------------------------


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, m, k = len(a), len(b), len(b[0])
    zero = a[0][0] * 0
    rows = []
    for r in range(n):
        row = []
        for c in range(k):
            acc = zero
            for j in range(m):
                if a[r][j] and b[j][c]:
                    acc = acc + a[r][j] * b[j][c]
            row.append(acc)
        rows.append(tuple(row))
    return tuple(rows)


def mat_map(f, a: Matrix) -> Matrix:
    return tuple(tuple(f(x) for x in row) for row in a)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def identity(mu: int, d: int) -> Matrix:
    return tuple(
        tuple(PSeries.constant(1 if r == c else 0, d) for c in range(mu)) for r in range(mu)
    )


def determinant(a: Matrix):
    """Leibniz expansion; fine for the small ranks handled here."""
    n = len(a)
    total = None
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = a[0][perm[0]]
        for r in range(1, n):
            term = term * a[r][perm[r]]
        if inversions % 2:
            term = -term
        total = term if total is None else total + term
    return total


def _normalise_den(den: PSeries) -> tuple[PSeries, Fraction]:
    """Scale so the lexicographically first coefficient is 1; returns ``(monic, scale)``."""
    lead = den.coeffs[min(den.coeffs)]
    return den * (1 / lead), lead


# -- the system ----------------------------------------------------------------


@dataclass
class DiffSystem:
    """``dy/dx_i = G_i y`` on a Laurent domain ``U`` of the closed unit polydisk.

    ``G[i][r][c]`` is a pair ``(num, den)`` of polynomials in ``d`` variables.
    """

    p: int
    d: int
    mu: int
    G: tuple
    domain: LaurentSpec
    _common: tuple | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        check_prime(self.p)
        if self.domain.d != self.d:
            raise ValueError("domain dimension differs from system dimension")
        if len(self.G) != self.d:
            raise ValueError(f"expected {self.d} matrices, got {len(self.G)}")
        G = []
        for mat in self.G:
            if len(mat) != self.mu or any(len(row) != self.mu for row in mat):
                raise ValueError(f"every G_i must be {self.mu}x{self.mu}")
            rows = []
            for row in mat:
                entries = []
                for entry in row:
                    num, den = entry if isinstance(entry, tuple) else (entry, PSeries.constant(1, self.d))
                    if not isinstance(num, PSeries):
                        num = PSeries.constant(num, self.d)
                    if not isinstance(den, PSeries):
                        den = PSeries.constant(den, self.d)
                    if num.d != self.d or den.d != self.d:
                        raise ValueError("entry has the wrong number of variables")
                    if den.is_zero():
                        raise ValueError("zero denominator")
                    entries.append((num, den))
                rows.append(tuple(entries))
            G.append(tuple(rows))
        self.G = tuple(G)
        for den in self.denominators():
            if not zero_free(self.domain, den, self.p):
                raise DomainError(f"denominator {den} has a zero in the domain")

    # constructors ---------------------------------------------------------

    @classmethod
    def scalar(cls, p: int, num, den=1, domain: LaurentSpec | None = None) -> "DiffSystem":
        """Rank one, one variable: ``y' = (num/den) y``."""
        domain = domain or LaurentSpec.polydisk(1)
        return cls(p, 1, 1, ((((_as_poly(num), _as_poly(den)),),),), domain)

    @classmethod
    def constant(cls, p: int, matrices: Sequence, domain: LaurentSpec | None = None) -> "DiffSystem":
        """Constant-coefficient system from rational matrices, one per variable."""
        d = len(matrices)
        mu = len(matrices[0])
        domain = domain or LaurentSpec.polydisk(d)
        G = tuple(
            tuple(tuple((PSeries.constant(c, d), PSeries.constant(1, d)) for c in row) for row in m)
            for m in matrices
        )
        return cls(p, d, mu, G, domain)

    # shared denominator ------------------------------------------------------

    def denominators(self) -> list[PSeries]:
        seen: list[PSeries] = []
        for mat in self.G:
            for row in mat:
                for _, den in row:
                    if den.variables():
                        monic, _ = _normalise_den(den)
                        if monic not in seen:
                            seen.append(monic)
        return seen

    def common_form(self) -> tuple[PSeries, tuple]:
        """``(D, (A_1, ..., A_d))`` with ``G_i = A_i / D``."""
        if self._common is None:
            dens = self.denominators()
            D = PSeries.constant(1, self.d)
            for den in dens:
                D = D * den
            A = []
            for mat in self.G:
                rows = []
                for row in mat:
                    entries = []
                    for num, den in row:
                        if den.variables():
                            monic, scale = _normalise_den(den)
                            other = PSeries.constant(1 / scale, self.d)
                            for e in dens:
                                if e != monic:
                                    other = other * e
                            entries.append(num * other)
                        else:
                            entries.append(num * D * (1 / den.constant_term()))
                    rows.append(tuple(entries))
                A.append(tuple(rows))
            self._common = (D, tuple(A))
        return self._common

    def integrability_defect(self) -> tuple[int, int] | None:
        """First pair ``(i, j)`` with ``d_j G_i + G_i G_j != d_i G_j + G_j G_i``, or ``None``."""
        D, A = self.common_form()
        for i in range(self.d):
            for j in range(i + 1, self.d):
                # multiply both sides by D^2
                lhs = mat_add(
                    mat_map(lambda e: D * e.derivative(j) - e * D.derivative(j), A[i]),
                    mat_mul(A[i], A[j]),
                )
                rhs = mat_add(
                    mat_map(lambda e: D * e.derivative(i) - e * D.derivative(i), A[j]),
                    mat_mul(A[j], A[i]),
                )
                if lhs != rhs:
                    return (i, j)
        return None

    # norms over the domain ------------------------------------------------------

    def shilov(self) -> list[GenericPoint]:
        return shilov_points(self.domain, self.p)

    def matrix_valuation(self, numerators: Matrix, order: int, xi: GenericPoint) -> LogValue:
        """``v(P / D^order)`` at ``xi``; the matrix norm is the largest entry norm."""
        D, _ = self.common_form()
        vd = gauss_valuation(D, xi, self.p)
        if vd == INF:
            raise DomainError(f"denominator vanishes at {xi}")
        best: LogValue = INF
        for row in numerators:
            for e in row:
                if e:
                    best = min(best, gauss_valuation(e, xi, self.p))
        if best == INF:
            return INF
        return best - order * vd

    def sup_norm_log(self, numerators: Matrix, order: int, points: Iterable[GenericPoint] | None = None) -> LogValue:
        """``log_p`` of the sup-norm over the domain, read off on its Shilov boundary."""
        pts = list(points) if points is not None else self.shilov()
        return max(-self.matrix_valuation(numerators, order, eta) for eta in pts)

    def G_sup_norm_log(self, i: int) -> LogValue:
        _, A = self.common_form()
        return self.sup_norm_log(A[i], 1)


def _as_poly(x) -> PSeries:
    return x if isinstance(x, PSeries) else PSeries.constant(x, 1)


# -- strata ------------------------------------------------------------------


@dataclass
class Strata:
    """Numerators ``P_alpha`` of ``G_alpha = P_alpha / D^|alpha|`` for ``|alpha| <= N``."""

    system: DiffSystem
    N: int
    numerators: dict

    @property
    def D(self) -> PSeries:
        return self.system.common_form()[0]

    def alphas(self, lo: int = 0, hi: int | None = None):
        hi = self.N if hi is None else min(hi, self.N)
        for n in range(lo, hi + 1):
            yield from multi_indices(self.system.d, n)

    def undivided(self, alpha) -> tuple[Matrix, int]:
        """``(P_alpha, |alpha|)``: numerators and the exponent of ``D``."""
        return self.numerators[tuple(alpha)], sum(alpha)

    def divided_at(self, alpha, point: Sequence) -> tuple:
        """``G_[alpha](point)`` as a matrix of rationals at a rational point."""
        alpha = tuple(alpha)
        P = self.numerators[alpha]
        dval = self.D.evaluate(point)
        if dval == 0:
            raise DomainError(f"denominator vanishes at {tuple(point)}")
        scale = 1 / (dval ** sum(alpha))
        for a in alpha:
            for k in range(2, a + 1):
                scale /= k
        return tuple(tuple(e.evaluate(point) * scale for e in row) for row in P)

    def valuation(self, alpha, xi: GenericPoint) -> LogValue:
        """``v(G_alpha(xi))`` for the undivided matrix."""
        P, n = self.undivided(alpha)
        return self.system.matrix_valuation(P, n, xi)

    def divided_valuation(self, alpha, xi: GenericPoint) -> LogValue:
        """``v(G_[alpha](xi)) = v(G_alpha(xi)) - v(alpha!)``."""
        v = self.valuation(alpha, xi)
        if v == INF:
            return INF
        return v - sum(vp_factorial(a, self.system.p) for a in alpha)


def _step(system: DiffSystem, P: Matrix, n: int, i: int) -> Matrix:
    D, A = system.common_form()
    dD = D.derivative(i)
    out = mat_map(lambda e: D * e.derivative(i) - (dD * e) * n if e else e, P)
    return mat_add(out, mat_mul(P, A[i]))


def stratum_along(system: DiffSystem, steps: Sequence[int]) -> Matrix:
    """Numerators of ``G_alpha`` built by applying the increments ``1_i`` in the given order."""
    P = identity(system.mu, system.d)
    for n, i in enumerate(steps):
        P = _step(system, P, n, i)
    return P


def iterate(system: DiffSystem, N: int) -> Strata:
    if N < 0:
        raise ValueError("truncation order must be >= 0")
    if system.d >= 2:
        bad = system.integrability_defect()
        if bad is not None:
            raise IntegrabilityError(*bad)
    numerators = {(0,) * system.d: identity(system.mu, system.d)}
    for n in range(1, N + 1):
        for alpha in multi_indices(system.d, n):
            i = next(k for k, a in enumerate(alpha) if a)
            prev = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
            numerators[alpha] = _step(system, numerators[prev], n - 1, i)
    log.debug("built %d strata up to order %d", len(numerators), N)
    return Strata(system, N, numerators)


# -- local solutions -----------------------------------------------------------


@dataclass(frozen=True)
class LocalSolution:
    """Truncated ``Y = sum G_[alpha](a) y^alpha`` in the local coordinate ``y = x - a``."""

    center: tuple
    N: int
    Y: Matrix


def fundamental_solution(system: DiffSystem, strata: Strata, point: Sequence, N: int | None = None) -> LocalSolution:
    N = strata.N if N is None else N
    if N > strata.N:
        raise ValueError("strata are not computed to the requested order")
    point = tuple(Fraction(x) for x in point)
    check_member(system.domain, GenericPoint.rational(point), system.p)
    entries = [[{} for _ in range(system.mu)] for _ in range(system.mu)]
    for alpha in strata.alphas(0, N):
        M = strata.divided_at(alpha, point)
        for r in range(system.mu):
            for c in range(system.mu):
                if M[r][c]:
                    entries[r][c][alpha] = M[r][c]
    Y = tuple(tuple(PSeries(system.d, e, N) for e in row) for row in entries)
    return LocalSolution(point, N, Y)


@dataclass(frozen=True)
class WronskianReport:
    ok: bool
    N: int
    failure: tuple | None = None  # (i, alpha)


def _trace_series(system: DiffSystem, i: int, center: tuple, n: int) -> PSeries:
    D, A = system.common_form()
    tr = A[i][0][0]
    for r in range(1, system.mu):
        tr = tr + A[i][r][r]
    num = taylor_shift(tr, center).truncate(n)
    den = taylor_shift(D, center)
    return num * series_inverse(den, n)


def wronskian_check(system: DiffSystem, sol: LocalSolution) -> WronskianReport:
    """Check ``d_i det Y = Tr(G_i) det Y`` coefficient by coefficient below total degree ``N``."""
    w = determinant(sol.Y)
    top = sol.N - 1
    for i in range(system.d):
        lhs = w.derivative(i).truncate(top)
        rhs = (_trace_series(system, i, sol.center, top) * w.truncate(top)).truncate(top)
        diff = lhs - rhs
        if diff.coeffs:
            alpha = min(diff.coeffs, key=lambda a: (sum(a), a))
            return WronskianReport(False, sol.N, (i, alpha))
    return WronskianReport(True, sol.N)


def solution_residual(system: DiffSystem, sol: LocalSolution) -> tuple | None:
    """First ``(i, r, c, alpha)`` where ``d_i Y - G_i Y`` has a nonzero coefficient below degree ``N``."""
    D, A = system.common_form()
    top = sol.N - 1
    inv = series_inverse(taylor_shift(D, sol.center), top)
    for i in range(system.d):
        Gi = mat_map(lambda e: (taylor_shift(e, sol.center).truncate(top) * inv), A[i])
        GY = mat_mul(Gi, mat_map(lambda e: e.truncate(top), sol.Y))
        for r in range(system.mu):
            for c in range(system.mu):
                diff = sol.Y[r][c].derivative(i).truncate(top) - GY[r][c]
                if diff.coeffs:
                    return (i, r, c, min(diff.coeffs, key=lambda a: (sum(a), a)))
    return None


# -- radius of convergence -------------------------------------------------------


@dataclass(frozen=True)
class RadiusEstimate:
    """Radius of convergence at a point, with the pieces it is made of.

    ``upper_window`` is the raw tail-window minimum of ``|G_[alpha]|^{-1/|alpha|}``.
    ``tilde`` estimates the liminf with the factorials taken out exactly:
    ``v(alpha!)/|alpha|`` tends to ``1/(p-1)``, so only the undivided strata
    are windowed.  ``R = min(tilde, delta)``.
    """

    upper_window: Radius
    tilde: Radius
    trivial_lower: Radius
    delta: Radius
    R: Radius
    stabilized: bool

    def as_row(self) -> dict:
        return {
            "log_R_window": fmt_log(self.upper_window.logp),
            "log_R_tilde": fmt_log(self.tilde.logp),
            "log_trivial": fmt_log(self.trivial_lower.logp),
            "log_delta": fmt_log(self.delta.logp),
            "log_R": fmt_log(self.R.logp),
            "stabilized": self.stabilized,
        }


def _per_order(strata: Strata, xi: GenericPoint, lo: int, hi: int, divided: bool) -> dict[int, LogValue]:
    """``min_{|alpha| = n} v(G_alpha(xi)) / n`` (or the divided version) for ``lo <= n <= hi``."""
    out = {}
    for n in range(max(lo, 1), hi + 1):
        best: LogValue = INF
        for alpha in multi_indices(strata.system.d, n):
            v = strata.divided_valuation(alpha, xi) if divided else strata.valuation(alpha, xi)
            best = min(best, v)
        out[n] = best if best == INF else best / n
    return out


def trivial_lower_bound(system: DiffSystem) -> Radius:
    """``|p|^{1/(p-1)} / max_i(|d/dx_i|_U, ||G_i||_U)``, uniform over the domain."""
    M: LogValue = -INF
    for i in range(system.d):
        M = max(M, derivation_norm_log(system.domain, i, system.p), system.G_sup_norm_log(i))
    return Radius(Fraction(-1, system.p - 1) - M)


def radius_estimate(system: DiffSystem, strata: Strata, xi: GenericPoint, window_start: int) -> RadiusEstimate:
    s0, N = window_start, strata.N
    if s0 < 1:
        raise ValueError("window must start at order >= 1")
    if N < 2 * s0:
        raise ValueError(f"strata to order {N} are too short for a window starting at {s0}")
    check_member(system.domain, xi, system.p)
    p = system.p
    raw = _per_order(strata, xi, s0, N, divided=True)
    undivided = _per_order(strata, xi, s0, N, divided=False)
    mid = (s0 + N) // 2
    first = min(undivided[n] for n in range(s0, mid + 1))
    second = min(undivided[n] for n in range(mid + 1, N + 1))
    window = min(first, second)
    tilde = Radius(window - Fraction(1, p - 1)) if window != INF else Radius(INF)
    delta = diameter(system.domain, xi, p).delta
    return RadiusEstimate(
        upper_window=Radius(min(raw.values())),
        tilde=tilde,
        trivial_lower=trivial_lower_bound(system),
        delta=delta,
        R=min(tilde, delta),
        stabilized=first <= second,
    )


def phi_sequence(system: DiffSystem, strata: Strata, xi: GenericPoint) -> list[Radius]:
    """``phi_s = min(delta, min_{s <= |alpha| <= N} |G_[alpha](xi)|^{-1/|alpha|})`` for ``s = 1..N``."""
    raw = _per_order(strata, xi, 1, strata.N, divided=True)
    delta = diameter(system.domain, xi, system.p).delta
    out = []
    tail: LogValue = INF
    for n in range(strata.N, 0, -1):
        tail = min(tail, raw[n])
        out.append(min(delta, Radius(tail)))
    return out[::-1]


def separated_phi_sequence(system: DiffSystem, strata: Strata, xi: GenericPoint) -> list[Radius]:
    """Like :func:`phi_sequence` with ``v(alpha!)/|alpha|`` replaced by its limit ``1/(p-1)``.

    For ``s <= s0`` these are lower bounds for ``R`` computed from the same strata.
    """
    und = _per_order(strata, xi, 1, strata.N, divided=False)
    delta = diameter(system.domain, xi, system.p).delta
    shift = Fraction(1, system.p - 1)
    out = []
    tail: LogValue = INF
    for n in range(strata.N, 0, -1):
        tail = min(tail, und[n])
        out.append(min(delta, Radius(tail - shift if tail != INF else INF)))
    return out[::-1]


@dataclass(frozen=True)
class UscReport:
    ok: bool
    violations: tuple = ()  # (point, s, reason)


def usc_audit(system: DiffSystem, strata: Strata, points: Sequence[GenericPoint], window_start: int) -> UscReport:
    """Sampled checks on the envelopes ``phi_s`` at every point.

    The raw envelope must not decrease in ``s``.  The factorial-separated one
    must stay below ``R`` and approach it monotonically for ``s <= s0``.
    """
    bad = []
    for xi in points:
        R = radius_estimate(system, strata, xi, window_start).R
        raw = phi_sequence(system, strata, xi)
        for s, (a, b) in enumerate(zip(raw, raw[1:]), start=2):
            if b < a:
                bad.append((xi, s, "phi decreased"))
        sep = separated_phi_sequence(system, strata, xi)[:window_start]
        for s, a in enumerate(sep, start=1):
            if a > R:
                bad.append((xi, s, "phi above R"))
        for s, (a, b) in enumerate(zip(sep, sep[1:]), start=2):
            if _gap(b, R) > _gap(a, R):
                bad.append((xi, s, "distance to R grew"))
    return UscReport(not bad, tuple(bad))


def _gap(a: Radius, b: Radius) -> LogValue:
    if a.logp == b.logp:
        return Fraction(0)
    return abs(a.logp - b.logp)


@dataclass(frozen=True)
class ProfileRow:
    rho: Fraction
    estimate: RadiusEstimate
    log_R: LogValue


def profile_row(system: DiffSystem, strata: Strata, center: Sequence, rho, window_start: int) -> ProfileRow:
    """``R(t_r) = min(r, R~(t_r), delta(t_r))`` along ``r -> t_{center, r}``."""
    rho = Fraction(rho)
    xi = GenericPoint.disk(tuple(center), rho)
    est = radius_estimate(system, strata, xi, window_start)
    return ProfileRow(rho, est, min(rho, est.tilde.logp, est.delta.logp))


def profile(system: DiffSystem, strata: Strata, center: Sequence, grid: Sequence, window_start: int) -> list[ProfileRow]:
    return [profile_row(system, strata, center, q, window_start) for q in sorted(Fraction(q) for q in grid)]


# -- inequality audits --------------------------------------------------------


@dataclass(frozen=True)
class DworkRobbaReport:
    ok: bool
    C_log: LogValue
    min_slack: LogValue
    worst_alpha: tuple | None
    violations: tuple = ()  # (alpha, lhs_log, rhs_log)


def dwork_robba_constant(system: DiffSystem, strata: Strata) -> LogValue:
    """``log_p C`` with ``C = max_{|beta| < mu} ||G_beta||_U``."""
    if strata.N < system.mu - 1:
        raise ValueError("strata too short for the growth constant")
    best: LogValue = -INF
    for beta in strata.alphas(0, system.mu - 1):
        P, n = strata.undivided(beta)
        best = max(best, system.sup_norm_log(P, n))
    return best


def dwork_robba_check(system: DiffSystem, strata: Strata, xi: GenericPoint, R: Radius, N: int | None = None) -> DworkRobbaReport:
    """Check ``|G_[alpha](xi)| <= C {|alpha|, mu-1}_p R^{-|alpha|}`` for ``|alpha| <= N``.

    ``alpha = 0`` only asks for ``C >= 1``; the reported slack is taken over ``alpha != 0``.

    Orders below ``mu - 1`` use ``{s, s}_p``, which keeps the bound valid
    because ``C`` already dominates ``|G_alpha|`` there.
    """
    N = strata.N if N is None else N
    if N > strata.N:
        raise ValueError("strata are not computed to the requested order")
    p = system.p
    C = dwork_robba_constant(system, strata)
    slack_min: LogValue = INF
    worst = None
    violations = []
    if C < 0:
        # |G_0| = 1 must be dominated by C
        violations.append(((0,) * system.d, Fraction(0), C))
    for alpha in strata.alphas(1, N):
        s = sum(alpha)
        lhs = -strata.divided_valuation(alpha, xi)
        rhs = C + curly_brace(s, min(s, system.mu - 1), p) - s * R.logp
        slack = rhs - lhs if lhs != -INF else INF
        if slack < slack_min:
            slack_min, worst = slack, alpha
        if slack < 0:
            violations.append((alpha, lhs, rhs))
    return DworkRobbaReport(not violations, C, slack_min, worst, tuple(violations))


@dataclass(frozen=True)
class TransferReport:
    ok: bool
    tilde: Radius
    bound: Radius
    at_shilov: tuple  # ((point, R), ...)


def transfer_bound(
    system: DiffSystem,
    strata: Strata,
    xi: GenericPoint,
    shilov: Sequence[GenericPoint] | None = None,
    window_start: int | None = None,
) -> TransferReport:
    """Check ``R~(xi) >= min_i R(eta_i)`` over the Shilov boundary."""
    s0 = window_start or max(1, strata.N // 2)
    pts = list(shilov) if shilov is not None else system.shilov()
    at = tuple((eta, radius_estimate(system, strata, eta, s0).R) for eta in pts)
    bound = min(r for _, r in at)
    tilde = radius_estimate(system, strata, xi, s0).tilde
    return TransferReport(tilde >= bound, tilde, bound, at)


@dataclass(frozen=True)
class ConcavityReport:
    ok: bool
    vacuous: bool
    values: tuple  # ((rho, log R~), ...)
    stabilized: tuple
    violations: tuple = ()  # (rho_left, rho_mid, rho_right)


def concavity_scan(
    system: DiffSystem,
    strata: Strata,
    rho_grid: Sequence,
    window_start: int,
    center=0,
) -> ConcavityReport:
    """Discrete concavity of ``rho -> log_p R~(t_{center, p^rho})`` over consecutive grid triples."""
    if system.d != 1:
        raise ValueError("concavity scans are for one-variable systems")
    grid = sorted(Fraction(q) for q in rho_grid)
    if len(grid) < 3:
        raise ValueError("grid too small: concavity needs at least three points")
    ests = [radius_estimate(system, strata, GenericPoint.disk((center,), q), window_start) for q in grid]
    vals = [e.tilde.logp for e in ests]
    if all(v == INF for v in vals):
        return ConcavityReport(True, True, tuple(zip(grid, vals)), tuple(e.stabilized for e in ests))
    violations = []
    for k in range(1, len(grid) - 1):
        a, b, c = grid[k - 1], grid[k], grid[k + 1]
        fa, fb, fc = vals[k - 1], vals[k], vals[k + 1]
        if fb == INF:
            continue
        if fa == INF or fc == INF:
            violations.append((a, b, c))
            continue
        chord = (fa * (c - b) + fc * (b - a)) / (c - a)
        if fb < chord:
            violations.append((a, b, c))
    return ConcavityReport(
        not violations, False, tuple(zip(grid, vals)), tuple(e.stabilized for e in ests), tuple(violations)
    )


# -- JSON -------------------------------------------------------------------------


def system_from_json(obj) -> DiffSystem:
    try:
        p, d, mu = int(obj["p"]), int(obj["d"]), int(obj["mu"])
        G = obj["G"]
        if d == 1 and G and G[0] and isinstance(G[0][0], dict):
            G = [G]  # a single matrix for one variable
        mats = []
        for m in G:
            mats.append(
                tuple(
                    tuple((PSeries.from_json(e["num"]), PSeries.from_json(e.get("den", _one_json(d)))) for e in row)
                    for row in m
                )
            )
        domain = LaurentSpec.from_json(obj.get("domain", {"vars": d}), d)
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise SchemaError(f"malformed system: {exc}") from exc
    try:
        return DiffSystem(p, d, mu, tuple(mats), domain)
    except DomainError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def system_to_json(system: DiffSystem) -> dict:
    return {
        "p": system.p,
        "d": system.d,
        "mu": system.mu,
        "G": [
            [[{"num": n.to_json(), "den": dn.to_json()} for n, dn in row] for row in mat] for mat in system.G
        ],
        "domain": system.domain.to_json(),
    }


def _one_json(d: int) -> dict:
    return {"vars": d, "terms": [{"exp": [0] * d, "num": "1", "den": "1"}]}


def valuation_of_rational(x, p: int) -> LogValue:
    return vp(x, p)
