"""Command line front end.

Every number is printed as an exact rational in lowest terms (``inf`` and
``-inf`` included), rows come out in a fixed order and JSON keys are sorted,
so identical inputs give byte-identical output.  Negative values need the
``--flag=value`` form, e.g. ``--grid=-3:0:4``.

Exit codes: 0 ok, 1 audit violation, 2 malformed input, 3 domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import product
from pathlib import Path

from . import __version__, diffsys
from .arith import INF, approx_power, check_prime, fmt_log, parse_log
from .domains import LaurentSpec, UnsupportedDomain, check_member, diameter, parse_grid
from .errors import DomainError, IntegrabilityError, SchemaError
from .polygon import v_of
from .schemas import AUDIT_REPORT, DOMAIN, POLY, SYSTEM, TABLE_REPORT, validate
from .series import GenericPoint, PSeries, parse_vector

log = logging.getLogger("padic_radius")

AUDITS = ("wronskian", "dwork-robba", "transfer", "concavity", "usc")


# -- input -------------------------------------------------------------------


def _load_json(path: str, schema: dict, what: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read {what} file {path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    validate(obj, schema, f"{what} {path}")
    return obj


def load_system(path: str) -> diffsys.DiffSystem:
    return diffsys.system_from_json(_load_json(path, SYSTEM, "system"))


def load_domain(path: str | None, d: int | None = None) -> LaurentSpec:
    if path is None:
        return LaurentSpec.polydisk(d or 1)
    return LaurentSpec.from_json(_load_json(path, DOMAIN, "domain"), d)


def load_poly(path: str) -> PSeries:
    return PSeries.from_json(_load_json(path, POLY, "polynomial"))


def _prime(value: str) -> int:
    try:
        return check_prime(int(value))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _center(args, d: int) -> tuple:
    if args.center is None:
        return (Fraction(0),) * d
    try:
        c = parse_vector(args.center)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad center {args.center!r}") from exc
    if len(c) != d:
        raise SchemaError(f"center has {len(c)} coordinates, expected {d}")
    return c


def _radius_log(args, d: int) -> tuple:
    text = args.radius_log if args.radius_log is not None else "0"
    try:
        q = tuple(parse_log(t) for t in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad radius {text!r}") from exc
    if len(q) == 1:
        q = q * d
    if len(q) != d:
        raise SchemaError(f"radius has {len(q)} coordinates, expected {d}")
    if any(x > 0 for x in q):
        raise DomainError("generic points need log radii <= 0")
    return q


def _point(args, d: int) -> GenericPoint:
    return GenericPoint(_center(args, d), _radius_log(args, d))


def _grid(args, required: bool = False) -> list[Fraction] | None:
    if args.grid is None:
        if required:
            raise SchemaError("this command needs --grid q1:q2:m")
        return None
    grid = parse_grid(args.grid)
    return grid


def _segment(args, d: int) -> list[Fraction]:
    grid = _grid(args, required=True)
    if len(grid) < 2:
        raise SchemaError("a profile segment needs m >= 2 samples")
    if grid[0] > grid[-1] or grid[-1] > 0:
        raise SchemaError("a segment needs q1 <= q2 <= 0")
    return grid


def _trunc_and_window(args) -> tuple[int, int]:
    N = args.trunc
    s0 = args.window if args.window is not None else max(1, N // 2)
    if N < 2 * s0:
        raise SchemaError(f"--trunc {N} must be at least twice --window {s0}")
    return N, s0


# -- output ------------------------------------------------------------------


def _vec(values) -> str:
    return ",".join(fmt_log(v) for v in values)


def _alpha(alpha) -> str:
    return ",".join(str(a) for a in alpha)


def _cell(value):
    if isinstance(value, bool) or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    return fmt_log(value)


def emit_table(command: str, columns: list[str], rows: list[dict], fmt: str, out) -> None:
    rows = [{k: _cell(r[k]) for k in columns} for r in rows]
    if fmt == "json":
        report = {"command": command, "columns": columns, "rows": rows}
        validate(report, TABLE_REPORT, "report")
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
        return
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: str(v).lower() if isinstance(v, bool) else v for k, v in r.items()})
    out.write(buf.getvalue())


def _approx(row: dict, key: str, p: int, digits: int | None) -> None:
    if digits:
        row[f"approx_{key}"] = approx_power(p, row[key], digits)


# -- subcommands -------------------------------------------------------------


def cmd_iterate(args, out) -> int:
    system = load_system(args.system)
    strata = diffsys.iterate(system, args.trunc)
    xi = _point(args, system.d)
    check_member(system.domain, xi, system.p)
    rows = []
    for alpha in strata.alphas(0, args.trunc):
        v = strata.divided_valuation(alpha, xi)
        n = sum(alpha)
        rows.append({
            "order": n,
            "alpha": _alpha(alpha),
            "log_norm": -v,
            "log_root": v / n if n and v != INF else INF,
            "zero": v == INF,
        })
    emit_table("iterate", ["order", "alpha", "log_norm", "log_root", "zero"], rows, args.format, out)
    return 0


def _estimate_row(est: diffsys.RadiusEstimate) -> dict:
    return {
        "log_R_window": est.upper_window.logp,
        "log_R_tilde": est.tilde.logp,
        "log_trivial": est.trivial_lower.logp,
        "log_delta": est.delta.logp,
        "log_R": est.R.logp,
        "stabilized": est.stabilized,
    }


_ESTIMATE_COLUMNS = ["log_R_window", "log_R_tilde", "log_trivial", "log_delta", "log_R", "stabilized"]


def cmd_radius(args, out) -> int:
    system = load_system(args.system)
    N, s0 = _trunc_and_window(args)
    xi = _point(args, system.d)
    strata = diffsys.iterate(system, N)
    row = {"center": _vec(xi.center), "radius_log": _vec(xi.radius_log)}
    row.update(_estimate_row(diffsys.radius_estimate(system, strata, xi, s0)))
    columns = ["center", "radius_log"] + _ESTIMATE_COLUMNS
    if args.approx:
        _approx(row, "log_R", system.p, args.approx)
        columns.append("approx_log_R")
    emit_table("radius", columns, [row], args.format, out)
    return 0


_WORKER: dict = {}


def _init_worker(system, strata):
    _WORKER["system"], _WORKER["strata"] = system, strata


def _profile_task(task):
    center, rho, s0 = task
    return diffsys.profile_row(_WORKER["system"], _WORKER["strata"], center, rho, s0)


def cmd_profile(args, out) -> int:
    system = load_system(args.system)
    N, s0 = _trunc_and_window(args)
    center = _center(args, system.d)
    grid = _segment(args, system.d)
    for q in grid:
        check_member(system.domain, GenericPoint.disk(center, q), system.p)
    strata = diffsys.iterate(system, N)
    tasks = [(center, q, s0) for q in grid]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs, initializer=_init_worker, initargs=(system, strata)) as pool:
            results = list(pool.map(_profile_task, tasks))
    else:
        results = [diffsys.profile_row(system, strata, center, q, s0) for q in grid]
    rows = []
    for res in results:
        row = {"rho": res.rho, **_estimate_row(res.estimate), "log_R": res.log_R}
        _approx(row, "log_R", system.p, args.approx)
        rows.append(row)
    columns = ["rho", "log_R_window", "log_R_tilde", "log_delta", "log_R", "stabilized"]
    if args.approx:
        columns.append("approx_log_R")
    emit_table("profile", columns, rows, args.format, out)
    return 0


def cmd_diameter(args, out) -> int:
    if args.system:
        system = load_system(args.system)
        spec, p = system.domain, system.p
    else:
        if args.prime is None:
            raise SchemaError("diameter needs --prime (or a --system file)")
        p = args.prime
        spec = load_domain(args.domain)
    center = _center(args, spec.d)
    grid = _grid(args)
    points = [GenericPoint.disk(center, q) for q in grid] if grid else [GenericPoint(center, _radius_log(args, spec.d))]
    rows = []
    for xi in points:
        check_member(spec, xi, p)
        rep = diameter(spec, xi, p)
        kind, index, alpha = rep.witness or ("none", -1, ())
        row = {
            "center": _vec(xi.center),
            "radius_log": _vec(xi.radius_log),
            "log_delta": rep.delta.logp,
            "witness": kind,
            "constraint": index,
            "alpha": _alpha(alpha),
            "truncation_bound": rep.truncation_bound,
        }
        _approx(row, "log_delta", p, args.approx)
        rows.append(row)
    columns = ["center", "radius_log", "log_delta", "witness", "constraint", "alpha", "truncation_bound"]
    if args.approx:
        columns.append("approx_log_delta")
    emit_table("diameter", columns, rows, args.format, out)
    return 0


def cmd_polygon(args, out) -> int:
    if args.prime is None:
        raise SchemaError("polygon needs --prime")
    f = load_poly(args.poly)
    if f.is_zero():
        raise SchemaError("the zero polynomial has no valuation polygon")
    if args.mu:
        mus = []
        for text in args.mu:
            try:
                mus.append(parse_vector(text))
            except (ValueError, ZeroDivisionError) as exc:
                raise SchemaError(f"bad mu {text!r}") from exc
    else:
        grid = _grid(args, required=True)
        mus = list(product(grid, repeat=f.d))
    rows = []
    for mu in mus:
        if len(mu) != f.d:
            raise SchemaError(f"mu {_vec(mu)} does not have {f.d} coordinates")
        res = v_of(f, mu, args.prime)
        rows.append({
            "mu": _vec(mu),
            "v": res.value,
            "regular": res.regular,
            "minimizers": len(res.minimizers),
        })
    emit_table("polygon", ["mu", "v", "regular", "minimizers"], rows, args.format, out)
    return 0


def _point_json(xi: GenericPoint) -> dict:
    return {"center": _vec(xi.center), "radius_log": _vec(xi.radius_log)}


def cmd_audit(args, out) -> int:
    system = load_system(args.system)
    selected = [a.strip() for a in args.audits.split(",") if a.strip()]
    if not selected:
        raise SchemaError("select at least one audit")
    unknown = sorted(set(selected) - set(AUDITS))
    if unknown:
        raise SchemaError(f"unknown audits {unknown}; choose from {list(AUDITS)}")
    N, s0 = _trunc_and_window(args)
    grid = _grid(args)
    center = _center(args, system.d)
    if "concavity" in selected:
        if system.d != 1:
            raise SchemaError("concavity audits need a one-variable system")
        if grid is None or len(grid) < 3:
            raise SchemaError("grid too small: the concavity audit needs at least 3 points")
    if grid is not None:
        points = [GenericPoint.disk(center, q) for q in grid]
    else:
        points = [_point(args, system.d)]
    for xi in points:
        check_member(system.domain, xi, system.p)
    strata = diffsys.iterate(system, N)
    audits = {}

    if "wronskian" in selected:
        sol = diffsys.fundamental_solution(system, strata, center, N)
        rep = diffsys.wronskian_check(system, sol)
        viol = [] if rep.ok else [{"variable": rep.failure[0], "alpha": _alpha(rep.failure[1])}]
        audits["wronskian"] = {"pass": rep.ok, "center": _vec(center), "order": N, "violations": viol}

    if "dwork-robba" in selected:
        rows, viol = [], []
        for xi in points:
            if args.log_R is not None:
                R = diffsys.Radius(parse_log(args.log_R))
            else:
                R = diffsys.radius_estimate(system, strata, xi, s0).R
            rep = diffsys.dwork_robba_check(system, strata, xi, R, N)
            rows.append({
                **_point_json(xi),
                "log_R": fmt_log(R.logp),
                "log_C": fmt_log(rep.C_log),
                "min_slack": fmt_log(rep.min_slack),
                "worst_alpha": _alpha(rep.worst_alpha) if rep.worst_alpha else "",
            })
            for alpha, lhs, rhs in rep.violations:
                viol.append({**_point_json(xi), "alpha": _alpha(alpha), "log_lhs": fmt_log(lhs), "log_rhs": fmt_log(rhs)})
        audits["dwork-robba"] = {"pass": not viol, "points": rows, "violations": viol}

    if "transfer" in selected:
        rows, viol = [], []
        for xi in points:
            rep = diffsys.transfer_bound(system, strata, xi, window_start=s0)
            row = {**_point_json(xi), "log_R_tilde": fmt_log(rep.tilde.logp), "log_bound": fmt_log(rep.bound.logp)}
            rows.append(row)
            if not rep.ok:
                viol.append(row)
        audits["transfer"] = {"pass": not viol, "points": rows, "violations": viol}

    if "concavity" in selected:
        rep = diffsys.concavity_scan(system, strata, grid, s0, center[0])
        audits["concavity"] = {
            "pass": rep.ok,
            "vacuous": rep.vacuous,
            "values": [
                {"rho": fmt_log(q), "log_R_tilde": fmt_log(v), "stabilized": st}
                for (q, v), st in zip(rep.values, rep.stabilized)
            ],
            "violations": [{"triple": _vec(t)} for t in rep.violations],
        }

    if "usc" in selected:
        rep = diffsys.usc_audit(system, strata, points, s0)
        audits["usc"] = {
            "pass": rep.ok,
            "violations": [{**_point_json(xi), "s": s, "reason": why} for xi, s, why in rep.violations],
        }

    ok = all(a["pass"] for a in audits.values())
    report = {"command": "audit", "pass": ok, "audits": audits}
    validate(report, AUDIT_REPORT, "report")
    if args.format == "json":
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        rows = [
            {"audit": name, "pass": a["pass"], "violations": len(a["violations"])}
            for name, a in sorted(audits.items())
        ]
        emit_table("audit", ["audit", "pass", "violations"], rows, "csv", out)
    return 0 if ok else 1


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padic-radius", description="Radii of convergence of p-adic differential systems.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, system=True):
        if system:
            p.add_argument("--system", required=True, help="system JSON file")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--center", help="comma separated rational center (default 0)")

    def strata(p, window=True):
        p.add_argument("--trunc", type=int, default=64, help="truncation order N")
        if window:
            p.add_argument("--window", type=int, help="window start s0 (default N//2)")

    p = sub.add_parser("iterate", help="norms of the divided strata at a point")
    common(p)
    strata(p, window=False)
    p.add_argument("--radius-log", help="log_p of the radius (default 0)")
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("radius", help="radius of convergence at one point")
    common(p)
    strata(p)
    p.add_argument("--radius-log", help="log_p of the radius (default 0, -inf for a rational point)")
    p.add_argument("--approx", type=int, metavar="DIGITS")
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("profile", help="radius along r -> t_{a,r}")
    common(p)
    strata(p)
    p.add_argument("--grid", required=True, help="q1:q2:m log-radius samples")
    p.add_argument("--approx", type=int, metavar="DIGITS")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("diameter", help="diameter of a domain at points")
    common(p, system=False)
    p.add_argument("--system", help="take domain and prime from a system file")
    p.add_argument("--domain", help="domain JSON file (default: unit polydisk)")
    p.add_argument("--prime", type=_prime)
    p.add_argument("--grid", help="q1:q2:m log-radius samples")
    p.add_argument("--radius-log")
    p.add_argument("--approx", type=int, metavar="DIGITS")
    p.set_defaults(func=cmd_diameter)

    p = sub.add_parser("polygon", help="valuation polygon of a polynomial")
    p.add_argument("--poly", required=True, help="polynomial JSON file")
    p.add_argument("--prime", type=_prime)
    p.add_argument("--grid", help="q1:q2:m values of each mu_i")
    p.add_argument("--mu", action="append", help="explicit comma separated mu (repeatable)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_polygon)

    p = sub.add_parser("audit", help="check the radius inequalities")
    common(p)
    strata(p)
    p.add_argument("--audits", required=True, help=f"comma separated subset of {','.join(AUDITS)}")
    p.add_argument("--grid", help="q1:q2:m log radii of the audited points")
    p.add_argument("--radius-log")
    p.add_argument("--log-R", dest="log_R", help="claimed log_p R for the growth audit (default: estimate)")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    # PADIC_RADIUS_SEED is reserved: nothing here is random
    try:
        return args.func(args, sys.stdout)
    except (SchemaError, IntegrabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, UnsupportedDomain) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
