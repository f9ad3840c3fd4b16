"""qbeta command line: verify linear forms, denominators, rates, bounds, Catalan.

Exit codes: 0 pass, 1 check failure, 2 usage error, 3 outside the symbolic
envelope (use --force to override).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import mpmath

from . import __version__
from .qseries import DEFAULT_PREC, to_decimal

REPORT_SCHEMA = "report_v1"
EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_ENVELOPE = 0, 1, 2, 3


class Report:
    def __init__(self, command: str, parameters: dict, prec: int):
        self.command = command
        self.parameters = parameters
        self.prec = prec
        self.checks: list[dict] = []
        self._t0 = time.perf_counter()

    def add(self, name: str, status, payload: dict | None = None) -> None:
        if isinstance(status, bool):
            status = "pass" if status else "fail"
        self.checks.append({"name": name, "status": status, "payload": payload or {}})

    def num(self, x) -> str:
        return to_decimal(x, self.prec)

    @property
    def failed(self) -> bool:
        return any(c["status"] == "fail" for c in self.checks)

    def to_json(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "artifact_version": __version__,
            "command": self.command,
            "parameters": self.parameters,
            "precision_bits": self.prec,
            "checks": self.checks,
            "wall_time_s": round(time.perf_counter() - self._t0, 3),
        }

    def emit(self, out=None) -> int:
        out = out or sys.stdout
        json.dump(self.to_json(), out, indent=2, sort_keys=True)
        out.write("\n")
        return EXIT_FAIL if self.failed else EXIT_PASS


# -- argument helpers -----------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _params(parser, args):
    from .linear_forms import FormParams

    try:
        return FormParams(args.n, args.A, args.r)
    except ValueError as exc:
        parser.error(str(exc))


def _envelope_guard(params, force: bool) -> int | None:
    if params.within_envelope() or force:
        return None
    from .linear_forms import SYMBOLIC_MAX_A, SYMBOLIC_MAX_N

    sys.stderr.write(
        f"qbeta: (n={params.n}, A={params.A}) lies outside the symbolic envelope "
        f"n <= {SYMBOLIC_MAX_N}, A <= {SYMBOLIC_MAX_A}; rerun with --force to try anyway\n"
    )
    return EXIT_ENVELOPE


def _bundle(params, args):
    from .cache import get_bundle, resolve_cache_dir

    return get_bundle(params, resolve_cache_dir(args.cache), force=args.force)


# -- commands -------------------------------------------------------------------


def cmd_verify_linear_form(parser, args) -> int:
    from .linear_forms import verify_identity

    params = _params(parser, args)
    q = args.q
    if not (0 < abs(q) < 1):
        parser.error("domain error: need 0 < |q| < 1")
    if (code := _envelope_guard(params, args.force)) is not None:
        return code
    rep = Report("verify-linear-form", {"n": params.n, "A": params.A, "r": params.r,
                                        "q": f"{q.numerator}/{q.denominator}"}, args.prec)
    _, bundle, hit = _bundle(params, args)
    res = verify_identity(params, bundle, q, args.prec)
    threshold = mpmath.ldexp(1, -args.prec // 2)
    rep.add("identity_residual", bool(res.value < threshold),
            {"residual": rep.num(res.value), "threshold": f"2^-{args.prec // 2}", "cache_hit": hit})
    return rep.emit()


def cmd_check_denominator(parser, args) -> int:
    from .denominators import check_csj_denominator, check_dn_integrality, conjecture_cell

    params = _params(parser, args)
    if (code := _envelope_guard(params, args.force)) is not None:
        return code
    rep = Report("check-denominator", {"n": params.n, "A": params.A, "r": params.r,
                                       "conjecture": args.conjecture}, args.prec)
    table, bundle, _ = _bundle(params, args)
    if args.conjecture:
        cell = conjecture_cell(bundle)
        rep.add("conjecture_Dn_tilde", "recorded", {**cell.to_json(), "all_integral": cell.integral})
        return rep.emit()
    integ = check_dn_integrality(bundle)
    rep.add("Dn_integrality", integ.passed, {
        "denominator": "Dn",
        "per_j": {str(j): m.to_json() for j, m in integ.per_j.items()},
        "gamma_used": str(integ.gamma_used),
        "gamma_default": str(integ.gamma_default),
    })
    cells = check_csj_denominator(table)
    bad = [f"{s},{j}" for (s, j), m in cells.items() if not m.member]
    rep.add("c_denominator", not bad, {"cells": len(cells), "failing": bad})
    return rep.emit()


def cmd_bounds(parser, args) -> int:
    from .asymptotics import asymptotic_constant, bounds_table, first_crossing

    if args.A_max < 3 or args.A_max % 2 == 0:
        parser.error("--A-max must be an odd integer >= 3")
    rep = Report("bounds", {"A_max": args.A_max, "kind": args.kind}, args.prec)
    table = bounds_table(args.kind, args.A_max, args.prec)
    crossing = first_crossing(table)
    rows = [{"A": b.A, "r": b.r, "value": rep.num(b.value),
             "value_over_sqrtA": rep.num(b.value / mpmath.sqrt(b.A))} for b in table]
    if args.table:
        for row in rows:
            sys.stderr.write(f"{row['A']:>6} {row['r']:>5} {row['value'][:12]} {row['value_over_sqrtA'][:12]}\n")
    expected = 21 if args.A_max >= 21 else None
    rep.add("first_crossing", crossing == expected,
            {"first_A_above_1": crossing, "expected": expected,
             "asymptotic_constant": rep.num(asymptotic_constant()), "rows": rows})
    return rep.emit()


_TARGETS_WITH_PARAMS = {"Sn", "Dn", "Phat"}


def cmd_asymptotics(parser, args) -> int:
    from . import asymptotics as asy

    which = args.which
    if which in _TARGETS_WITH_PARAMS:
        if args.A is None or args.r is None:
            parser.error(f"--which {which} needs --A and --r")
        try:
            from .linear_forms import FormParams

            FormParams(1, args.A, args.r)
        except ValueError as exc:
            parser.error(str(exc))
    elif args.A is not None or args.r is not None:
        parser.error(f"--A/--r do not apply to --which {which}")
    q = args.q
    if which != "mobius" and not (0 < q < 1):
        parser.error("domain error: need 0 < q < 1")
    defaults = {"Sn": 31, "dn": 400, "Delta": 400, "varphi": 300, "Dn": 401, "Phat": 101, "mobius": 10**6}
    n_max = args.n_max or defaults[which]
    params = {"which": which, "q": f"{q.numerator}/{q.denominator}", "n_max": n_max, "A": args.A, "r": args.r}
    rep = Report("asymptotics", params, args.prec)

    if which == "mobius":
        odd, even = asy.mobius_partial_sums(n_max)
        e_odd = abs(odd.value - 8 / mpmath.pi**2)
        e_even = abs(even.value + 2 / mpmath.pi**2)
        for name, hp, err in (("mobius_odd", odd, e_odd), ("mobius_even", even, e_even)):
            rep.add(name, bool(err < 1e-4), {"value": to_decimal(hp.value, hp.prec),
                                             "error": to_decimal(err, hp.prec), "precision_bits": hp.prec})
        return rep.emit()

    if which == "Sn":
        series = asy.rate_Sn(q, args.A, args.r, range(1, n_max + 1), args.prec)
        rep.add("rate_Sn", series.within(0.10), _series_payload(rep, series, 0.10))
    elif which in ("dn", "Delta", "varphi"):
        grid = sorted({max(1, n_max // 4), max(1, n_max // 2), n_max})
        series = asy.rate_denominator_pieces(q, grid)[which]
        rep.add(f"rate_{which}", series.within(0.03), _series_payload(rep, series, 0.03))
    elif which == "Dn":
        top = n_max if n_max % 2 else n_max - 1
        grid = sorted({max(1, (top // 4) | 1), max(1, (top // 2) | 1), top})
        series = asy.rate_Dn(args.A, args.r, q, grid)
        rep.add("rate_Dn", series.within(0.03), _series_payload(rep, series, 0.03))
    else:
        grid = list(range(1, n_max + 1, 2))
        series = asy.rate_phat(args.A, args.r, q, grid, args.prec)
        rep.add("rate_Phat_upper", series.respects_upper(0.05, n_min=25), _series_payload(rep, series, 0.05))
    if args.csv:
        Path(args.csv).write_text(series.to_csv())
    return rep.emit()


def _series_payload(rep: Report, series, tol: float) -> dict:
    def num(x):
        return to_decimal(x, series.prec)

    return {
        "kind": series.kind,
        "tolerance": tol,
        "precision_bits": series.prec,
        "limit": num(series.limit),
        "last_n": series.ns[-1],
        "last_value": num(series.values[-1]),
        "relative_deviation": num(series.relative_deviation()),
        "csv": series.to_csv(),
    }


def cmd_catalan(parser, args) -> int:
    from .catalan import (
        An_Bn,
        alpha_n,
        catalan_form,
        exact_value_at_one,
        extrapolated_limit,
        qlinear_residual,
        weighted_Bn,
    )

    n = args.n
    if n < 1 or n % 2 == 0:
        parser.error("n must be odd")
    prec = args.prec
    rep = Report("catalan", {"n": n}, prec)
    AB = An_Bn(n)
    alpha = alpha_n(n)
    threshold = mpmath.ldexp(1, -min(100, prec // 2))
    for x in (Fraction(1, 2), Fraction(1, 3)):
        res = qlinear_residual(n, x, prec, AB)
        rep.add(f"qlinear_residual_base_{x * x}", bool(res.value < threshold),
                {"residual": rep.num(res.value)})
    lim = extrapolated_limit(AB[0])
    alpha_f = mpmath.mpf(alpha.numerator) / alpha.denominator
    rel = abs(lim - alpha_f) / abs(alpha_f)
    rep.add("alpha_closed_form_vs_limit", bool(rel < 1e-3),
            {"alpha": f"{alpha.numerator}/{alpha.denominator}", "extrapolated_limit": rep.num(lim),
             "relative_error": rep.num(rel)})
    cf = catalan_form(n, prec)
    other = catalan_form(n, 128 if prec > 128 else 2 * prec)
    drift = abs(cf.beta_extracted - other.beta_extracted)
    rep.add("beta_extraction_stable", bool(drift < mpmath.ldexp(1, -100)),
            {"beta_extracted": rep.num(cf.beta_extracted), "drift": rep.num(drift)})
    wb = weighted_Bn(AB[1])
    blim = exact_value_at_one(wb)
    blim = mpmath.mpf(blim.numerator) / blim.denominator if blim is not None else extrapolated_limit(wb)
    rep.add("beta_vs_weighted_Bn_limit", bool(abs(blim - cf.beta_extracted) < 1e-3),
            {"limit": rep.num(blim)})
    return rep.emit()


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qbeta", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qbeta {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, cell=True):
        sp.add_argument("--prec", type=int, default=DEFAULT_PREC, help="working precision in bits")
        if cell:
            sp.add_argument("--n", type=int, required=True)
            sp.add_argument("--A", type=int, required=True)
            sp.add_argument("--r", type=int, required=True)
            sp.add_argument("--cache", help="bundle cache directory (QBETA_CACHE_DIR overrides)")
            sp.add_argument("--force", action="store_true", help="ignore the symbolic envelope")

    sp = sub.add_parser("verify-linear-form", help="check the linear-form identity numerically")
    common(sp)
    sp.add_argument("--q", type=_rational, required=True, help="square root of the base, as num/den")
    sp.set_defaults(func=cmd_verify_linear_form)

    sp = sub.add_parser("check-denominator", help="integrality of D_n * Phat (or D~_n with --conjecture)")
    common(sp)
    sp.add_argument("--conjecture", action="store_true")
    sp.set_defaults(func=cmd_check_denominator)

    sp = sub.add_parser("bounds", help="tables of f(A) or g(A)")
    common(sp, cell=False)
    sp.add_argument("--A-max", dest="A_max", type=int, default=99)
    sp.add_argument("--kind", choices=("f", "g"), default="f")
    sp.add_argument("--table", action="store_true", help="also print the table to stderr")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("asymptotics", help="growth-rate series")
    common(sp, cell=False)
    sp.add_argument("--which", required=True, choices=("Sn", "dn", "Delta", "varphi", "Dn", "Phat", "mobius"))
    sp.add_argument("--q", type=_rational, default=Fraction(1, 2))
    sp.add_argument("--n-max", dest="n_max", type=int)
    sp.add_argument("--A", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--csv", help="write the rate series to this CSV file")
    sp.set_defaults(func=cmd_asymptotics)

    sp = sub.add_parser("catalan", help="the Catalan-constant specialization")
    common(sp, cell=False)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_catalan)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.prec < 64:
        parser.error("--prec must be at least 64")
    return args.func(parser, args)


if __name__ == "__main__":
    sys.exit(main())
