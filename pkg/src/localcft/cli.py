"""Command-line interface.

Subcommands: census, check, structure, symbol, selftest.  Exit codes:
0 success, 1 usage error, 2 data error, 3 internal integrity error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .census import parse_database, resolve_input_path, run_census, write_report
from .curves import WeierstrassCurve
from .exceptions import DataError, IntegrityError
from .padic import KElem, LocalField, cyclotomic_field
from .structure import (
    check_conditions,
    class_group_finite_part,
    class_group_mod,
    class_group_prime_to_p,
)
from .symbols import hilbert_symbol

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTEGRITY = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parse_ainvs_arg(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 5:
        raise ValueError("expected a1,a2,a3,a4,a6")
    return tuple(int(t) for t in parts)


def _parse_element(text: str, K: LocalField) -> KElem:
    """Element syntax: '*'-separated factors, each `pi`, `zeta`, an
    integer, or a rational a/b, optionally with `^exponent`."""
    out = K.one()
    for factor in text.split("*"):
        factor = factor.strip()
        if "^" in factor:
            base_text, exp_text = factor.split("^", 1)
            exp = int(exp_text)
        else:
            base_text, exp = factor, 1
        base_text = base_text.strip()
        if base_text == "pi":
            base = K.pi()
        elif base_text == "zeta":
            base = K.zeta()
        elif "/" in base_text:
            base = K.from_rational(Fraction(base_text))
        else:
            base = K.from_int(int(base_text))
        out = out * base ** exp
    return out


def _cmd_census(args) -> int:
    path = resolve_input_path(args.input)
    records, parse_errors = parse_database(path, args.format)
    report = run_census(records, p=args.p, M=args.M,
                        conductor_bound=args.max_conductor,
                        inclusive=args.le_bound, jobs=args.jobs,
                        parse_errors=parse_errors)
    fmt = "csv" if args.out.endswith(".csv") else "json"
    write_report(report, args.out, fmt)
    s = report.stages
    print(f"census p={args.p} M={args.M}: total {s['total']} -> good {s['good']} "
          f"-> ordinary {s['ordinary']} -> red_tors {s['red_tors']} "
          f"-> full_tors {s['full_tors']}")
    print(f"report written to {args.out}")
    if report.errors:
        print(f"{len(report.errors)} record(s) quarantined", file=sys.stderr)
    return EXIT_OK


def _cmd_check(args) -> int:
    E = WeierstrassCurve.from_ainvs(_parse_ainvs_arg(args.ainvs))
    report = check_conditions(E, args.p, args.M, label=args.ainvs)
    row = report.to_row()
    row["hypotheses_met"] = report.hypotheses_met
    print(json.dumps(row, indent=1))
    return EXIT_OK


def _cmd_structure(args) -> int:
    E = WeierstrassCurve.from_ainvs(_parse_ainvs_arg(args.ainvs))
    report = check_conditions(E, args.p, args.M, label=args.ainvs)
    try:
        if args.prime_to_p is not None:
            group = class_group_prime_to_p(report, args.prime_to_p)
            tag = f"structure mod {args.prime_to_p}"
        elif args.mod is not None:
            group = class_group_mod(report, args.mod)
            tag = f"structure mod p^{args.mod}"
        else:
            group = class_group_finite_part(report)
            tag = "finite part"
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    print(json.dumps({"curve": args.ainvs, "what": tag,
                      "invariant_factors": group.to_list(),
                      "order": group.order}, indent=1))
    return EXIT_OK


def _cmd_symbol(args) -> int:
    K = cyclotomic_field(args.p, args.M)
    a = _parse_element(args.a, K)
    b = _parse_element(args.b, K)
    value = hilbert_symbol(a, b, K)
    print(json.dumps({"a": args.a, "b": args.b, "p": args.p, "M": args.M,
                      "vanishes": value == 0,
                      "value_mod_p": value,
                      "normalization": "zeta = 1 + pi"}, indent=1))
    return EXIT_OK


def _cmd_selftest(args) -> int:
    """A condensed run of the property suites; seconds, not minutes."""
    import random

    from .abgroup import AbGroup
    from .formal import FormalGroupLaw
    from .padic import KPoly, Qp, hensel_roots, pexp, plog, qp_int_value
    from .symbols import annihilator, subgroup_Ubar, subgroup_V, units_mod_p

    failures = []

    def check(name, ok):
        print(("ok  " if ok else "FAIL") + " " + name)
        if not ok:
            failures.append(name)

    Q3 = Qp(3)
    check("plog(4) = 21 mod 27", qp_int_value(plog(Q3.from_int(4)), 3) == 21)
    u = Q3.from_int(10)
    check("pexp(plog(u)) = u", (pexp(plog(u)) - u).is_zero())
    roots = hensel_roots(KPoly.from_ints(Q3, [-7, 0, 1]))
    check("sqrt(7) in Q_3 has 2 roots", len(roots) == 2)

    K = cyclotomic_field(3, 1)
    E = WeierstrassCurve(1, 0, 1, 4, -6)
    rep = check_conditions(E, 3, 1, label="14a1")
    check("14a1 satisfies all hypotheses", rep.hypotheses_met)
    check("14a1 finite part = Z/3 + Z/6",
          class_group_finite_part(rep) == AbGroup([3, 6]))

    fg = FormalGroupLaw(E, 8)
    check("formal group associativity", fg.check_associative())
    check("formal log linearizes", fg.check_log_linearizes())

    B = units_mod_p(K)
    check("dim K^x/3 = 4 over Q_3(zeta_3)", B.dim == 4)
    U, V = subgroup_Ubar(K), subgroup_V(K)
    check("annihilator duality", annihilator(U) == V and annihilator(V) == U)
    rng = random.Random(1)
    stein = True
    for _ in range(20):
        x = K.from_int(rng.randrange(1, 100)) + K.pi() * rng.randrange(100)
        if x.is_zero() or (1 - x).is_zero():
            continue
        stein = stein and hilbert_symbol(x, 1 - x, K) == 0 \
            and hilbert_symbol(x, -x, K) == 0
    check("Steinberg relations", stein)

    if failures:
        print(f"{len(failures)} failure(s)", file=sys.stderr)
        return EXIT_INTEGRITY
    print("selftest passed")
    return EXIT_OK


def build_parser() -> _Parser:
    top = _Parser(prog="localcft",
                  description="class groups of curves over p-adic fields")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    c = sub.add_parser("census", help="run the staged curve census")
    c.add_argument("--input", required=True, help="curve table path "
                   "(searched in CFT_DATA_DIR when not found locally)")
    c.add_argument("--format", default="cremona-allcurves",
                   choices=["cremona-allcurves", "csv"])
    c.add_argument("--p", type=int, default=3)
    c.add_argument("--M", type=int, default=1)
    c.add_argument("--max-conductor", type=int, default=1000)
    c.add_argument("--le-bound", action="store_true",
                   help="use <= instead of the default strict < bound")
    c.add_argument("--out", required=True)
    c.add_argument("--jobs", type=int, default=1)
    c.set_defaults(func=_cmd_census)

    k = sub.add_parser("check", help="hypothesis flags for one curve")
    k.add_argument("--ainvs", required=True, help="a1,a2,a3,a4,a6")
    k.add_argument("--p", type=int, required=True)
    k.add_argument("--M", type=int, default=1)
    k.set_defaults(func=_cmd_check)

    s = sub.add_parser("structure", help="finite class-group structure")
    s.add_argument("--ainvs", required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--M", type=int, default=1)
    s.add_argument("--mod", type=int, default=None,
                   help="report the p^n level instead of the finite part")
    s.add_argument("--prime-to-p", type=int, default=None,
                   help="report the mod-m level for m prime to p")
    s.set_defaults(func=_cmd_structure)

    y = sub.add_parser("symbol", help="mod-p Hilbert symbol on Q_p(mu_{p^M})")
    y.add_argument("--p", type=int, required=True)
    y.add_argument("--M", type=int, default=1)
    y.add_argument("--a", required=True, help="e.g. 7, pi, zeta^2*5, 2/3")
    y.add_argument("--b", required=True)
    y.set_defaults(func=_cmd_symbol)

    t = sub.add_parser("selftest", help="condensed property-suite run")
    t.set_defaults(func=_cmd_selftest)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except IntegrityError as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except (ValueError, OSError, ArithmeticError) as exc:
        # PrecisionError and ZeroDivisionError are ArithmeticErrors: bad
        # user input (like the zero element), not internal failures
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
