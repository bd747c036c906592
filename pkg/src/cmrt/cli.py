"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 data-file error,
4 internal consistency failure. Errors go to stderr prefixed ``error:``.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from cmrt import bounds, curves, fields, forms, rayclass
from cmrt.arith import fundamental_part, kronecker
from cmrt.errors import ConsistencyError, DataFileError, DomainError, PrecisionError

PROVENANCE = {
    "kronecker": ("Kronecker symbol", "(a/n), extended to even and non-positive n"),
    "classnum": ("class number", "number of reduced primitive forms (a,b,c) with b^2 - 4ac = d"),
    "order-classnum": (
        "order class number",
        "h(O_f) = h_K * f * prod_{p|f} (1 - (d_K/p)/p) / [O_K^x : O_f^x]",
    ),
    "rayclass": ("ray class group order", "h_m = h_K * [U:U_m]^-1 * N(m) * prod_{p|m} (1 - 1/N(p)), m = ell O_K"),
    "rayclass-oracle": ("residue ring enumeration", "#{x + y w mod ell : ell does not divide N(x + y w)}"),
    "j": ("j-invariant", "j = 1728 g2^3 / (g2^3 - 27 g3^2), g2 = -4a, g3 = -4b"),
    "cm": ("CM identification", "j compared with q-expansion values at class-number-one CM points"),
    "divisor": ("torsion degree divisor", "[F(E[l]):F] | 2(l-1)^2, 2(l^2-1), 2(l^2-l) for (d_K/l) = 1, -1, 0"),
    "necessary": ("necessary condition", "l-powered [F(E[l]):F(mu_l)] needs l <= (w_K/2)n + 1 or l | d_K"),
    "weber": ("Weber function", "(g2 g3/D) x, (g2^2/D) x^2 if j = 1728, (g3/D) x^3 if j = 0"),
    "bound": ("prime bound C(n)", "max(largest prime <= 3n+1, largest prime dividing |d_K| with h_K <= n)"),
    "rough": ("rough prime bound", "largest prime <= max |d_K| over h_K <= n"),
    "verify": ("class number recomputation", "every table row re-derived by form enumeration"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let "-3/8" through as a value rather than an unknown option
        self._negative_number_matcher = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")

    def error(self, message):
        raise UsageError(message)


_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer; decimals are refused to keep inputs exact."""
    if not _RATIONAL.match(text):
        raise argparse.ArgumentTypeError(f"expected an integer or p/q, got {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise argparse.ArgumentTypeError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


# -- subcommand handlers ---------------------------------------------------
# Each returns (inputs, result, text_lines, headline, provenance_keys).


def cmd_kronecker(args):
    value = kronecker(args.a, args.n)
    return {"a": args.a, "n": args.n}, {"kronecker": value}, [f"({args.a}/{args.n}) = {value}"], str(value), ["kronecker"]


def cmd_classnum(args):
    if args.scan is not None:
        rows = [(-d, h) for d, h in forms.fundamental_class_numbers(args.scan)]
        lines = ["d h"] + [f"{d} {h}" for d, h in rows]
        return (
            {"scan": args.scan},
            {"count": len(rows), "discriminants": [list(r) for r in rows]},
            lines,
            str(len(rows)),
            ["classnum"],
        )
    d = args.disc
    reduced = forms.enumerate_reduced_forms(d)
    h = len(reduced)
    d_K, f = fundamental_part(d)
    result = {
        "disc": d,
        "h": h,
        "fundamental": f == 1,
        "d_K": d_K,
        "conductor": f,
        "forms": [list(r) for r in reduced],
    }
    lines = [f"h({d}) = {h}", f"fundamental: {'yes' if f == 1 else f'no (d_K = {d_K}, f = {f})'}"]
    lines += [f"  ({a}, {b}, {c})" for a, b, c in reduced]
    return {"disc": d}, result, lines, str(h), ["classnum"]


def cmd_order_classnum(args):
    order = fields.make_order(args.dk, args.conductor)
    enumerated = forms.class_number(order.disc)
    if enumerated != order.h:
        raise ConsistencyError(f"formula gives {order.h}, enumeration gives {enumerated} for disc {order.disc}")
    result = {"d_K": args.dk, "f": args.conductor, "disc": order.disc, "h": order.h, "h_K": order.field.h_K,
              "w": order.w, "h_enumerated": enumerated}
    lines = [f"h(O_{args.conductor}) = {order.h}  (disc {order.disc}, h_K = {order.field.h_K})",
             f"enumeration check: {enumerated}"]
    return {"dk": args.dk, "conductor": args.conductor}, result, lines, str(order.h), ["order-classnum", "classnum"]


def cmd_rayclass(args):
    report = rayclass.ray_class_number(args.dk, args.ell)
    general = rayclass.general_formula(report.field, args.ell)
    result = report.as_dict()
    result["h_m_general"] = general
    lines = [
        f"d_K = {args.dk}, ell = {args.ell}",
        f"split type: {report.split_type.value}",
        f"h_K = {report.field.h_K}, w_K = {report.field.w_K}",
        f"[U:U_m] = {report.unit_index}",
        f"|(O_K/ell O_K)^x| = {report.residue_unit_order}",
        f"h_m = {report.h_m}",
    ]
    keys = ["rayclass"]
    if args.oracle:
        residues = rayclass.residue_unit_order_oracle(args.dk, args.ell)
        units = rayclass.unit_index_oracle(report.field, args.ell)
        agree = residues == report.residue_unit_order and units == report.unit_index and general == report.h_m
        result["oracle"] = {"residue_unit_order": residues, "unit_index": units, "agrees": agree}
        lines.append(f"oracle: |(O_K/ell O_K)^x| = {residues}, [U:U_m] = {units}, agrees = {agree}")
        if not agree:
            raise ConsistencyError(f"ray class oracle disagrees for d_K={args.dk}, ell={args.ell}")
        keys.append("rayclass-oracle")
    return {"dk": args.dk, "ell": args.ell, "oracle": args.oracle}, result, lines, str(report.h_m), keys


def cmd_curve(args):
    report = curves.inspect_curve(args.a, args.b, args.degree, args.ell)
    result = report.as_dict()
    cm = report.cm
    lines = [f"curve: {report.curve}", f"j = {report.j}"]
    if cm is None:
        lines.append("CM: none")
    else:
        lines.append(f"CM: d_K = {cm.d_K}, f = {cm.f} (order discriminant {cm.order_disc})")
        lines.append(f"h_K = {report.field.h_K}, w_K = {report.field.w_K}")
    if report.verdict is not None:
        lines.append(f"degree divisor: {report.degree_divisor}")
        lines.append(f"necessary condition: {str(report.verdict.possible).lower()} ({report.verdict.reason})")
    lines += [f"note: {n}" for n in report.notes]
    inputs = {"a": str(args.a), "b": str(args.b), "degree": args.degree, "ell": args.ell}
    keys = ["j", "cm"] + (["divisor", "necessary"] if report.verdict is not None else [])
    return inputs, result, lines, str(report.j), keys


def cmd_weber(args):
    curve = curves.WeierstrassCurve(args.a, args.b)
    value = curves.weber(curve, curves.CurvePoint(args.x, args.y))
    case = "j=0" if curve.g2 == 0 else "j=1728" if curve.g3 == 0 else "generic"
    inputs = {"a": str(args.a), "b": str(args.b), "x": str(args.x), "y": str(args.y)}
    result = {"weber": str(value), "case": case, "j": str(curve.j)}
    return inputs, result, [f"j = {curve.j} ({case})", f"weber = {value}"], str(value), ["weber"]


def _load_table(args):
    return bounds.load_table(args.data)


def cmd_bound(args):
    inputs = {"degree": args.degree, "rough": args.rough, "per_field_units": args.per_field_units}
    if args.rough:
        res = bounds.rough_bound(args.degree, bounds.load_maxtable(args.maxdata))
        keys = ["rough", "verify"]
    else:
        if args.degree > 7:
            raise DomainError(f"exact bounds need a complete table; degree {args.degree} > 7, use --rough")
        res = bounds.exact_bound(args.degree, _load_table(args), per_field_units=args.per_field_units)
        keys = ["bound", "verify"]
    w = res.witness
    if w.kind == "divides":
        why = f"{w.prime} divides |d_K| = {w.abs_d} (h_K = {w.h})"
    elif w.kind == "at_most":
        why = f"{w.prime} is the largest prime <= max |d_K| = {w.abs_d} (h_K = {w.h})"
    else:
        why = f"{w.prime} is the largest prime <= (w/2)n + 1"
    lines = [f"C({res.n}) = {res.c_n}  [{res.method}]", f"witness: {why}"]
    return inputs, res.as_dict(), lines, str(res.c_n), keys


def cmd_table(args):
    table = _load_table(args)
    results = bounds.bound_table(args.max_degree, table)
    groups: list[tuple[list[int], int]] = []
    for r in results:
        if groups and groups[-1][1] == r.c_n:
            groups[-1][0].append(r.n)
        else:
            groups.append(([r.n], r.c_n))
    values = [r.c_n for r in results]
    lines = ["n       C(n)"] + [f"{', '.join(map(str, ns)):<8}{c}" for ns, c in groups]
    lines.append(f"C(1..{args.max_degree}) = {', '.join(map(str, values))}")
    result = {
        "bounds": [r.as_dict() for r in results],
        "values": values,
        "groups": [{"n": ns, "C(n)": c} for ns, c in groups],
        "rows_verified": len(table.rows),
    }
    return {"max_degree": args.max_degree}, result, lines, " ".join(map(str, values)), ["bound", "verify"]


def cmd_verify_data(args):
    table = _load_table(args)
    report = bounds.verify_completeness(table, args.scan_limit)
    maxtable = bounds.load_maxtable(args.maxdata)
    result = {
        "table_rows_verified": len(table.rows),
        "completeness": report.as_dict(),
        "maxtable_rows_verified": len(maxtable.rows),
    }
    lines = [
        f"h <= {table.declared_complete_through} table: {len(table.rows)} rows, class numbers recomputed",
        f"completeness scan to {report.scan_limit}: {report.fields_found} fields with h <= "
        f"{report.complete_through} among {report.fields_scanned}, none missing",
        f"note: {report.note}",
        f"max-discriminant table: {len(maxtable.rows)} rows, class numbers recomputed",
    ]
    if args.max_scan_limit:
        found = bounds.verify_maxtable_scan(maxtable, args.max_scan_limit)
        confirmed = sum(1 for h, d in maxtable.rows if d <= args.max_scan_limit and found[h] == d)
        result["maxtable_scan"] = {"scan_limit": args.max_scan_limit, "maxima_confirmed": confirmed}
        lines.append(f"max-discriminant scan to {args.max_scan_limit}: {confirmed} maxima confirmed, no larger found")
    return (
        {"scan_limit": args.scan_limit, "max_scan_limit": args.max_scan_limit},
        result,
        lines,
        "ok",
        ["verify", "classnum"],
    )


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="print only the result")

    parser = _Parser(prog="cmrt", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("kronecker", parents=[common], help="Kronecker symbol (a/n)")
    p.add_argument("a", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_kronecker)

    p = sub.add_parser("classnum", parents=[common], help="class number of a negative discriminant")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--disc", type=int)
    g.add_argument("--scan", type=int, metavar="LIMIT", help="all fundamental -d with d <= LIMIT")
    p.set_defaults(func=cmd_classnum)

    p = sub.add_parser("order-classnum", parents=[common], help="class number of the order of conductor f")
    p.add_argument("--dk", type=int, required=True)
    p.add_argument("--conductor", type=int, required=True)
    p.set_defaults(func=cmd_order_classnum)

    p = sub.add_parser("rayclass", parents=[common], help="ray class group order for modulus ell O_K")
    p.add_argument("--dk", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--oracle", action="store_true", help="also run the enumeration oracles")
    p.set_defaults(func=cmd_rayclass)

    p = sub.add_parser("curve", parents=[common], help="inspect y^2 = x^3 + ax + b")
    p.add_argument("--a", type=rational, required=True)
    p.add_argument("--b", type=rational, required=True)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--ell", type=int)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("weber", parents=[common], help="Weber function at a rational point")
    for name in ("a", "b", "x", "y"):
        p.add_argument(f"--{name}", type=rational, required=True)
    p.set_defaults(func=cmd_weber)

    p = sub.add_parser("bound", parents=[common], help="prime bound C(n)")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--rough", action="store_true", help="use the max-discriminant table (n <= 100)")
    p.add_argument("--data", help="h,abs_d table (default: bundled)")
    p.add_argument("--maxdata", help="h,max_abs_d table (default: bundled)")
    p.add_argument("--per-field-units", action="store_true", help="use (w_K/2)n + 1 per field instead of 3n + 1")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("table", parents=[common], help="C(n) for n = 1..max-degree")
    p.add_argument("--max-degree", type=int, default=7)
    p.add_argument("--data", help="h,abs_d table (default: bundled)")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify-data", parents=[common], help="re-verify the bundled tables")
    p.add_argument("--scan-limit", type=int, default=10_000)
    p.add_argument("--max-scan-limit", type=int, default=0,
                   help="also confirm table maxima by scanning all |d| up to this bound")
    p.add_argument("--data")
    p.add_argument("--maxdata")
    p.set_defaults(func=cmd_verify_data)
    return parser


def emit(args, inputs, result, lines, headline, keys, out) -> None:
    if getattr(args, "json", False):
        doc = {
            "command": args.command,
            "inputs": inputs,
            "result": result,
            "provenance": [list(PROVENANCE[k]) for k in keys],
        }
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    elif getattr(args, "quiet", False):
        out.write(headline + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        payload = args.func(args)
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    except DomainError as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except DataFileError as exc:
        stderr.write(f"error: {exc}\n")
        return 3
    except (ConsistencyError, PrecisionError) as exc:
        stderr.write(f"error: internal: {exc}\n")
        return 4
    emit(args, *payload, out=stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
