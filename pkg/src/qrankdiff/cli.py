"""Command-line interface: ``verify``, ``table`` and ``series``.

Exit status: 0 when everything selected passes, 1 on any mismatch or
evaluation failure, 2 on usage errors (bad flags, unknown ids, caps).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import registry
from .ranks import CapExceeded, DEFAULT_CAP, RANKS, count_table, tally_table

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


def format_coeff(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def report_dict(rep: registry.VerifyReport) -> dict:
    mm = None
    if rep.mismatch is not None:
        mm = {"exponent": rep.mismatch.exponent,
              "lhs": format_coeff(rep.mismatch.lhs),
              "rhs": format_coeff(rep.mismatch.rhs)}
    return {"id": rep.id, "order": rep.order, "pass": rep.passed, "mismatch": mm,
            "millis": rep.millis}


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonnegative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrankdiff", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check catalog identities coefficient by coefficient")
    sel = v.add_mutually_exclusive_group(required=True)
    sel.add_argument("--id", action="append", dest="ids", metavar="ID",
                     help="catalog id (repeatable)")
    sel.add_argument("--all", action="store_true", help="every catalog entry")
    sel.add_argument("--list", action="store_true", help="print catalog ids and exit")
    v.add_argument("--order", type=_positive, default=None,
                   help="compare below q^ORDER (default: per-entry)")
    v.add_argument("--jobs", type=_positive, default=1)
    v.add_argument("--format", choices=("json", "csv", "text"), default="text")

    t = sub.add_parser("table", help="rank residue counts by n")
    t.add_argument("--rank", choices=sorted(RANKS), default="m2")
    t.add_argument("--modulus", type=_positive, default=3)
    t.add_argument("--max-n", type=_nonnegative, default=10)
    t.add_argument("--source", choices=("enumeration", "tally"), default="enumeration")
    t.add_argument("--format", choices=("json", "csv", "text"), default="csv")

    s = sub.add_parser("series", help="print coefficients of a named series")
    s.add_argument("--name", required=True,
                   help="omega, R01(d), R12(d), R02(d), or a catalog id (suffix :rhs for the right side)")
    s.add_argument("--order", type=_positive, default=10)
    s.add_argument("--format", choices=("json", "csv", "text"), default="text")
    return parser


def cmd_verify(args, out, err) -> int:
    if args.list:
        for entry in registry.catalog():
            out.write(f"{entry.id}\t{entry.tier}\t{entry.default_order}\t{entry.anchor}\n")
        return EXIT_OK
    try:
        selected = registry.ids() if args.all else list(args.ids)
        reports = registry.verify_all(args.order, jobs=args.jobs, ids_=selected)
    except registry.UnknownId as exc:
        err.write(f"unknown id: {exc.args[0]}\n")
        return EXIT_USAGE
    if args.format == "json":
        for rep in reports:
            out.write(_dump(report_dict(rep)) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["id", "order", "pass", "exponent", "lhs", "rhs", "millis"])
        for rep in reports:
            d = report_dict(rep)
            mm = d["mismatch"] or {"exponent": "", "lhs": "", "rhs": ""}
            w.writerow([rep.id, rep.order, str(rep.passed).lower(), mm["exponent"], mm["lhs"],
                        mm["rhs"], rep.millis])
    else:
        for rep in reports:
            status = "PASS" if rep.passed else "FAIL"
            line = f"{status} {rep.id} order={rep.order} {rep.millis}ms"
            if rep.mismatch is not None:
                m = rep.mismatch
                line += (f" first mismatch at q^{m.exponent}: "
                         f"lhs={format_coeff(m.lhs)} rhs={format_coeff(m.rhs)}")
            out.write(line + "\n")
    for rep in reports:
        if rep.error:
            err.write(f"{rep.id}: {rep.error}\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_MISMATCH


def cmd_table(args, out, err) -> int:
    try:
        if args.source == "enumeration":
            table = count_table(args.rank, args.modulus, args.max_n, cap=DEFAULT_CAP)
        else:
            table = tally_table(args.rank, args.modulus, args.max_n)
    except CapExceeded as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    ell = args.modulus
    rows = [(n, table.row(n), table.total(n)) for n in range(args.max_n + 1)]
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n"] + [f"s{s}" for s in range(ell)] + ["total"])
        for n, row, total in rows:
            w.writerow([n, *row, total])
    elif args.format == "json":
        out.write(_dump({"rank": args.rank, "modulus": ell,
                         "rows": [{"n": n, "counts": row, "total": total}
                                  for n, row, total in rows]}) + "\n")
    else:
        width = max(len(str(total)) for _, _, total in rows) + 1
        head = ["n"] + [f"s{s}" for s in range(ell)] + ["total"]
        out.write(" ".join(h.rjust(width) for h in head) + "\n")
        for n, row, total in rows:
            out.write(" ".join(str(x).rjust(width) for x in [n, *row, total]) + "\n")
    return EXIT_OK


def cmd_series(args, out, err) -> int:
    try:
        expr = registry.named_series(args.name)
    except registry.UnknownId as exc:
        err.write(f"unknown series name: {exc.args[0]}\n")
        return EXIT_USAGE
    try:
        s = expr.series(args.order)
    except registry.EvaluationError as exc:
        err.write(f"{exc}\n")
        return EXIT_MISMATCH
    pairs = [(e, format_coeff(c)) for e, c in s.items()]
    if args.format == "json":
        out.write(_dump({"name": args.name, "order": args.order,
                         "terms": [{"exponent": e, "coefficient": c} for e, c in pairs]}) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["exponent", "coefficient"])
        w.writerows(pairs)
    else:
        for e, c in pairs:
            out.write(f"{e} {c}\n")
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "table": cmd_table, "series": cmd_series}


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    return COMMANDS[args.command](args, out, err)


def run(argv: list[str]) -> tuple[int, str, str]:
    """Run the CLI in-process and capture (status, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


if __name__ == "__main__":
    sys.exit(main())
