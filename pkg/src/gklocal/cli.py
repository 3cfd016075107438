"""Command-line front end.

Exit codes:
  0 = success (for ``verify``: every case passed)
  1 = at least one verification case failed
  2 = usage error
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path
from typing import Sequence

from . import constants as C
from . import gk_complex as gc
from . import gk_real as gr
from . import quadrature, verify
from .scalars import PiScaled, to_decimal_string, to_float

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

REPORT_DIR_ENV = "GKLOCAL_REPORT_DIR"


class UsageError(Exception):
    pass


def _value_json(x: PiScaled) -> dict:
    return {"value": x.to_json(), "text": x.to_string(), "decimal": to_decimal_string(x)}


def _emit(obj: dict) -> None:
    sys.stdout.write(verify.canonical_json(obj))


def _even_weight(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if k < 2 or k % 2:
        raise argparse.ArgumentTypeError(f"weights must be even integers >= 2, got {k}")
    return k


# --- constant ------------------------------------------------------------------------------


def cmd_constant(args: argparse.Namespace) -> int:
    try:
        places = tuple(C.PlaceSpec.parse(p) for p in args.place)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    g = C.GlobalSpec(places)
    out = {
        "schema": verify.SCHEMA,
        "places": [p.to_string() for p in places],
        "c_global": _value_json(C.c_global(g)),
        "c_sigma": [{"place": p.to_string(), **_value_json(C.c_sigma(p))} for p in places],
        "nonvanishing": C.vanishing_predicate(g),
    }
    _emit(out)
    return EXIT_OK


# --- verify --------------------------------------------------------------------------------


def _report_path(args: argparse.Namespace) -> Path:
    if args.out:
        return Path(args.out)
    base = os.environ.get(REPORT_DIR_ENV)
    return Path(base) / "report.json" if base else Path("report.json")


def cmd_verify(args: argparse.Namespace) -> int:
    if args.max_k < 2 or args.max_k % 2:
        raise UsageError(f"--max-k must be an even integer >= 2, got {args.max_k}")
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    opts = verify.SuiteOptions(
        max_k=args.max_k, tol=args.tol, seed=args.seed, numeric_max_k=args.numeric_max_k
    )
    report = verify.run_suite(args.suite, opts, jobs=args.jobs)
    path = _report_path(args)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(verify.canonical_json(report), encoding="utf-8")
    s = report["summary"]
    print(f"{args.suite}: {s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped -> {path}")
    for case in report["cases"]:
        if case["status"] == "fail":
            print(f"  FAIL {case['id']}" + (f" ({case['detail']})" if case.get("detail") else ""))
    return EXIT_OK if s["fail"] == 0 else EXIT_FAIL


# --- integral ------------------------------------------------------------------------------


def cmd_integral(args: argparse.Namespace) -> int:
    cfg = quadrature.DEFAULT.with_(rtol=args.tol)
    try:
        if args.place == "real":
            if args.k is None:
                raise UsageError("the real integral needs --k")
            chi = gr.RealCharacter(args.chi_sign)
            inputs = {"k": args.k, "m": args.m, "parity": args.parity, "chi_sign": args.chi_sign}
            exact = gr.integral_real_closed(args.k, args.parity, chi, args.m)
            run = (lambda: gr.integral_real_numeric(args.k, args.parity, chi, args.m, cfg)) if args.numeric else None
        else:
            if args.kid is None or args.kc is None:
                raise UsageError("the complex integral needs --kid and --kc")
            kpair, m = (args.kid, args.kc), (args.mid, args.mc)
            chi = gc.ComplexCharacter(args.chi_mode)
            inputs = {"k": list(kpair), "m": list(m), "circle_mode": args.chi_mode}
            exact = gc.integral_complex_closed(kpair, chi, m)
            run = (lambda: gc.integral_complex_numeric(kpair, chi, m, cfg)) if args.numeric else None
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out: dict = {"schema": verify.SCHEMA, "place": args.place, "inputs": inputs, "closed": _value_json(exact)}
    code = EXIT_OK
    if run is not None:
        try:
            result = run()
        except quadrature.ConvergenceError as exc:
            out["numeric"] = {"error": str(exc), "passed": False}
            code = EXIT_FAIL
        else:
            value, ref = complex(result.value), complex(to_float(exact))
            err = float(abs(value - ref))
            passed = bool(err <= (args.tol * abs(ref) if ref != 0 else 1e-10))
            out["numeric"] = {
                "value": [value.real, value.imag],
                "abs_error": err,
                "rel_error": err / abs(ref) if ref != 0 else None,
                "window": [float(x) for x in result.halfwidth],
                "passed": passed,
            }
            code = EXIT_OK if passed else EXIT_FAIL
    _emit(out)
    return code


# --- table ---------------------------------------------------------------------------------


TABLE_COLUMNS = ("kind", "k", "m", "local_integral", "c_sigma", "c_sigma_decimal")


def _table_rows(kinds: Sequence[str], max_k: int) -> list[dict]:
    ks = range(2, max_k + 1, 2)
    rows = []
    for kind in sorted(kinds):
        if kind == "complex-split":
            for kpair in ((a, b) for a in ks for b in ks):
                for m in verify._m_pairs(kpair):
                    place = C.PlaceSpec(C.PlaceKind.COMPLEX_SPLIT, kpair, m, chi_matches=True)
                    integral = gc.integral_complex_closed(kpair, gc.ComplexCharacter(0), m)
                    rows.append(_row(kind, f"{kpair[0]},{kpair[1]}", f"{m[0]},{m[1]}", integral, C.c_sigma(place)))
        else:
            for k in ks:
                for m in range(-(k - 2) // 2, (k - 2) // 2 + 1):
                    if kind == "real-split":
                        place = C.PlaceSpec(C.PlaceKind.REAL_SPLIT, k, m, chi_matches=True)
                        integral = gr.integral_real_closed(k, 1, gr.RealCharacter(1), m)
                    else:
                        place = C.PlaceSpec(C.PlaceKind.NONSPLIT, k, m)
                        integral = None
                    rows.append(_row(kind, str(k), str(m), integral, C.c_sigma(place)))
    return rows


def _row(kind: str, k: str, m: str, integral: PiScaled | None, c: PiScaled) -> dict:
    return {
        "kind": kind,
        "k": k,
        "m": m,
        "local_integral": integral.to_string() if integral is not None else "",
        "c_sigma": c.to_string(),
        "c_sigma_decimal": to_decimal_string(c),
    }


def _render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=TABLE_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _render_markdown(rows: list[dict]) -> str:
    lines = ["| " + " | ".join(TABLE_COLUMNS) + " |", "|" + "---|" * len(TABLE_COLUMNS)]
    for r in rows:
        lines.append("| " + " | ".join(r[c] for c in TABLE_COLUMNS) + " |")
    return "\n".join(lines) + "\n"


def cmd_table(args: argparse.Namespace) -> int:
    if args.max_k < 2 or args.max_k % 2:
        raise UsageError(f"--max-k must be an even integer >= 2, got {args.max_k}")
    kinds = [k for k, on in (("real-split", args.real), ("complex-split", args.complex), ("nonsplit", args.nonsplit)) if on]
    if not kinds:
        kinds = ["real-split", "complex-split", "nonsplit"]
    rows = _table_rows(kinds, args.max_k)
    sys.stdout.write(_render_csv(rows) if args.format == "csv" else _render_markdown(rows))
    return EXIT_OK


# --- parser --------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gklocal", description="Archimedean local integrals and constants.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constant", help="per-place and global constants as exact JSON")
    p.add_argument(
        "--place", action="append", required=True,
        help="e.g. real-split:k=2,m=0,match | nonsplit:k=4,m=1 | complex-split:kid=4,kc=2,mid=1,mc=0,match",
    )
    p.set_defaults(func=cmd_constant)

    p = sub.add_parser("verify", help="run a verification suite and write a JSON report")
    p.add_argument("suite", choices=verify.SUITES)
    p.add_argument("--max-k", type=int, default=6)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", help=f"report path (default: ${REPORT_DIR_ENV}/report.json or ./report.json)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--numeric-max-k", type=int, default=6, help="largest weight given a quadrature check")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("integral", help="the local torus integral, closed form and optionally by quadrature")
    p.add_argument("place", choices=("real", "complex"))
    p.add_argument("--k", type=_even_weight)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--parity", type=int, choices=(1, -1), default=1, help="the sign lambda (real place)")
    p.add_argument("--chi-sign", type=int, choices=(1, -1), default=1, help="chi(-1) (real place)")
    p.add_argument("--kid", type=_even_weight)
    p.add_argument("--kc", type=_even_weight)
    p.add_argument("--mid", type=int, default=0)
    p.add_argument("--mc", type=int, default=0)
    p.add_argument("--chi-mode", type=int, default=0, help="circle mode of chi (complex place)")
    p.add_argument("--numeric", action="store_true")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_integral)

    p = sub.add_parser("table", help="constants over a weight grid")
    p.add_argument("--real", action="store_true")
    p.add_argument("--complex", action="store_true")
    p.add_argument("--nonsplit", action="store_true")
    p.add_argument("--max-k", type=int, default=6)
    p.add_argument("--format", choices=("csv", "markdown"), default="markdown")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gklocal {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
