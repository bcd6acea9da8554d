"""Command-line front door.

Every subcommand emits machine-readable JSON (numbers that can be large
arrive as decimal strings), a flat text rendering, or CSV where a table
makes sense.  Exit codes: 0 success, 1 hypothesis-violation verdict
under --strict (or a domain error), 2 usage error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .bounds import kummer_explore, kummer_sweep, sweep, verify_bound
from .charsum import AdditiveCharacter, MultiplicativeCharacter, count_points, gauss_sum
from .classify import classify_monodromy
from .errors import BudgetExceeded, WeillabError
from .ff import Field, Fq, MPoly, Poly
from .lfunction import lfunction_pipeline

_COEFF_TOKEN = re.compile(r"\[[^\]]*\]|[^,]+")


def _parse_field(args) -> Field:
    modulus = None
    if getattr(args, "modulus", None):
        modulus = [int(t) for t in args.modulus.split(",")]
    return Field(args.p, args.e, modulus)


def _parse_poly(field: Field, text: str) -> Poly:
    coeffs = []
    for tok in _COEFF_TOKEN.findall(text):
        tok = tok.strip()
        if tok.startswith("["):
            coords = [int(t) for t in tok[1:-1].split(",") if t.strip()]
            if len(coords) != field.e:
                raise ValueError(
                    f"coordinate vector {tok} needs {field.e} entries"
                )
            coeffs.append(Fq(field, tuple(c % field.p for c in coords)))
        else:
            coeffs.append(field.element(int(tok) % field.p))
    return Poly(field, coeffs)


def _parse_mpoly(field: Field, n: int, text: str) -> MPoly:
    # terms as "e1,..,en:c" joined by ";", e.g. "2,0:1;0,2:1" for x^2+y^2
    terms = {}
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        expo, _, coeff = item.partition(":")
        key = tuple(int(t) for t in expo.split(","))
        if len(key) != n:
            raise ValueError(f"exponent vector {expo!r} needs {n} entries")
        terms[key] = int(coeff) % field.p
    return MPoly.from_ints(field, n, terms)


def _emit(args, payload: dict) -> None:
    if args.format == "text":
        lines = []

        def walk(prefix, obj):
            if isinstance(obj, dict):
                for k in sorted(obj):
                    walk(f"{prefix}{k}.", obj[k])
            elif isinstance(obj, list):
                lines.append(f"{prefix[:-1]}: {obj}")
            else:
                lines.append(f"{prefix[:-1]}: {obj}")

        walk("", payload)
        text = "\n".join(lines)
    else:
        text = json.dumps(payload, indent=2, sort_keys=True)
    print(text)
    if getattr(args, "out", None):
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, f"{args.subcommand}.json")
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _cmd_field_info(args) -> int:
    field = _parse_field(args)
    payload = {
        "p": field.p,
        "e": field.e,
        "q": field.size,
        "modulus": list(field.modulus),
        "unitGroupOrder": str(field.size - 1),
    }
    _emit(args, payload)
    return 0


def _cmd_count(args) -> int:
    field = _parse_field(args)
    methods = (
        ["charsum", "traceKernel", "naive"] if args.method == "all" else [args.method]
    )
    if args.n > 1:
        f = _parse_mpoly(field, args.n, args.poly)
    else:
        f = _parse_poly(field, args.poly)
    counts = {}
    for method in methods:
        res = count_points(f, args.r, method=method, shift=args.shift)
        counts[method] = str(res.N)
    if len(set(counts.values())) != 1:
        raise WeillabError(f"count methods disagree: {counts}")
    payload = {
        "q": field.size,
        "r": args.r,
        "n": args.n,
        "N": next(iter(counts.values())),
        "counts": counts,
    }
    _emit(args, payload)
    return 0


def _cmd_classify(args) -> int:
    field = _parse_field(args)
    f = _parse_poly(field, args.poly)
    report = classify_monodromy(f, args.r)
    _emit(args, report.to_json())
    if args.strict and report.applicable_bound == "weilOnly":
        return 1
    return 0


def _cmd_verify(args) -> int:
    field = _parse_field(args)
    f = _parse_poly(field, args.poly)
    report = verify_bound(f, args.r)
    _emit(args, report.to_json())
    if args.strict and (
        report.applicable == "weilOnly"
        or not report.holds_required
        or not report.weil_holds
    ):
        return 1
    return 0


def _cmd_lfunction(args) -> int:
    field = _parse_field(args)
    f = _parse_poly(field, args.poly)
    data = lfunction_pipeline(
        f, args.r, M=args.depth, threads=args.threads, shift=args.shift
    )
    _emit(args, data.to_json())
    if args.strict and (data.notes or data.pure is False):
        return 1
    return 0


def _cmd_sweep(args) -> int:
    qs = [int(t) for t in args.q.split(",")]
    ds = [int(t) for t in args.d.split(",")]
    rs = [int(t) for t in args.r.split(",")]
    report = sweep(
        qs,
        ds,
        rs,
        family=args.family,
        sample=args.sample,
        seed=args.seed,
        out_dir=args.out,
        threads=args.threads,
    )
    if args.format == "csv":
        print("q,d,r,n,f_coeffs,class,N_r,main_term,deviation,bound,holds")
        for row in report["rows"]:
            fstr = ":".join(
                str(c) if isinstance(c, int) else "[" + ".".join(map(str, c)) + "]"
                for c in row["f"]
            )
            print(
                f'{row["q"]},{row["d"]},{row["r"]},{row["n"]},{fstr},'
                f'{row["class"]},{row["N"]},{row["main"]},{row["deviation"]},'
                f'{row["bound"]},{row["holds"]}'
            )
    else:
        _emit(args, report)
    if args.strict and report["counterexamples"]:
        return 1
    return 0


def _cmd_kummer(args) -> int:
    field = _parse_field(args)
    if args.poly:
        f = _parse_poly(field, args.poly)
        result = kummer_explore(f, args.order, args.r)
    elif args.d:
        result = kummer_sweep(field, args.d, args.order, args.r)
    else:
        raise ValueError("kummer needs --poly or --d")
    payload = {
        k: str(v) if isinstance(v, int) and not isinstance(v, bool) else v
        for k, v in result.items()
    }
    _emit(args, payload)
    return 0


def _cmd_gauss(args) -> int:
    field = _parse_field(args)
    chi = MultiplicativeCharacter(field, args.order, args.index)
    psi = AdditiveCharacter(field, args.shift)
    g = gauss_sum(chi, psi)
    payload = {
        "q": field.size,
        "order": args.order,
        "index": args.index,
        "shift": args.shift,
        "value": g.to_json(),
        "absSquared": str(field.size),
    }
    _emit(args, payload)
    return 0


def _add_field_args(sub) -> None:
    sub.add_argument("--p", type=int, required=True, help="prime characteristic")
    sub.add_argument("--e", type=int, default=1, help="extension degree over F_p")
    sub.add_argument(
        "--modulus",
        default=None,
        help="monic modulus coefficients, constant first (default: searched)",
    )


def _add_common(sub) -> None:
    sub.add_argument("--format", choices=("json", "csv", "text"), default="json")
    sub.add_argument("--out", default=None, help="directory for file output")
    sub.add_argument("--strict", action="store_true")
    sub.add_argument("--budget", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weillab",
        description="exact point counts, monodromy classification, and "
        "moment L-functions for y^q - y = f(x) over odd finite fields",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    s = subs.add_parser("field-info", help="describe F_{p^e}")
    _add_field_args(s)
    _add_common(s)
    s.set_defaults(func=_cmd_field_info)

    s = subs.add_parser("count", help="rational points of y^q - y = f")
    _add_field_args(s)
    s.add_argument("--poly", required=True, help="coefficients, constant first")
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--n", type=int, default=1, help="number of variables")
    s.add_argument(
        "--method",
        choices=("charsum", "traceKernel", "naive", "all"),
        default="charsum",
    )
    s.add_argument("--shift", type=int, default=1)
    _add_common(s)
    s.set_defaults(func=_cmd_count)

    s = subs.add_parser("classify", help="monodromy hypotheses and main term")
    _add_field_args(s)
    s.add_argument("--poly", required=True)
    s.add_argument("--r", type=int, default=1)
    _add_common(s)
    s.set_defaults(func=_cmd_classify)

    s = subs.add_parser("verify", help="count, classify, and check bounds")
    _add_field_args(s)
    s.add_argument("--poly", required=True)
    s.add_argument("--r", type=int, default=1)
    _add_common(s)
    s.set_defaults(func=_cmd_verify)

    s = subs.add_parser("lfunction", help="moment L-function data")
    _add_field_args(s)
    s.add_argument("--poly", required=True)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--depth", type=int, default=None, help="series depth M")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--shift", type=int, default=1)
    _add_common(s)
    s.set_defaults(func=_cmd_lfunction)

    s = subs.add_parser("sweep", help="bound verification over a grid")
    s.add_argument("--q", required=True, help="comma-separated prime powers")
    s.add_argument("--d", required=True, help="comma-separated degrees")
    s.add_argument("--r", required=True, help="comma-separated extension degrees")
    s.add_argument("--family", choices=("all-monic", "random"), default="all-monic")
    s.add_argument("--sample", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=1)
    _add_common(s)
    s.set_defaults(func=_cmd_sweep)

    s = subs.add_parser("kummer", help="point counts of y^(q-1)/e = f(x)")
    _add_field_args(s)
    s.add_argument("--poly", default=None)
    s.add_argument("--d", type=int, default=None, help="sweep all monic of degree d")
    s.add_argument("--order", type=int, required=True, help="e with e | q - 1")
    s.add_argument("--r", type=int, default=1)
    _add_common(s)
    s.set_defaults(func=_cmd_kummer)

    s = subs.add_parser("gauss", help="exact Gauss sum g(chi, psi)")
    _add_field_args(s)
    s.add_argument("--order", type=int, required=True, help="order of chi")
    s.add_argument("--index", type=int, default=1)
    s.add_argument("--shift", type=int, default=1)
    _add_common(s)
    s.set_defaults(func=_cmd_gauss)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if getattr(args, "budget", None):
        os.environ["WEILLAB_BUDGET"] = str(args.budget)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (WeillabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
