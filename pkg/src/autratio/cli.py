"""Command-line surface.

Commands: f, aut, approx, search, table, oracle (alias of aut --oracle).
Exit codes: 0 ok, 1 usage or parse error, 2 capacity or cap refusal,
3 internal error.  Exact rationals cross this boundary as "num/den"
strings, never as floats; log-space values always come with their error
bound.  Env overrides: AUTRATIO_SIEVE_CEILING, AUTRATIO_ORACLE_ORDER_CAP,
AUTRATIO_ORACLE_WORK_CAP.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .approximate import ApproxResult, approx_ray, verify_certificate
from .autorder import aut_order, f_exact, f_prime_exact
from .errors import (
    GroupParseError,
    OracleCapExceeded,
    PrecisionRefusal,
    SieveCapacityError,
)
from .groups import format_group, parse_group
from .oracle import OracleCaps, aut_order_bruteforce
from .primes import shared_stream
from .search import SearchBounds, build_f_table, find_exact

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CAPACITY = 2
EXIT_INTERNAL = 3


def _ratio_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _parse_rational(text: str, allow_decimal: bool) -> Fraction:
    text = text.strip()
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise GroupParseError(f"cannot parse {text!r} as a rational: {exc}") from exc
    if not allow_decimal and "/" not in text and not text.lstrip("+-").isdigit():
        raise GroupParseError(
            f"{text!r}: exact search targets must be integers or p/q rationals"
        )
    return q


def _oracle_caps() -> OracleCaps:
    return OracleCaps(
        order_cap=int(os.environ.get("AUTRATIO_ORACLE_ORDER_CAP", 200)),
        work_cap=int(os.environ.get("AUTRATIO_ORACLE_WORK_CAP", 10**8)),
    )


def _symbolic_json(group) -> dict:
    return {
        "two_rank": group.two_rank,
        "odd_prime_index_ranges": [list(r) for r in group.odd_prime_ranges],
        "index_count": group.index_count,
    }


def _approx_json(res: ApproxResult) -> dict:
    sel = res.trace.selection
    return {
        "group": _symbolic_json(res.group),
        "achieved": {
            "log_value": res.achieved.log_value,
            "abs_error": res.achieved.abs_error,
        },
        "exact_ratio": None if res.exact_ratio is None else _ratio_str(res.exact_ratio),
        "target": _ratio_str(res.target),
        "eps": _ratio_str(res.eps),
        "trace": {
            "two_rank": res.trace.two_rank,
            "b": None if res.trace.b is None else _ratio_str(res.trace.b),
            "eps_inner": (
                None if res.trace.eps_inner is None else _ratio_str(res.trace.eps_inner)
            ),
            "odd_only": res.trace.odd_only,
            "below_eps_witness": res.trace.below_eps_witness,
            "scanned": 0 if sel is None else sel.scanned,
            "status": "converged" if sel is None else sel.status,
            "max_prime_scanned": res.trace.max_prime_scanned,
        },
    }


def _emit(args, payload: dict, lines: list[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _cmd_f(args) -> int:
    g = parse_group(args.group)
    value = f_prime_exact(g) if args.phi else f_exact(g)
    payload = {
        "command": "f",
        "inputs": {"group": args.group, "phi": bool(args.phi)},
        "result": {"value": _ratio_str(value)},
        "status": "ok",
        "error": None,
    }
    _emit(args, payload, [_ratio_str(value)])
    return EXIT_OK


def _cmd_aut(args) -> int:
    g = parse_group(args.group)
    formula = aut_order(g)
    if not args.oracle:
        payload = {
            "command": "aut",
            "inputs": {"group": args.group, "oracle": False},
            "result": {"aut_order": str(formula)},
            "status": "ok",
            "error": None,
        }
        _emit(args, payload, [str(formula)])
        return EXIT_OK
    brute = aut_order_bruteforce(g, _oracle_caps())
    match = formula == brute
    payload = {
        "command": "aut",
        "inputs": {"group": args.group, "oracle": True},
        "result": {
            "aut_order": str(formula),
            "oracle": str(brute),
            "match": match,
        },
        "status": "ok" if match else "error",
        "error": None if match else "formula/oracle mismatch",
    }
    _emit(args, payload, [f"{formula} {brute} {'match' if match else 'MISMATCH'}"])
    return EXIT_OK if match else EXIT_INTERNAL


def _describe_achieved(res: ApproxResult) -> str:
    if res.exact_ratio is not None:
        return f"f = {_ratio_str(res.exact_ratio)} (exact)"
    return (
        f"ln f = {res.achieved.log_value!r} +- {res.achieved.abs_error:.3e} "
        "(certified)"
    )


def _cmd_approx(args) -> int:
    a = _parse_rational(args.target, allow_decimal=True)
    eps = _parse_rational(args.eps, allow_decimal=True)
    stream = shared_stream()
    if args.odd_only:
        from .approximate import approx_in_unit

        res = approx_in_unit(a, eps, odd_only=True, stream=stream)
    else:
        res = approx_ray(a, eps, stream=stream)
    verified = verify_certificate(res, stream=stream)
    lines = [
        f"group: {res.group.describe()}",
        _describe_achieved(res),
    ]
    if res.trace.below_eps_witness:
        lines.append(f"certified: f < {_ratio_str(eps)} (target in [0, eps])")
    else:
        lines.append(f"certified: |f - {_ratio_str(a)}| <= {_ratio_str(eps)}")
    sel = res.trace.selection
    lines.append(
        "trace: two_rank={} b={} eps_inner={} scanned={} max_prime={} status={}".format(
            res.trace.two_rank,
            "-" if res.trace.b is None else _ratio_str(res.trace.b),
            "-" if res.trace.eps_inner is None else _ratio_str(res.trace.eps_inner),
            0 if sel is None else sel.scanned,
            res.trace.max_prime_scanned,
            "converged" if sel is None else sel.status,
        )
    )
    lines.append(f"second-pass check: {'ok' if verified else 'FAILED'}")
    if args.materialize:
        try:
            lines.append("literal: " + format_group(res.materialize(stream)))
        except ValueError as exc:
            lines.append(f"literal: not materialized ({exc})")
    payload = {
        "command": "approx",
        "inputs": {
            "target": args.target,
            "eps": args.eps,
            "odd_only": bool(args.odd_only),
            "materialize": bool(args.materialize),
        },
        "result": {**_approx_json(res), "second_pass_ok": verified},
        "status": "ok",
        "error": None,
    }
    _emit(args, payload, lines)
    return EXIT_OK if verified else EXIT_INTERNAL


def _cmd_search(args) -> int:
    a = _parse_rational(args.target, allow_decimal=False)
    bounds = SearchBounds(
        max_order=args.max_order,
        max_prime=args.max_prime,
        max_rank_per_prime=args.max_rank,
    )
    witnesses = find_exact(a, bounds)
    lines = (
        [format_group(w.group) for w in witnesses]
        if witnesses
        else [f"no witness within bounds (max_order={bounds.max_order})"]
    )
    payload = {
        "command": "search",
        "inputs": {
            "target": args.target,
            "max_order": bounds.max_order,
            "max_prime": bounds.max_prime,
            "max_rank": bounds.max_rank_per_prime,
        },
        "result": {"witnesses": [format_group(w.group) for w in witnesses]},
        "status": "ok",
        "error": None,
    }
    _emit(args, payload, lines)
    return EXIT_OK


def _cmd_table(args) -> int:
    bounds = SearchBounds(max_order=args.max_order, max_rank_per_prime=args.max_rank)
    rows = build_f_table(bounds, args.out)
    payload = {
        "command": "table",
        "inputs": {"max_order": args.max_order, "out": args.out},
        "result": {"rows": rows, "path": args.out},
        "status": "ok",
        "error": None,
    }
    _emit(args, payload, [f"{rows} rows"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="autratio",
        description="Exact automorphism-to-order ratios of finite abelian groups",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("f", help="evaluate f(G) (or f'(G) with --phi) exactly")
    p.add_argument("group", help='group literal, e.g. "C2 x C4 x C9"')
    p.add_argument("--phi", action="store_true", help="normalize by phi(|G|)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_f)

    p = sub.add_parser("aut", help="|Aut(G)| (with --oracle: brute-force check)")
    p.add_argument("group")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_aut)

    p = sub.add_parser("oracle", help="alias of: aut --oracle")
    p.add_argument("group")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_aut, oracle=True)

    p = sub.add_parser(
        "approx", help="construct a group with |f(G) - a| <= eps, certified"
    )
    p.add_argument("target", help="decimal or rational target a >= 0")
    p.add_argument("--eps", default="1e-6")
    p.add_argument("--odd-only", dest="odd_only", action="store_true",
                   help="restrict to odd group order (target must be <= 1)")
    p.add_argument("--materialize", action="store_true",
                   help="also print the expanded group literal when small enough")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_approx)

    p = sub.add_parser("search", help="exact witnesses f(G) = a within bounds")
    p.add_argument("target", help="exact rational, e.g. 21 or 1/2")
    p.add_argument("--max-order", dest="max_order", type=int, default=100)
    p.add_argument("--max-prime", dest="max_prime", type=int, default=None)
    p.add_argument("--max-rank", dest="max_rank", type=int, default=8)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_search)

    p = sub.add_parser("table", help="write the exact f-table for all groups")
    p.add_argument("--max-order", dest="max_order", type=int, default=100)
    p.add_argument("--max-rank", dest="max_rank", type=int, default=8)
    p.add_argument("--out", default="f-table.tsv")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_table)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except (GroupParseError, ValueError) as exc:
        _fail(args, str(exc))
        return EXIT_USAGE
    except (SieveCapacityError, OracleCapExceeded, PrecisionRefusal) as exc:
        _fail(args, str(exc))
        return EXIT_CAPACITY
    except OSError as exc:
        _fail(args, str(exc))
        return EXIT_CAPACITY if isinstance(exc, MemoryError) else EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - surface everything as exit 3
        _fail(args, f"internal error: {exc}")
        return EXIT_INTERNAL


def _fail(args, message: str) -> None:
    if getattr(args, "json", False):
        print(
            json.dumps(
                {
                    "command": getattr(args, "command", None),
                    "inputs": None,
                    "result": None,
                    "status": "error",
                    "error": message,
                },
                sort_keys=True,
            )
        )
    else:
        print(f"error: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
