"""gaplab command line: every operation as a subcommand, JSON or CSV out.

Exit codes: 0 success, 2 invalid arguments, 3 verification failure,
4 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import json
import math
import sys
import time
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

from . import __version__
from .bigarith import LogReal
from .effective import (
    abc_quality,
    bugeaud_measure,
    cubic_field_bounds,
    cutoff_cubic,
    cutoff_quartic,
    gap_lower_bound,
    min_t_cubic,
    min_t_quartic,
    quartic_field_bounds,
)
from .errors import BudgetExceeded, FactorizationError, VerificationError
from .reduction import DivisibilityHit, Family, reduce_cubic, reduce_quartic
from .search import (
    SearchConfig,
    default_workers,
    enumerate_fixed_t,
    gap_report,
    pell_pairs,
    search_divisible,
    thm4_report,
    verify_theorem1,
)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_BUDGET = 0, 2, 3, 4
SAFE_INT = 2 ** 53


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def to_jsonable(obj: Any) -> Any:
    """Canonical JSON-ready form: big ints and Fractions become strings."""
    if obj is None or isinstance(obj, bool):
        return obj
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) <= SAFE_INT else str(obj)
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, LogReal):
        return {"sign": obj.sign,
                "log10_magnitude": None if obj.sign == 0 else obj.log10_magnitude}
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def to_csv(obj: Any, header: Optional[list[str]] = None) -> str:
    data = to_jsonable(obj)
    rows = data if isinstance(data, list) else [data]
    if header and all(isinstance(r, list) for r in rows):
        rows = [dict(zip(header, r)) for r in rows]
    rows = [r if isinstance(r, dict) else {"value": r} for r in rows]
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in cols])
    return buf.getvalue()


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return str(v)


def digest(result: Any) -> str:
    return hashlib.sha256(dumps(result).encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------

def int_range(text: str) -> tuple[int, int]:
    """``lo..hi`` inclusive, or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo_i, hi_i = int(lo), int(hi)
        else:
            lo_i = hi_i = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {text!r}")
    if lo_i > hi_i:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo_i, hi_i


def _workers(args: argparse.Namespace) -> int:
    return args.workers if args.workers is not None else default_workers()


def _hit_row(h: DivisibilityHit) -> dict:
    return {"family": h.family, "a": h.a, "b": h.b, "l": h.l, "t": h.t}


def _census(args: argparse.Namespace, family: str) -> list[DivisibilityHit]:
    lo, hi = args.a
    exclude = None
    if getattr(args, "include_a1", False):
        exclude = False
    cfg = SearchConfig(family, args.l, lo, hi, args.b_max,
                       exclude_a1=exclude, worker_count=_workers(args))
    return search_divisible(cfg)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_pell(args):
    return [list(p) for p in pell_pairs(args.count)]


def cmd_search(args):
    return [_hit_row(h) for h in _census(args, args.family)]


def cmd_reduce(args):
    hit = DivisibilityHit.from_pair(args.family, args.a, args.b, args.l)
    if hit.family is Family.CUBIC_TRIPLE:
        r = reduce_cubic(hit)
        return {
            "hit": _hit_row(hit), "x": r.x, "y": r.y, "D": r.D, "u": r.u, "v": r.v,
            "s": r.s, "s_positive": r.s_positive,
            "divided_bound_holds": r.divided_bound_holds,
            "chain": {"links": [{"name": n, "value": v} for n, v in r.chain.links],
                      "final_bound": r.chain.final_bound, "ok": r.chain.ok},
        }
    r = reduce_quartic(hit)
    return {
        "hit": _hit_row(hit), "x": r.x, "y": r.y, "D": r.D, "s": r.s,
        "degenerate": r.degenerate, "size_checks": r.statuses,
    }


def cmd_verify_thm1(args):
    rep = verify_theorem1()
    return {
        "solutions": [list(s) for s in rep.solutions],
        "small_u_cases": [
            {"u": c.u, "checked_v": c.checked_v, "tail_from": c.tail_from,
             "solutions": [{"v": v, "D": D} for v, D in c.solutions]}
            for c in rep.small_u_cases
        ],
        "bennett_u_max": rep.bennett_u_max,
        "recomputed_u_max": rep.recomputed_u_max,
        "constants": rep.constants,
        "check_table": [
            {"u": r.u, "v": r.v, "value": r.value, "lower": r.lower, "upper": r.upper}
            for r in rep.check_table
        ],
        "min_value": rep.min_value,
        "min_value_approx": float(rep.min_value),
        "min_u": rep.min_u,
    }


def cmd_enumerate(args):
    return [list(p) for p in enumerate_fixed_t(args.t, args.l, args.limit)]


def cmd_field_bounds(args):
    if args.degree == 3:
        return cubic_field_bounds(args.m, args.mode)
    return quartic_field_bounds(args.m)


def cmd_measure(args):
    em = bugeaud_measure(args.degree, args.m)
    out = to_jsonable(em)
    out["c"] = to_jsonable(em.c)
    return out


def cmd_cutoffs(args):
    fam = Family(args.family)
    cut = (cutoff_cubic if fam is Family.CUBIC_TRIPLE else cutoff_quartic)(args.t, args.l, args.a)
    out = {"cutoff": cut}
    if args.a is not None:
        min_t = min_t_cubic if fam is Family.CUBIC_TRIPLE else min_t_quartic
        out["min_t"] = min_t(args.a, args.l)
        out["gap_lower_bound"] = gap_lower_bound(args.a, args.l, fam)
    return out


def cmd_abc(args):
    if args.triple:
        A, B, C = args.triple
        return {"triple": [A, B, C], "quality": abc_quality(A, B, C)}
    if args.a is None or args.b_max is None or args.l is None:
        raise ValueError("abc needs --triple A B C or a quartic census (--l, --a, --b-max)")
    rows = thm4_report(_census(args, "quartic"))
    return [{"hit": _hit_row(r.hit), "d": r.d, "triple": list(r.triple),
             "quality": r.quality} for r in rows]


def cmd_gap_report(args):
    hits = _census(args, args.family)
    rep = gap_report(hits)
    return {
        "violations": rep.violations,
        "min_ratio_by_bucket": rep.min_ratio_by_bucket,
        "rows": [
            {**_hit_row(r.hit), "ratio": r.ratio, "ratio_approx": float(r.ratio),
             "status": r.status, "formula_bound": r.formula_bound,
             "size_flags": r.size_flags}
            for r in rep.rows
        ],
    }


# ---------------------------------------------------------------------------
# Parser and dispatch
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gaplab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"gaplab {__version__}")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--manifest", metavar="PATH", help="append a run manifest line here")
    # the same two options are accepted after the subcommand too
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--manifest", metavar="PATH", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help, parents=[common])
        sp.set_defaults(func=fn)
        return sp

    def census_args(sp, family: bool = True):
        if family:
            sp.add_argument("--family", choices=("cubic", "quartic"), required=True)
        sp.add_argument("--l", type=int, required=True)
        sp.add_argument("--a", type=int_range, required=True, metavar="LO..HI")
        sp.add_argument("--b-max", type=int, required=True)
        sp.add_argument("--include-a1", action="store_true",
                        help="keep a = 1 for the cubic l = 1 family")
        sp.add_argument("--workers", type=int, default=None)

    sp = add("pell", cmd_pell, "pairs with b(b+1) = 2a(a+1)")
    sp.add_argument("--count", type=int, required=True)

    census_args(add("search", cmd_search, "divisibility census"))

    sp = add("reduce", cmd_reduce, "reduce one hit to coprime coordinates")
    sp.add_argument("--family", choices=("cubic", "quartic"), required=True)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)

    add("verify-thm1", cmd_verify_thm1, "machine check of b(b+1)(b+2) = 2a(a+1)(a+2)")

    sp = add("enumerate", cmd_enumerate, "solutions for fixed t")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--l", type=int, default=1)
    sp.add_argument("--limit", type=int, required=True)

    sp = add("field-bounds", cmd_field_bounds, "discriminant/regulator bounds")
    sp.add_argument("--degree", type=int, choices=(3, 4), required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--mode", choices=("both", "exact"), default="both")

    sp = add("measure", cmd_measure, "Bugeaud's effective irrationality measure")
    sp.add_argument("--degree", type=int, choices=(3, 4), required=True)
    sp.add_argument("--m", type=int, required=True)

    sp = add("cutoffs", cmd_cutoffs, "explicit cutoffs and minimum-t bounds")
    sp.add_argument("--family", choices=("cubic", "quartic"), default="cubic")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--l", type=int, default=1)
    sp.add_argument("--a", type=int, default=None)

    sp = add("abc", cmd_abc, "abc quality of a triple or of quartic-census triples")
    sp.add_argument("--triple", type=int, nargs=3, metavar=("A", "B", "C"))
    sp.add_argument("--l", type=int, default=None)
    sp.add_argument("--a", type=int_range, default=None, metavar="LO..HI")
    sp.add_argument("--b-max", type=int, default=None)
    sp.add_argument("--workers", type=int, default=None)

    census_args(add("gap-report", cmd_gap_report, "ratios and invariant status over a census"))
    return p


_NOT_PARAMS = {"func", "manifest", "format"}
_CSV_HEADERS = {"pell": ["a", "b"], "enumerate": ["a", "b"]}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        result = args.func(args)
    except VerificationError as exc:
        print(f"gaplab: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (BudgetExceeded, FactorizationError) as exc:
        print(f"gaplab: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"gaplab: invalid arguments: {exc}", file=sys.stderr)
        return EXIT_USAGE
    wall = time.perf_counter() - start

    if args.format == "csv":
        text = to_csv(result, _CSV_HEADERS.get(args.command))
    else:
        text = dumps(result)
    sys.stdout.write(text)
    if args.manifest:
        params = {k: v for k, v in vars(args).items() if k not in _NOT_PARAMS}
        line = {
            "subcommand": args.command,
            "params": to_jsonable(params),
            "version": __version__,
            "wall_time": wall,
            "digest": digest(result),
        }
        with open(args.manifest, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(line, sort_keys=True) + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
