"""Command-line interface.

Exit codes: 0 success (including reported failures of margin and ratio
rows), 1 malformed input or class violation, 2 a hard-assert checker
failed, 3 a resource limit refused the request.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

from . import __version__
from .cube import SetFamily, mask_to_set
from .errors import ClassViolation, DimensionMismatch, ResourceLimit
from .families import FAMILY_CLASSES, TribesParams, count_families, enumerate_families
from .flow import LambdaScheme, check_kahn_flow, kleitman_feasible
from .inequalities import ENSEMBLE_CHECKERS, REGISTRY, evaluate, evaluate_ensemble
from .search import OBJECTIVES, SCAN_CLASSES, ScanSpec, default_jobs, scan, tribes_sweep
from .serialize import dumps, load_families, load_family, to_jsonable

EXIT_OK, EXIT_INPUT, EXIT_ASSERT, EXIT_LIMIT = 0, 1, 2, 3

TT_HELP = ("Family files are JSON with 'n' and one of: 'family' (list of subsets of 1-based "
           "elements), 'generators' plus 'closure' ('up' or 'down'), or 'tt' (hex of the "
           "2^n-bit membership bitset; bit m is set iff the subset with mask m is present, "
           "where mask bit i-1 stands for element i; most significant hex digit first, "
           "zero padded to ceil(2^n/4) digits).")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def _budget(text: str) -> int | None:
    if text == "exhaustive":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("budget must be an integer or 'exhaustive'")
    if value < 0:
        raise argparse.ArgumentTypeError("budget must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hypercorr", description="Exact correlation inequalities on the discrete cube.",
                epilog=TT_HELP)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="evaluate one inequality on a pair of families", epilog=TT_HELP)
    c.add_argument("--ineq", required=True, choices=sorted(REGISTRY))
    c.add_argument("--A", required=True, metavar="FILE")
    c.add_argument("--B", metavar="FILE")
    c.add_argument("--alpha", type=float)
    c.add_argument("--perm", type=_int_list, help="coordinate order for max-coordinate rows")
    c.add_argument("--coordinate", type=int, help="m_alpha_bound: use Delta_i of A")
    c.add_argument("--a", type=float, help="weakly_symmetric window exponent")
    c.add_argument("--out")

    s = sub.add_parser("scan", help="search for the smallest margin or ratio")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--A-class", dest="a_class", required=True, choices=SCAN_CLASSES)
    s.add_argument("--B-class", dest="b_class", choices=SCAN_CLASSES)
    s.add_argument("--ineq", required=True, choices=sorted(REGISTRY))
    s.add_argument("--objective", default="min-margin", choices=OBJECTIVES)
    s.add_argument("--budget", type=_budget, default=None, help="pair count or 'exhaustive' (default)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--alpha", type=float)
    s.add_argument("--jobs", type=int, default=None, help="worker processes (default $HYPERCORR_JOBS or 1)")
    s.add_argument("--out")

    f = sub.add_parser("flow", help="Kahn flow check for a maximal intersecting family", epilog=TT_HELP)
    f.add_argument("--family", required=True, metavar="FILE")
    f.add_argument("--scheme", default="max", choices=("max", "average"))
    f.add_argument("--perm", type=_int_list)
    f.add_argument("--kleitman", action="store_true", help="also decide convex feasibility")
    f.add_argument("--out")

    t = sub.add_parser("tribes", help="tribes statistics")
    t.add_argument("--r", type=int, required=True)
    t.add_argument("--m", type=int, help="tribe count (default: nearest balance)")
    t.add_argument("--exact", action="store_true")
    t.add_argument("--sweep", type=_int_list, help="tribe sizes to sweep instead of a single row")
    t.add_argument("--csv", help="write the sweep table as CSV")
    t.add_argument("--out")

    e = sub.add_parser("enumerate", help="enumerate a family class")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--class", dest="family_class", default="increasing", choices=FAMILY_CLASSES)
    e.add_argument("--count-only", action="store_true")
    e.add_argument("--out")

    a = sub.add_parser("avg", help="average-case checks over an ensemble", epilog=TT_HELP)
    a.add_argument("--families", required=True, metavar="FILE")
    a.add_argument("--ineq", required=True, choices=ENSEMBLE_CHECKERS)
    a.add_argument("--gamma", type=float)
    a.add_argument("--t", help="expected common measure, e.g. 1/2")
    a.add_argument("--out")
    return p


# --------------------------------------------------------------------------

def _cmd_check(args):
    A = load_family(args.A)
    B = load_family(args.B) if args.B else None
    params = {k: v for k, v in (("alpha", args.alpha), ("permutation", args.perm),
                                ("coordinate", args.coordinate), ("a", args.a)) if v is not None}
    rep = evaluate(args.ineq, A, B, params)
    return to_jsonable(rep), (EXIT_ASSERT if rep.hard_failure else EXIT_OK), args.ineq


def _cmd_scan(args):
    params = {"alpha": args.alpha} if args.alpha is not None else {}
    jobs = args.jobs if args.jobs is not None else default_jobs()
    spec = ScanSpec(args.n, args.a_class, args.b_class, args.ineq, args.objective, args.budget,
                    args.seed, params, jobs)
    rec = scan(spec)
    out = to_jsonable(rec)
    out["spec"] = {"n": spec.n, "A_class": spec.a_class, "B_class": spec.b_class,
                   "checker": spec.checker, "objective": spec.objective,
                   "budget": "exhaustive" if spec.budget is None else spec.budget,
                   "seed": spec.seed, "params": to_jsonable(params)}
    code = EXIT_ASSERT if rec.hard_failures else EXIT_OK
    return out, code, None


def _cmd_flow(args):
    F = load_family(args.family)
    kind = "max-coordinate" if args.scheme == "max" else "average"
    res = check_kahn_flow(F, LambdaScheme(kind, tuple(args.perm) if args.perm else None))
    out = {
        "feasible": res.feasible,
        "reason": res.reason,
        "lambda": to_jsonable(res.weights),
        "max_flow": to_jsonable(res.max_flow),
        "total": to_jsonable(res.total),
        "direct_agrees": res.direct_agrees,
        "flow": [{"from": list(mask_to_set(a)), "to": list(mask_to_set(b)), "value": to_jsonable(v)}
                 for (a, b), v in sorted((res.flow or {}).items())],
        "certificate": to_jsonable(res.certificate),
    }
    if args.kleitman:
        ok, lam = kleitman_feasible(F)
        out["kleitman"] = {"feasible": ok, "lambda": to_jsonable(lam)}
    return out, EXIT_OK, None


def _cmd_tribes(args):
    mode = "exact" if args.exact else "closed-form"
    if args.sweep:
        rows = tribes_sweep(args.sweep, mode)
    else:
        rows = tribes_sweep([(args.r, args.m) if args.m else args.r], mode)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["r", "m", "mode", "mu_A", "mu_B", "cor_AB", "influence_per_coord",
                        "ratio_chvatal", "ratio_balanced"])
            for st in rows:
                fl = st.as_floats()
                w.writerow([st.r, st.m, st.mode, *(repr(fl[k]) for k in
                            ("mu_A", "mu_B", "cor_AB", "influence_per_coord", "ratio_chvatal",
                             "ratio_balanced"))])
    data = [to_jsonable(st) for st in rows]
    return (data if args.sweep else data[0]), EXIT_OK, None


def _cmd_enumerate(args):
    if args.count_only:
        return count_families(args.n, args.family_class), EXIT_OK, None
    fams = [{"tt": F.hex()} for F in enumerate_families(args.n, args.family_class)]
    return {"n": args.n, "class": args.family_class, "count": len(fams), "families": fams}, EXIT_OK, None


def _cmd_avg(args):
    fams = load_families(args.families)
    params = {}
    if args.gamma is not None:
        params["gamma"] = args.gamma
    if args.t is not None:
        params["t"] = args.t
    rep = evaluate_ensemble(args.ineq, fams, params)
    return to_jsonable(rep), EXIT_OK, None


_COMMANDS = {"check": _cmd_check, "scan": _cmd_scan, "flow": _cmd_flow, "tribes": _cmd_tribes,
             "enumerate": _cmd_enumerate, "avg": _cmd_avg}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        result, code, _ = _COMMANDS[args.command](args)
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ClassViolation, DimensionMismatch, ValueError, OSError, KeyError) as exc:
        msg = str(exc)
        print(msg if msg.startswith("class violation") else f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    if args.command == "enumerate" and args.count_only:
        print(result)
        return code
    doc = {
        "command": args.command,
        "result": result,
        "metadata": {"argv": argv, "seed": getattr(args, "seed", None), "version": __version__,
                     "timing_s": round(time.perf_counter() - start, 6)},
    }
    text = dumps(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
