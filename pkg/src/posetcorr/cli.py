"""Command-line interface: ``posetcorr <subcommand> [options]``.

Every subcommand prints one document to stdout.  JSON output is an envelope
``{"result": ..., "meta": ...}`` with sorted keys; rationals and large counts
are strings.  Exit codes: 0 success, 1 usage error, 2 a proved inequality
failed (a bug), 3 a conjecture counterexample was found.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import __version__, atlas, counting, search, sequences, statistics, tableaux
from . import inequalities as ineq
from .poset import CycleError, Poset

EXIT_OK, EXIT_USAGE, EXIT_BUG, EXIT_DISCOVERY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        raise UsageError(message)


# -- argument helpers -------------------------------------------------------------


def _load_poset(arg: str | None) -> Poset:
    if arg is None:
        raise UsageError("--poset is required")
    if arg == "-":
        text = sys.stdin.read()
    elif arg.lstrip().startswith("{"):
        text = arg
    else:
        path = Path(arg)
        if not path.exists():
            raise UsageError(f"no such poset file: {arg}")
        text = path.read_text()
    try:
        return Poset.from_dict(json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot parse poset: {exc}") from None


def _int_list(text: str | None) -> list[int] | None:
    if text is None:
        return None
    return [int(v) for v in text.replace(" ", "").split(",") if v]


def _cell(text: str) -> tuple[int, int]:
    i, j = _int_list(text)
    return i, j


def _rat(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# -- subcommands -----------------------------------------------------------------


def cmd_count(args) -> tuple[Any, int]:
    P = _load_poset(args.poset)
    if args.x is None:
        return str(counting.count(P, args.method)), EXIT_OK
    if args.k is None:
        return [str(c) for c in counting.value_counts(P, args.x, args.method)[1:]], EXIT_OK
    return str(counting.count_with_value(P, args.x, args.k, args.method)), EXIT_OK


def cmd_stats(args) -> tuple[Any, int]:
    P = _load_poset(args.poset)
    out: dict[str, Any] = {"e": str(counting.count(P, args.method))}
    if args.x is not None:
        x = args.x
        out["distribution"] = [_rat(p) for p in statistics.value_distribution(P, x, args.method)]
        out["mean"] = _rat(statistics.mean(P, x, args.method))
        out["variance"] = _rat(statistics.variance(P, x, args.method))
        if args.y is not None:
            out["covariance"] = _rat(statistics.covariance(P, x, args.y, args.method))
            out["prob_less"] = _rat(statistics.prob_less(P, x, args.y, args.method))
    if args.A is not None:
        A = _int_list(args.A)
        out["fmin_distribution"] = [_rat(p) for p in statistics.fmin_distribution(P, A, args.method)]
        out["fmin_mean"] = _rat(statistics.mean_fmin(P, A, args.method))
    return out, EXIT_OK


PARAM_INTS = ("a", "k", "l", "u", "v", "w", "x", "y", "z", "b")
PARAM_SETS = ("A", "B", "C", "sigma")


def _check_params(args) -> dict:
    params: dict[str, Any] = {}
    for key in PARAM_INTS:
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    for key in PARAM_SETS:
        val = getattr(args, key, None)
        if val is not None:
            params[key] = _int_list(val)
    return params


def cmd_check(args) -> tuple[Any, int]:
    spec = ineq.get_check(args.id)
    params = _check_params(args)
    P = _load_poset(args.poset) if args.poset is not None else Poset(0, ())
    v = ineq.check(args.id, P, params, method=args.method)
    code = EXIT_OK
    if v.status == "Fails":
        code = EXIT_DISCOVERY if spec.conjecture else EXIT_BUG
    return v.to_json(), code


def cmd_sweep(args) -> tuple[Any, int]:
    P = _load_poset(args.poset)
    ids = args.checks.split(",") if args.checks else ineq.check_ids(conjecture=False if not args.conjectures else None)
    for cid in ids:
        ineq.get_check(cid)
    cfg = ineq.SweepConfig(max_random_subsets=args.max_subsets, seed=args.seed)
    rep = ineq.sweep(P, ids, cfg, args.method)
    fails = rep.fails()
    code = EXIT_BUG if rep.fails(conjecture=False) else EXIT_DISCOVERY if fails else EXIT_OK
    shown = [v.to_json() for v in rep.verdicts if args.all or v.status == "Fails"]
    return {"histogram": rep.histogram(), "verdicts": shown}, code


def cmd_atlas(args) -> tuple[Any, int]:
    P = _load_poset(args.poset)
    M = atlas.build_matrix(P, args.a, args.k)
    hyp = atlas.check_hyp(M)
    return {
        "matrix": M.to_json(),
        "hyperbolic": hyp.to_json(),
        "row_identities": atlas.check_row_identities(P, args.a, args.k),
        "diagonal_identity": atlas.check_diagonal_identity(P, args.a, args.k),
    }, EXIT_OK


def cmd_syt(args) -> tuple[Any, int]:
    s = tableaux.SkewShape.parse(args.shape)
    out: dict[str, Any] = {
        "shape": str(s),
        "size": s.size,
        "count": str(tableaux.syt_count(s)),
        "corners": [list(c) for c in tableaux.corners(s)],
    }
    if args.verify:
        out["count_poset"] = str(tableaux.syt_count(s, "poset"))
    if s.is_straight and s.size:
        out["corner_distribution"] = [[list(c), _rat(p)] for c, p in tableaux.corner_distribution(s).items()]
    code = EXIT_OK
    if args.checks:
        verdicts = []
        for cid in args.checks.split(","):
            for bind in tableaux.shape_bindings(cid, s):
                v = tableaux.check_syt_inequality(cid, *bind)
                verdicts.append(v.to_json() | {"shape": v.witness.get("shape")})
                if v.status == "Fails":
                    code = EXIT_BUG
        out["verdicts"] = verdicts
    return out, code


def cmd_hookwalk(args) -> tuple[Any, int]:
    s = tableaux.SkewShape.parse(args.shape)
    samples = tableaux.hook_walk_samples(s, args.samples, args.seed)
    exact = tableaux.corner_distribution(s)
    freq = {c: 0 for c in exact}
    for c in samples:
        freq[c] += 1
    rows = [{"corner": list(c), "count": freq[c], "exact": _rat(p)} for c, p in exact.items()]
    return {"samples": args.samples, "corners": rows, "tv": round(tableaux.total_variation(samples, exact), 6)}, EXIT_OK


def cmd_euler(args) -> tuple[Any, int]:
    if args.entringer is None and args.fgh is None:
        return [str(v) for v in sequences.euler_numbers(args.upto)], EXIT_OK
    out: dict[str, Any] = {"euler": [str(v) for v in sequences.euler_numbers(args.upto)]}
    if args.entringer is not None:
        out["entringer"] = [str(v) for v in sequences.entringer_row(args.entringer)]
    if args.fgh is not None:
        n = args.fgh
        m = (n - 1) // 2
        table = []
        for k in range(1, m + 2):
            F, G, H = sequences.fgh_polynomials(n, k)
            l1, r1 = sequences.euler_inequality_1(n, k)
            l2, r2 = sequences.euler_inequality_2(n, k)
            table.append({"k": k, "F": str(F), "G": str(G), "H": str(H), "ineq1": l1 <= r1, "ineq2": l2 >= r2})
        out["fgh"] = table
    return out, EXIT_OK


def cmd_hunt(args) -> tuple[Any, int]:
    n_lo, _, n_hi = args.n.partition("-")
    n_min, n = (int(n_lo), int(n_hi)) if n_hi else (None, int(n_lo))
    spec = search.GeneratorSpec(
        kind=args.gen, n=n, n_min=n_min, count=args.count, seed=args.seed,
        edge_prob=args.edge_prob, k=args.dim, path=args.path, max_random_subsets=args.max_subsets,
    )
    ids = args.checks.split(",") if args.checks else ineq.check_ids(conjecture=True)
    res = search.hunt(ids, spec, budget_secs=args.budget_secs, workers=args.workers, out=args.out)
    print(f"hunt: {res.posets} posets in {res.wall_time:.2f}s", file=sys.stderr)
    out = res.summary() | {
        "checks": sorted(ids),
        "discoveries_found": [d.to_json() for d in res.discoveries],
        "bug_verdicts": [v.to_json() for v in res.bugs],
    }
    return out, res.exit_code


COMMANDS = {
    "count": cmd_count,
    "stats": cmd_stats,
    "check": cmd_check,
    "sweep": cmd_sweep,
    "atlas": cmd_atlas,
    "syt": cmd_syt,
    "hookwalk": cmd_hookwalk,
    "euler": cmd_euler,
    "hunt": cmd_hunt,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--poset", help="inline JSON, a file path, or - for stdin")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--method", choices=("dp", "enum"), default="dp")

    p = _Parser(prog="posetcorr", description="Exact linear-extension statistics and correlation inequalities.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("count", parents=[common], help="number of linear extensions")
    c.add_argument("--x", type=int, help="element whose value counts are reported")
    c.add_argument("--k", type=int, help="only extensions with f(x) = k")

    s = sub.add_parser("stats", parents=[common], help="distributions and moments")
    s.add_argument("--x", type=int)
    s.add_argument("--y", type=int)
    s.add_argument("--A", help="comma-separated subset for f_min")

    ch = sub.add_parser("check", parents=[common], help="evaluate one registered inequality")
    ch.add_argument("--id", required=True)
    for key in PARAM_INTS:
        ch.add_argument(f"--{key}", type=int)
    for key in PARAM_SETS:
        ch.add_argument(f"--{key}", help="comma-separated list")

    sw = sub.add_parser("sweep", parents=[common], help="all admissible bindings on one poset")
    sw.add_argument("--checks", help="comma-separated ids (default: every proved check)")
    sw.add_argument("--conjectures", action="store_true", help="include conjecture checks by default")
    sw.add_argument("--all", action="store_true", help="list Equality and Vacuous verdicts too")
    sw.add_argument("--max-subsets", type=int, default=512)

    a = sub.add_parser("atlas", parents=[common], help="the atlas matrix M(P, a, k)")
    a.add_argument("--a", type=int, required=True)
    a.add_argument("--k", type=int, required=True)

    y = sub.add_parser("syt", parents=[common], help="standard Young tableaux of a shape")
    y.add_argument("--shape", required=True, help='e.g. "4,3,1" or "10,9,9,7,6,6,3/4,3,1"')
    y.add_argument("--verify", action="store_true", help="also count via the cell poset")
    y.add_argument("--checks", help="comma-separated corner checks to sweep on the shape")

    h = sub.add_parser("hookwalk", parents=[common], help="sample corners by the hook walk")
    h.add_argument("--shape", required=True)
    h.add_argument("--samples", type=int, default=10000)

    e = sub.add_parser("euler", parents=[common], help="Euler and Entringer numbers")
    e.add_argument("--upto", type=int, default=10)
    e.add_argument("--entringer", type=int, help="print the Entringer row for this n")
    e.add_argument("--fgh", type=int, help="print the F/G/H table for this odd n")

    hu = sub.add_parser("hunt", parents=[common], help="search for conjecture counterexamples")
    hu.add_argument("--checks", help="comma-separated ids (default: every conjecture check)")
    hu.add_argument("--gen", choices=search.KINDS, default="exhaustive")
    hu.add_argument("--n", default="5", help='size, or a range "1-6" for exhaustive runs')
    hu.add_argument("--count", type=int, default=100, help="posets drawn by random generators")
    hu.add_argument("--dim", type=int, default=2, help="number of linear orders for random-kdim")
    hu.add_argument("--edge-prob", type=float, default=0.5)
    hu.add_argument("--path", help="poset file for --gen file")
    hu.add_argument("--budget-secs", type=float)
    hu.add_argument("--workers", type=int, help="default: $POSETCORR_WORKERS or 1")
    hu.add_argument("--out", help="append discoveries to this JSONL file")
    hu.add_argument("--max-subsets", type=int, default=512)
    return p


# -- output ---------------------------------------------------------------------------


def _flatten(result: Any) -> list[list[Any]]:
    if isinstance(result, list):
        if result and all(isinstance(r, dict) for r in result):
            keys = sorted({k for r in result for k in r})
            return [keys] + [[_cell_text(r.get(k)) for k in keys] for r in result]
        return [[_cell_text(v) for v in result]]
    if isinstance(result, dict):
        return [["key", "value"]] + [[k, _cell_text(v)] for k, v in sorted(result.items())]
    return [[_cell_text(result)]]


def _cell_text(v: Any) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return str(v)


def render(result: Any, meta: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"result": result, "meta": meta}, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(_flatten(result))
        return buf.getvalue()
    if isinstance(result, (str, int)):
        return f"{result}\n"
    return json.dumps(result, sort_keys=True, indent=2) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        result, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"posetcorr: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ineq.PreconditionViolated, ineq.UnknownCheck, CycleError, counting.RangeError,
            counting.CapExceeded, statistics.EmptyPoset, tableaux.EmptyShape, ValueError) as exc:
        print(f"posetcorr: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    meta = {"command": args.command, "seed": args.seed, "version": __version__}
    sys.stdout.write(render(result, meta, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
