"""
Command-line front end.

Exit codes: 0 success, 2 an identity check failed, 64 usage error,
69 a size budget was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Sequence

from permcycle import affine, bijection, compositions as comp, overlap_graph as og
from permcycle.errors import CapacityError, InvalidInputError, PermCycleError, PreconditionError
from permcycle.perm_core import binomial, central_binomial, parse_perm, perm_str

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_USAGE = 64
EXIT_CAPACITY = 69


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(header: Sequence[str], rows: Sequence[Sequence], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, map(_jsonable, r))) for r in rows], indent=2) + "\n"
    if fmt == "table":
        cells = [list(map(str, header))] + [[str(x) for x in r] for r in rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
        return "".join("  ".join(c.rjust(w) for c, w in zip(row, widths)) + "\n" for row in cells)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([[str(x) for x in r] for r in rows])
    return buf.getvalue()


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    return x


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}")


def _graph(args) -> og.OverlapGraph:
    if args.q is not None:
        return og.build_de_bruijn(args.q, args.n)
    return og.build_overlap_graph(args.n, args.avoid or ())


# ------------------------------------------------------------ subcommands

def cmd_graph(args) -> int:
    g = _graph(args)
    if args.format == "dot":
        _emit(args, og.export_dot(g))
    elif args.format == "json":
        obj = {"name": g.name, "mode": g.mode, "n": g.n,
               "vertices": [list(v) for v in g.vertices],
               "edges": [{"tail": list(g.vertices[t]), "head": list(g.vertices[h]),
                          "label": list(lab)} for t, h, lab in g.edges]}
        _emit(args, json.dumps(obj) + "\n")
    else:
        rows = [(perm_str(g.vertices[t]), perm_str(g.vertices[h]), perm_str(lab))
                for t, h, lab in g.edges]
        _emit(args, _table(["tail", "head", "label"], rows, args.format))
    return EXIT_OK


def cmd_walks(args) -> int:
    g = _graph(args)
    if args.enumerate:
        walks = og.enumerate_closed_walks(g, args.d, args.budget)
        obj = {"n": g.n, "d": args.d, "walks": [[list(e) for e in w.edges] for w in walks]}
        _emit(args, json.dumps(obj) + "\n")
        return EXIT_OK
    rows = [(d, og.count_closed_walks(g, d)) for d in range(1, args.d + 1)]
    _emit(args, _table(["d", "closed_walks"], rows, args.format))
    return EXIT_OK


def cmd_cycles(args) -> int:
    g = _graph(args)
    methods = ["formula", "trace_mobius", "enumerate"] if args.method == "all" else [args.method]
    rows, mismatch = [], False
    for d in range(1, args.d_max + 1):
        row = [d]
        for m in methods:
            if m == "formula":
                if g.mode == "word":
                    value = og.predicted_cycles_de_bruijn(g.q, d)
                elif g.avoid == ((3, 1, 2),):
                    value = og.predicted_cycles_312(d)
                else:
                    value = ""
            else:
                value = og.count_d_cycles(g, d, m, args.budget)
            row.append(value)
        values = {v for v in row[1:] if v != ""}
        mismatch |= len(values) > 1
        rows.append(row)
    _emit(args, _table(["d", *methods], rows, args.format))
    if mismatch and args.cross_check:
        print("cycle counts disagree", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_formula(args) -> int:
    if args.family == "312":
        rows = [(d, og.predicted_cycles_312(d)) for d in range(1, args.d_max + 1)]
    elif args.family == "debruijn":
        rows = [(d, og.predicted_cycles_de_bruijn(args.q, d)) for d in range(1, args.d_max + 1)]
    elif args.family == "central-binomial":
        rows = [(d, central_binomial(d)) for d in range(1, args.d_max + 1)]
    else:
        rows = [(d, og.de_bruijn_complete_cycle_formula(args.q, d))
                for d in range(1, args.d_max + 1)]
    _emit(args, _table(["d", "value"], rows, args.format))
    return EXIT_OK


_WEIGHTS = {
    "unit": lambda order: comp.WeightSequence.from_function(lambda i: 1, order),
    "catalan": comp.catalan_weights,
    "enriched": comp.enriched_weights,
}


def cmd_compositions(args) -> int:
    if args.enriched:
        objs = [e.to_json() for e in comp.enumerate_enriched(args.d_max)]
        _emit(args, json.dumps(objs) + "\n")
        return EXIT_OK
    w = _WEIGHTS[args.weights](args.d_max)
    rows = []
    for d in range(1, args.d_max + 1):
        for k in range(1, d + 1):
            b, g = comp.beta(d, k, w), comp.gamma(d, k, w)
            rows.append((d, k, binomial(d - 1, k - 1), binomial(d, k), b, g,
                         g == Fraction(d, k) * b))
    header = ["d", "k", "compositions", "cyclic_compositions", "beta", "gamma", "gamma_eq_d_over_k_beta"]
    _emit(args, _table(header, rows, args.format))
    return EXIT_OK


def cmd_affine(args) -> int:
    if args.list is not None:
        perms = affine.construct_affine_312(args.list)
        objs = [dict(p.to_json(), cut_points=sorted(affine.affine_cut_points(p))) for p in perms]
        _emit(args, json.dumps(objs) + "\n")
        return EXIT_OK
    rows = []
    for d in range(1, args.d_max + 1):
        for k in range(1, d + 1):
            built = {p.window for p in affine.construct_affine_312(d, k)}
            rows.append((d, k, affine.count_affine_by_cut_points(d, k), len(built)))
        if args.oracle:
            oracle = affine.enumerate_affine_312(d, args.bound or 2 * d)
            rows.append((d, "all", binomial(2 * d - 1, d), len(oracle)))
    _emit(args, _table(["d", "k", "count_formula", "count_enumerated"], rows, args.format))
    return EXIT_OK


def cmd_phi(args) -> int:
    ecc = comp.EnrichedCyclicComposition.from_json(_read_json(args.ecc))
    walk = bijection.phi(ecc, args.n, allow_short_window=args.allow_short_window)
    _emit(args, json.dumps(walk.to_json()) + "\n")
    return EXIT_OK


def cmd_phi_inv(args) -> int:
    walk = og.ClosedWalk.from_json(_read_json(args.walk))
    ecc = bijection.phi_inverse(walk, debug_extend=args.debug_extend)
    _emit(args, json.dumps(ecc.to_json()) + "\n")
    return EXIT_OK


def cmd_euler(args) -> int:
    rows = []
    if args.graph is not None:
        g = og.build_overlap_graph(args.graph, args.avoid or ())
        rows.append((g.name, og.count_eulerian_circuits(g), "", ""))
        header = ["graph", "best", "formula_same_order", "formula_order_plus_one"]
    else:
        header = ["graph", "best", "formula_same_order", "formula_order_plus_one"]
        for n in range(1, args.n_max + 1):
            r = og.euler_report(args.q, n)
            rows.append((f"B({args.q},{n})", r["best"], r["formula_same_order"],
                         r["formula_order_plus_one"]))
    _emit(args, _table(header, rows, args.format))
    return EXIT_OK


def cmd_verify(args) -> int:
    from permcycle.verify import run_checks

    failed = False
    lines = []
    for name, ok, detail in run_checks(quick=args.quick):
        failed |= not ok
        lines.append(f"{'PASS' if ok else 'FAIL'} {name}: {detail}\n")
        if not args.out:
            sys.stdout.write(lines[-1])
            sys.stdout.flush()
    if args.out:
        _emit(args, "".join(lines))
    return EXIT_MISMATCH if failed else EXIT_OK


# ---------------------------------------------------------------- parsing

def _add_graph_args(p, need_n: bool = True) -> None:
    p.add_argument("--n", type=int, required=need_n, help="window order (vertex length)")
    p.add_argument("--avoid", action="append", type=parse_perm,
                   help="pattern to avoid, e.g. 312; repeatable")
    p.add_argument("--q", type=int, help="alphabet size; builds a De Bruijn graph instead")


def _add_output_args(p, formats=("csv", "table", "json")) -> None:
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", help="write to this file instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="permcycle", description=__doc__.splitlines()[1])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("graph", help="build and export G(n,S) or a De Bruijn graph")
    _add_graph_args(p)
    _add_output_args(p, ("dot", "csv", "table", "json"))
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("walks", help="count or enumerate closed walks")
    _add_graph_args(p)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--enumerate", action="store_true", help="list walks of length d as JSON")
    p.add_argument("--budget", type=int)
    _add_output_args(p)
    p.set_defaults(func=cmd_walks)

    p = sub.add_parser("cycles", help="count d-cycles")
    _add_graph_args(p)
    p.add_argument("--d-max", type=int, required=True)
    p.add_argument("--method", choices=["formula", "trace_mobius", "enumerate", "all"],
                   default="trace_mobius")
    p.add_argument("--cross-check", action="store_true",
                   help="exit 2 if the methods disagree")
    p.add_argument("--budget", type=int)
    _add_output_args(p)
    p.set_defaults(func=cmd_cycles)

    p = sub.add_parser("formula", help="closed-form sequences")
    p.add_argument("--family", choices=["312", "debruijn", "central-binomial", "euler-debruijn"],
                   default="312")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--d-max", type=int, required=True)
    _add_output_args(p)
    p.set_defaults(func=cmd_formula)

    p = sub.add_parser("compositions", help="beta/gamma sums and enriched cyclic compositions")
    p.add_argument("--d-max", type=int, required=True)
    p.add_argument("--weights", choices=sorted(_WEIGHTS), default="catalan")
    p.add_argument("--enriched", action="store_true", help="emit E_d for d = d-max as JSON")
    _add_output_args(p)
    p.set_defaults(func=cmd_compositions)

    p = sub.add_parser("affine", help="312-avoiding affine permutations by cut points")
    p.add_argument("--d-max", type=int, default=4)
    p.add_argument("--oracle", action="store_true", help="add brute-force totals")
    p.add_argument("--bound", type=int)
    p.add_argument("--list", type=int, metavar="D", help="emit all of them for period D as JSON")
    _add_output_args(p)
    p.set_defaults(func=cmd_affine)

    p = sub.add_parser("phi", help="enriched cyclic composition -> closed walk")
    p.add_argument("--ecc", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--allow-short-window", action="store_true",
                   help="permit n < d (windows only, not a bijection)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("phi-inv", help="closed walk -> enriched cyclic composition")
    p.add_argument("--walk", required=True)
    p.add_argument("--debug-extend", action="store_true",
                   help="repeat the lift with doubled windows and compare")
    p.add_argument("--out")
    p.set_defaults(func=cmd_phi_inv)

    p = sub.add_parser("euler", help="Eulerian circuit counts (BEST theorem)")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--graph", type=int, metavar="N", help="count on G(N,S) instead")
    p.add_argument("--avoid", action="append", type=parse_perm)
    _add_output_args(p)
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("verify", help="run the identity suite")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "budget", None) is not None and args.budget < 1:
            raise InvalidInputError("--budget must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        print("advice: lower n or d, or raise PERMCYCLE_BUDGET", file=sys.stderr)
        return EXIT_CAPACITY
    except (InvalidInputError, PreconditionError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PermCycleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
