"""Command-line entry point: ``walklab gen | analyze | simulate | recurrence``.

Exit codes: 0 when every theorem-predicted check holds, 1 when a verifier
finds a violation, 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import report as report_mod
from .errors import DeadEnd, Disconnected, GraphFormatError, InvalidSize, NoConvergence, WalkLabError
from .generators import generate
from .graph import Params, dump_edge_list, read_edge_list
from .recurrence import growth_table_csv, recurrence_proxy_experiment, tree_resistance_to_infinity
from .simulate import dump_trajectory, walk

log = logging.getLogger("walklab")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_radii(text: str) -> list:
    """``"2..6"`` or ``"2,3,5"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad radii {text!r}; use LO..HI or a comma list") from None


def _parse_ints(text: str) -> list:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_params(p):
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=1.0)


def _add_generator_args(p):
    p.add_argument("--n", type=int, help="node count (complete, cycle, path, circulant, erdos-renyi)")
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--offsets", type=_parse_ints, help="circulant offsets, e.g. 1,2")
    p.add_argument("--p", type=float, help="edge probability for erdos-renyi")
    p.add_argument("--a", type=int, help="first side of complete-bipartite")
    p.add_argument("--b", type=int, help="second side of complete-bipartite")


def _generated(kind: str, args):
    key = kind.replace("-", "_")
    if key in ("tri_torus", "triangular_torus"):
        return generate(kind, args.rows, args.cols)
    if key == "circulant":
        return generate(kind, args.n, args.offsets)
    if key == "erdos_renyi":
        return generate(kind, args.n, args.p, seed=args.seed)
    if key == "complete_bipartite":
        return generate(kind, args.a, args.b)
    if key in ("complete", "cycle", "path"):
        return generate(kind, args.n)
    return generate(kind)


def _load_graph(args):
    if args.graph:
        return read_edge_list(args.graph)
    return _generated(args.kind, args)


def _write(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_generate(args) -> int:
    g = _generated(args.kind, args)
    _write(dump_edge_list(g), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    g = _load_graph(args)
    params = Params(args.alpha, args.beta, args.gamma)
    rep = report_mod.analyze(
        g,
        params,
        tol=args.tol,
        method=args.method,
        max_cycle_len=args.max_cycle_len,
        recurrence_lab=args.recurrence_lab,
    )
    _write(report_mod.dumps(rep) + "\n", args.out)
    for name in rep["violations"]:
        log.error("violation: %s %s", name, rep["checks"][name])
    return EXIT_OK if rep["ok"] else EXIT_VIOLATION


def cmd_simulate(args) -> int:
    g = _load_graph(args)
    params = Params(args.alpha, args.beta, args.gamma)
    start = args.start if args.start else (0, g.adjacency[0][0])
    log.info("simulate seed=%d start=%s steps=%d", args.seed, start, args.steps)
    tr = walk(g, params, start, args.steps, seed=args.seed)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            dump_trajectory(tr, fh)
    summary = {"seed": args.seed, "start": list(tr.start_edge), "length": len(tr), "sha256": tr.digest()}
    print(json.dumps(summary))
    return EXIT_OK


def cmd_recurrence(args) -> int:
    params = Params(args.alpha, args.beta, args.gamma)
    rows = recurrence_proxy_experiment(args.family, args.radii, params)
    _write(growth_table_csv(rows), args.out)
    if args.family.startswith("tree"):
        bound = tree_resistance_to_infinity(3)
        if any(r.R_srw >= bound for r in rows):
            log.error("tree SRW resistance exceeds the infinite-tree value %.6f", bound)
            return EXIT_VIOLATION
    else:
        r = [row.R_srw for row in rows]
        if any(b <= a for a, b in zip(r, r[1:])):
            log.error("SRW resistance column is not increasing")
            return EXIT_VIOLATION
    return EXIT_OK


def _start(text: str):
    parts = _parse_ints(text)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("start must be two node ids, e.g. 0,1")
    return tuple(parts)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="walklab", description="Second-order (node2vec) random walks: kernels, measures and checks.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a generated graph as an edge list")
    g.add_argument("kind")
    _add_generator_args(g)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="build kernels, solve for stationary measures and run every check")
    a.add_argument("graph", nargs="?", help="edge-list file (default: generate --kind)")
    a.add_argument("--kind", default="clique4-minus-edge")
    _add_generator_args(a)
    _add_params(a)
    a.add_argument("--tol", type=float, default=1e-10)
    a.add_argument("--method", choices=["direct", "power"], default="direct")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--max-cycle-len", type=int, default=8)
    a.add_argument("--recurrence-lab", action="store_true")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", help="simulate one trajectory")
    s.add_argument("graph", nargs="?", help="edge-list file (default: generate --kind)")
    s.add_argument("--kind", default="clique4-minus-edge")
    _add_generator_args(s)
    _add_params(s)
    s.add_argument("--steps", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--start", type=_start, help="initial directed edge, e.g. 0,1")
    s.add_argument("--out", help="trajectory dump path")
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("recurrence", help="resistance growth table for lattice patches")
    r.add_argument("--family", choices=["triangular", "tree3"], default="triangular")
    r.add_argument("--radii", type=_parse_radii, default=_parse_radii("2..6"))
    _add_params(r)
    r.add_argument("--out")
    r.set_defaults(func=cmd_recurrence)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (OSError, GraphFormatError, InvalidSize, ValueError, TypeError) as exc:
        print(f"walklab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Disconnected, DeadEnd, NoConvergence, WalkLabError) as exc:
        print(f"walklab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
