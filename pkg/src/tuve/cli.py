"""End-to-end pipeline and command line: matrix in, polyhedron vertices out.

The covering polyhedron of a 0/1 matrix A is {x >= 0 : Ax >= 1}.  For an
ideal (in particular totally unimodular) A its vertices are exactly the
characteristic vectors of the minimal transversals of the row hypergraph,
and its extreme directions are the n unit vectors.  The tool never rewrites
the problem over the bounded box {0 <= x <= 1}: that polytope's vertex set
is the family of all transversals, which can be exponentially larger.

Exit codes: 0 success, 2 input parse error, 3 unimodularity check failure,
4 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from typing import Callable

from .decomp import DetectBudget, detect
from .dualizer import DualizationStats, DualizerConfig, dualize
from .hypergraph import (
    Hypergraph,
    ParseError,
    VertexSet,
    canonicalize,
    minimize,
    parse_hypergraph,
)
from .oracle import BudgetExceeded, TransversalSet, berge_dualize, verify_dual_pair
from .tumatrix import (
    TUMatrix,
    format_matrix,
    generate_network_instance,
    hypergraph_of,
    is_totally_unimodular,
    parse_matrix,
)


@dataclass(frozen=True)
class Vector01:
    coords: tuple[int, ...]

    def __post_init__(self):
        if any(c not in (0, 1) for c in self.coords):
            raise ValueError("coordinates must be 0 or 1")

    def as_bits(self) -> str:
        return "".join(str(c) for c in self.coords)

    def support_ids(self) -> str:
        return " ".join(str(i + 1) for i, c in enumerate(self.coords) if c)


@dataclass
class EnumerationSummary:
    vertex_count: int
    direction_count: int
    stats: DualizationStats
    fingerprint: dict


def transversal_to_vertex(t: VertexSet, n: int) -> Vector01:
    """Characteristic vector of a transversal."""
    if t.mask >> n:
        raise ValueError("set not inside the given dimension")
    return Vector01(tuple(1 if v in t else 0 for v in range(n)))


def extreme_directions(n: int) -> list[Vector01]:
    """The n unit vectors; the recession cone of the covering polyhedron."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    return [Vector01(tuple(1 if j == i else 0 for j in range(n))) for i in range(n)]


def _fingerprint(A: TUMatrix) -> dict:
    digest = hashlib.sha256(format_matrix(A).encode()).hexdigest()
    return {"rows": A.rows, "cols": A.cols, "sha256": digest}


def enumerate_vertices(A: TUMatrix, sink: Callable[[Vector01], None], *,
                       check_tu: bool = True,
                       cfg: DualizerConfig | None = None) -> EnumerationSummary:
    """Emit every vertex of the covering polyhedron of A exactly once.

    Emission happens per result row after the dual family is complete, in
    the canonical family order.
    """
    if check_tu and not is_totally_unimodular(A):
        raise ValueError("matrix is not totally unimodular")
    h = hypergraph_of(A)
    tr, stats = dualize(h, cfg)
    count = 0
    for t in tr:
        sink(transversal_to_vertex(t, A.cols))
        count += 1
    return EnumerationSummary(vertex_count=count, direction_count=A.cols,
                              stats=stats, fingerprint=_fingerprint(A))


def dual_polyhedron_vertices(A: TUMatrix, *, check_tu: bool = True,
                             cfg: DualizerConfig | None = None) -> TransversalSet:
    """Vertices of the covering polyhedron built over the first one's vertices.

    Dualizing the dual family must reproduce the minimized row hypergraph;
    that identity is asserted before returning.
    """
    if check_tu and not is_totally_unimodular(A):
        raise ValueError("matrix is not totally unimodular")
    h = hypergraph_of(A)
    first, _ = dualize(h, cfg)
    second, _ = dualize(first.family, cfg)
    expected = minimize(h.n, h.edges)
    if {t.mask for t in second.edges} != {e.mask for e in expected.edges}:
        raise RuntimeError("dual involution failed to reproduce the minimized rows")
    return second


# -- command line -----------------------------------------------------------------

def _build_config(args) -> DualizerConfig:
    cfg = DualizerConfig()
    if getattr(args, "threshold", None) is not None:
        cfg.base_threshold = args.threshold
    cfg.trace = bool(getattr(args, "trace", False))
    budget = os.environ.get("TUVE_BUDGET")
    if budget:
        try:
            limit = int(budget)
        except ValueError:
            raise ParseError(f"TUVE_BUDGET must be an integer, got {budget!r}")
        cfg.oracle_max_family = limit
        cfg.detect_budget = DetectBudget(max_structures=limit,
                                         network_node_budget=limit)
    return cfg


def _write_stats(path: str, stats: DualizationStats) -> None:
    with open(path, "w") as fh:
        json.dump(stats.as_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit_family(tr, n: int, fmt: str, out) -> None:
    for t in tr:
        if fmt == "bits":
            out.write(transversal_to_vertex(t, n).as_bits() + "\n")
        else:
            out.write(" ".join(str(v + 1) for v in t) + "\n")


def _oracle_stats(h: Hypergraph, tr) -> DualizationStats:
    stats = DualizationStats(n=h.n, m=h.m, k=len(tr.edges))
    stats.mu = stats.n * stats.m * stats.k
    stats.nodes = 1
    stats.rule_histogram["oracle"] = 1
    stats.oracle_leaf_count = 1
    return stats


def _cmd_vertices(args, out) -> int:
    with open(args.matrix_file) as fh:
        A = parse_matrix(fh.read())
    if not args.no_tu_check and not is_totally_unimodular(A):
        print("matrix is not totally unimodular", file=sys.stderr)
        return 3
    cfg = _build_config(args)
    h = hypergraph_of(A)
    if args.oracle:
        tr = berge_dualize(h, max_n=24, max_family=cfg.oracle_max_family)
        stats = _oracle_stats(h, tr)
    else:
        tr, stats = dualize(h, cfg)
    _emit_family(tr, A.cols, args.format, out)
    if args.stats:
        _write_stats(args.stats, stats)
    return 0


def _cmd_dualize(args, out) -> int:
    with open(args.hypergraph_file) as fh:
        h = parse_hypergraph(fh.read())
    cfg = _build_config(args)
    if args.oracle:
        tr = berge_dualize(h, max_n=24, max_family=cfg.oracle_max_family)
        stats = _oracle_stats(h, tr)
    else:
        tr, stats = dualize(h, cfg)
    _emit_family(tr, h.n, args.format, out)
    if args.stats:
        _write_stats(args.stats, stats)
    return 0


def _cmd_check_dual(args, out) -> int:
    with open(args.hypergraph_file) as fh:
        h = parse_hypergraph(fh.read())
    with open(args.family_file) as fh:
        fam = parse_hypergraph(fh.read())
    if fam.n != h.n:
        print("universes differ", file=sys.stderr)
        return 2
    result = verify_dual_pair(h, fam)
    if result.is_valid:
        out.write("valid\n")
        return 0
    witness = "" if result.witness is None else \
        " " + " ".join(str(v + 1) for v in result.witness)
    out.write(f"{result.status}{witness}\n")
    return 1


def _cmd_check_tu(args, out) -> int:
    with open(args.matrix_file) as fh:
        A = parse_matrix(fh.read())
    if is_totally_unimodular(A):
        out.write("totally unimodular\n")
        return 0
    out.write("not totally unimodular\n")
    return 3


def _cmd_decompose(args, out) -> int:
    with open(args.hypergraph_file) as fh:
        h = parse_hypergraph(fh.read())
    cfg = _build_config(args)
    canon, _ = canonicalize(h)
    if canon.is_trivial():
        out.write("trivial\n")
        return 0
    case = detect(canon, cfg.detect_budget)
    out.write(case.describe() + "\n")
    if args.trace:
        cfg.trace = True
        _, stats = dualize(h, cfg)
        for line in stats.trace_lines:
            out.write(line + "\n")
    return 0


def _cmd_gen_network(args, out) -> int:
    A = generate_network_instance(args.seed, args.tree, args.paths)
    out.write(format_matrix(A))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tuve",
        description="Vertex enumeration for covering polyhedra of 0/1 "
                    "totally unimodular matrices")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_format=True):
        sp.add_argument("--oracle", action="store_true",
                        help="force brute-force dualization")
        sp.add_argument("--threshold", type=int, metavar="C",
                        help="recursion base threshold on min(n, m)")
        sp.add_argument("--stats", metavar="PATH",
                        help="write a JSON stats record here")
        if with_format:
            sp.add_argument("--format", choices=("ids", "bits"), default="ids",
                            help="output rows as 1-based ids or as 0/1 strings")

    sp = sub.add_parser("vertices", help="enumerate the polyhedron's vertices")
    sp.add_argument("matrix_file")
    sp.add_argument("--no-tu-check", action="store_true",
                    help="trust the input matrix; skip the unimodularity test")
    common(sp)
    sp.set_defaults(fn=_cmd_vertices)

    sp = sub.add_parser("dualize", help="minimal transversals of a hypergraph")
    sp.add_argument("hypergraph_file")
    common(sp)
    sp.set_defaults(fn=_cmd_dualize)

    sp = sub.add_parser("check-dual", help="verify a claimed dual family")
    sp.add_argument("hypergraph_file")
    sp.add_argument("family_file")
    sp.set_defaults(fn=_cmd_check_dual)

    sp = sub.add_parser("check-tu", help="test total unimodularity")
    sp.add_argument("matrix_file")
    sp.set_defaults(fn=_cmd_check_tu)

    sp = sub.add_parser("decompose", help="print the applicable decomposition case")
    sp.add_argument("hypergraph_file")
    sp.add_argument("--trace", action="store_true",
                    help="also print the full recursion tree")
    sp.add_argument("--threshold", type=int, metavar="C")
    sp.set_defaults(fn=_cmd_decompose)

    sp = sub.add_parser("gen-network", help="emit a random network matrix")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--tree", type=int, required=True, metavar="NODES")
    sp.add_argument("--paths", type=int, required=True, metavar="COUNT")
    sp.set_defaults(fn=_cmd_gen_network)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args, sys.stdout)
    except (ParseError, FileNotFoundError, ValueError) as exc:
        if isinstance(exc, ValueError) and "not totally unimodular" in str(exc):
            print(str(exc), file=sys.stderr)
            return 3
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
