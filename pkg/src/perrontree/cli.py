"""Command-line front end.

Subcommands: ``gen`` (tree generation and composition, writing the text or
JSON tree format), ``matrix`` (exact matrix printout), ``spectral``
(dominant eigenvalue and entropy as JSON), ``classify`` (type I/II report
as JSON), ``verify`` (bound-report CSV, nonzero exit on any failure) and
``ratio`` (moment/eigenvalue series CSV).

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric
failure.  Vertex ids in all human-facing output are 1-based, matching the
tree file format.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bounds, fiedler, matrices, spectral, trees
from .errors import (CapacityError, ClassificationAmbiguityError,
                     PowerIterationError)

_MATRIX_KINDS = {
    "N": matrices.path_matrix,
    "Ninv": matrices.path_matrix_inverse,
    "M": matrices.bottleneck_matrix,
    "Minv": matrices.bottleneck_inverse,
    "Q": matrices.neckbottle_matrix,
    "Qinv": matrices.neckbottle_inverse,
}


def _fmt(x: float) -> float:
    """Round a float through 12 significant digits for stable output."""
    return float(f"{x:.12g}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perrontree",
        description="Spectral and combinatorial weights of rooted trees.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate or compose a tree")
    gen.add_argument("kind", choices=["star", "path", "broom", "bethe",
                                      "random", "sum", "product", "power"])
    gen.add_argument("inputs", nargs="*", help="tree files (sum/product/power)")
    gen.add_argument("--n", type=int, help="order (star/path/random)")
    gen.add_argument("--x", type=int, help="handle length (broom)")
    gen.add_argument("--y", type=int, help="pendant count (broom)")
    gen.add_argument("--p", type=int, help="depth (bethe)")
    gen.add_argument("--k", type=int, help="branching (bethe) / exponent (power)")
    gen.add_argument("--seed", type=int, default=0, help="seed (random)")
    gen.add_argument("--max-vertices", type=int, default=trees.VERTEX_CAP)
    gen.add_argument("--json", action="store_true", help="write JSON format")
    gen.add_argument("-o", "--output", help="output file (default stdout)")

    mat = sub.add_parser("matrix", help="print an exact matrix of a tree")
    mat.add_argument("--kind", required=True, choices=sorted(_MATRIX_KINDS))
    mat.add_argument("tree", help="tree file")
    mat.add_argument("-o", "--output")

    sp = sub.add_parser("spectral", help="dominant eigenvalue and entropy")
    sp.add_argument("tree")
    sp.add_argument("--neckbottle", action="store_true",
                    help="iterate on the common-descendant matrix")
    sp.add_argument("--tol", type=float, default=spectral.DEFAULT_TOL)
    sp.add_argument("--max-iter", type=int, default=spectral.DEFAULT_MAX_ITER)
    sp.add_argument("-o", "--output")

    cls = sub.add_parser("classify", help="type I/II classification")
    cls.add_argument("tree")
    cls.add_argument("--tie-tol", type=float, default=fiedler.TIE_TOL)
    cls.add_argument("--tol", type=float, default=spectral.DEFAULT_TOL)
    cls.add_argument("-o", "--output")

    ver = sub.add_parser("verify", help="run bound checks; CSV report")
    ver.add_argument("--suite", required=True,
                     choices=["all", "tree", "sum", "product", "power",
                              "bethe"])
    ver.add_argument("inputs", nargs="*",
                     help="tree files to check instead of the committed "
                          "corpus (suite-specific operands)")
    ver.add_argument("--k", type=int, help="exponent for 'power' with a file")
    ver.add_argument("--tol", type=float, default=spectral.DEFAULT_TOL)
    ver.add_argument("-o", "--output")

    rat = sub.add_parser("ratio", help="moment/eigenvalue ratio series CSV")
    rat.add_argument("--family", required=True,
                     choices=["star", "path", "bethe", "power"])
    rat.add_argument("--k", type=int, default=2, help="branching (bethe)")
    rat.add_argument("--params",
                     help="comma-separated parameter list (family-specific)")
    rat.add_argument("-o", "--output")
    return parser


def _emit(text: str, output):
    if output:
        with open(output, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require(args, names):
    for name in names:
        if getattr(args, name) is None:
            raise ValueError(f"gen {args.kind} requires --{name}")


def _cmd_gen(args) -> int:
    kind = args.kind
    cap = args.max_vertices
    if kind == "star":
        _require(args, ["n"])
        t = trees.star(args.n, max_vertices=cap)
    elif kind == "path":
        _require(args, ["n"])
        t = trees.path(args.n, max_vertices=cap)
    elif kind == "broom":
        _require(args, ["x", "y"])
        t = trees.broom(args.x, args.y, max_vertices=cap)
    elif kind == "bethe":
        _require(args, ["p", "k"])
        t = trees.bethe(args.p, args.k, max_vertices=cap)
    elif kind == "random":
        _require(args, ["n"])
        t = trees.random_tree(args.n, args.seed, max_vertices=cap)
    elif kind == "sum":
        if not args.inputs:
            raise ValueError("gen sum needs at least one tree file")
        t = trees.rooted_sum([trees.load_tree(f) for f in args.inputs],
                             max_vertices=cap)
    elif kind == "product":
        if len(args.inputs) != 2:
            raise ValueError("gen product needs exactly two tree files")
        t = trees.rooted_product(trees.load_tree(args.inputs[0]),
                                 trees.load_tree(args.inputs[1]),
                                 max_vertices=cap)
    else:  # power
        _require(args, ["k"])
        if len(args.inputs) != 1:
            raise ValueError("gen power needs exactly one tree file")
        t = trees.rooted_power(trees.load_tree(args.inputs[0]), args.k,
                               max_vertices=cap)
    payload = trees.tree_to_json(t) + "\n" if args.json else trees.tree_to_text(t)
    _emit(payload, args.output)
    return 0


def _cmd_matrix(args) -> int:
    t = trees.load_tree(args.tree)
    m = _MATRIX_KINDS[args.kind](t)
    _emit(matrices.matrix_to_text(m), args.output)
    return 0


def _cmd_spectral(args) -> int:
    t = trees.load_tree(args.tree)
    result = spectral.perron_value(t, tol=args.tol, max_iter=args.max_iter,
                                   use_neckbottle=args.neckbottle)
    if args.neckbottle:
        # the entropy is defined through the bottleneck eigenvector, which
        # the common-descendant route does not produce
        entropy = spectral.perron_entropy(t, tol=args.tol,
                                          max_iter=args.max_iter).h
    else:
        w = result.vector
        entropy = float(w.sum()) ** 2 / float(w @ w)
    payload = {
        "rho": _fmt(result.rho),
        "entropy": _fmt(entropy),
        "iterations": result.iterations,
        "residual": _fmt(result.residual),
    }
    _emit(json.dumps(payload) + "\n", args.output)
    return 0


def _cmd_classify(args) -> int:
    t = trees.load_tree(args.tree)
    g = trees.unroot(t)
    c = fiedler.classify(g, tol=args.tie_tol, solver_tol=args.tol)
    payload = {
        "type": c.kind,
        "characteristic": [v + 1 for v in c.characteristic],
        "beta": None if c.beta is None else _fmt(c.beta),
        "algebraic_connectivity": _fmt(c.algebraic_connectivity),
        "perron_branch_rho": _fmt(c.perron_branch_rho),
    }
    _emit(json.dumps(payload) + "\n", args.output)
    return 0


def _cmd_verify(args) -> int:
    if args.inputs:
        loaded = [trees.load_tree(f) for f in args.inputs]
        if args.suite == "tree":
            reports = []
            for f, t in zip(args.inputs, loaded):
                reports.extend(bounds.check_tree(t, f, tol=args.tol))
        elif args.suite == "sum":
            reports = bounds.check_sum(loaded, "sum(files)", tol=args.tol)
        elif args.suite == "product":
            if len(loaded) != 2:
                raise ValueError("verify --suite product needs two files")
            reports = bounds.check_product(*loaded, "product(files)",
                                           tol=args.tol)
        elif args.suite == "power":
            if len(loaded) != 1 or args.k is None:
                raise ValueError("verify --suite power needs one file and --k")
            reports = bounds.check_power(loaded[0], args.k, "power(file)",
                                         tol=args.tol)
        else:
            raise ValueError(f"suite {args.suite!r} takes no tree files")
    else:
        reports = bounds.run_suite(args.suite, tol=args.tol)
    _emit(bounds.reports_to_csv(reports), args.output)
    return 0 if all(r.passed for r in reports) else 1


def _cmd_ratio(args) -> int:
    params = None
    if args.params:
        params = [int(x) for x in args.params.split(",") if x.strip()]
    series = bounds.ratio_series(args.family, params, k=args.k)
    _emit(bounds.series_to_csv(series), args.output)
    return 0


_DISPATCH = {
    "gen": _cmd_gen,
    "matrix": _cmd_matrix,
    "spectral": _cmd_spectral,
    "classify": _cmd_classify,
    "verify": _cmd_verify,
    "ratio": _cmd_ratio,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors itself
        return 0 if exc.code in (0, None) else 2
    try:
        return _DISPATCH[args.command](args)
    except (ValueError, CapacityError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PowerIterationError, ClassificationAmbiguityError,
            OverflowError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
