"""Command-line interface.

Exit codes
----------
0  success
1  I/O error, parse error or invalid input
2  pattern graph is not chordal
3  a clique submatrix is not PSD
4  maximal-rank precondition violated (``pinv --method banachiewicz``)
5  block pseudoinverse disagrees with the eigenvalue-based one

Data and reports go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import asdict

import numpy as np

from .chordal import clique_tree, is_chordal, maximal_cliques, pattern_graph
from .completion import (
    CliqueNotPSDError,
    CompletionError,
    NotChordalError,
    complete,
    verify_det_maximality,
    verify_pinv_zero_pattern,
)
from .fileio import ParseError, format_partial, format_report, read_partial, write_partial
from .linalg import DEFAULT_TOL, TolerancePolicy, numerical_rank, pinv
from .semidefinite import PreconditionError, banachiewicz_pinv, gendet, is_maximal_rank

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_CHORDAL = 2
EXIT_CLIQUE_NOT_PSD = 3
EXIT_NOT_MAXIMAL_RANK = 4
EXIT_MISMATCH = 5

PINV_CROSS_RTOL = 1e-8


def _one_based(vertices) -> str:
    return "{" + ", ".join(str(v + 1) for v in vertices) + "}"


def _err(message: str) -> None:
    print(f"psdcomplete: {message}", file=sys.stderr)


def _policy(args) -> TolerancePolicy:
    if getattr(args, "tol", None) is None:
        return DEFAULT_TOL
    return TolerancePolicy(rank_rtol=args.tol, psd_rtol=args.tol, zero_atol=DEFAULT_TOL.zero_atol)


def _read(path):
    return read_partial(path)


def _read_full(path):
    P = _read(path)
    if not P.is_complete:
        missing = [(i + 1, j + 1) for i, j in P.unspecified_positions()]
        raise ValueError(f"{path}: input must be fully specified; missing entries {missing[:10]}")
    return P.entries


def _write(path, P, comments=()):
    if path == "-":
        sys.stdout.write(format_partial(P, comments))
    else:
        write_partial(path, P, comments)


def cmd_check(args) -> int:
    G = pattern_graph(_read(args.input))
    result = is_chordal(G)
    fields = {"chordal": result.chordal}
    if not result.chordal:
        lines = ["chordal: no", "chordless cycle: " + " - ".join(str(v + 1) for v in result.witness)]
        print(format_report(lines, fields), end="")
        return EXIT_NOT_CHORDAL
    cliques = maximal_cliques(G, result.peo)
    tree = clique_tree(cliques)
    lines = ["chordal: yes", f"maximal cliques ({len(cliques)}):"]
    lines += [f"  C{i + 1} = {_one_based(c)}" for i, c in enumerate(cliques)]
    lines.append("clique graph:")
    lines += [f"  C{i + 1} -- C{j + 1}  separator {_one_based(s)}" for i, j, s in tree.intersection_edges]
    lines.append("clique tree merge order:")
    lines += [f"  C{s.parent + 1} -> C{s.child + 1}  separator {_one_based(s.separator)}" for s in tree.merge_order]
    fields["cliques"] = len(cliques)
    print(format_report(lines, fields), end="")
    return EXIT_OK


def _tolerance_fields(tol: TolerancePolicy) -> dict:
    return {f"tol_{k}": v for k, v in asdict(tol).items()}


def cmd_complete(args) -> int:
    tol = _policy(args)
    P = _read(args.input)
    report = complete(P, tol)
    for w in report.warnings:
        _err(f"warning: {w}")
    _write(args.output, report.completed, comments=[f"completion of {args.input}"])

    fields = {
        "chordal": True,
        "psd": report.psd,
        "rank": report.rank,
        "gendet": report.gendet_value,
        "rank_additive": report.rank_additive,
        "hypotheses_hold": report.hypotheses_hold,
        "pinv_zero_ok": report.pinv_zero_pattern_ok,
    }
    lines = [f"completed {P.n}x{P.n} matrix over {len(report.cliques)} cliques"]
    if args.verify:
        zeros = verify_pinv_zero_pattern(P, report.completed, tol)
        maximality = verify_det_maximality(P, report.completed, tol, trials=args.trials, rng=args.seed)
        fields["pinv_zero_max_ratio"] = zeros.max_ratio
        fields["det_maximal"] = maximality.status
        fields["det_maximal_admissible"] = maximality.admissible
        lines.append(f"determinant maximality: {maximality.status} "
                     f"({maximality.admissible} of {maximality.sampled} perturbations admissible)")
    fields.update(_tolerance_fields(tol))
    text = format_report(lines, fields)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.output != "-":
        print(text, end="")
    return EXIT_OK


def cmd_gendet(args) -> int:
    tol = _policy(args)
    H = _read_full(args.input)
    print(format_report([], {"gendet": gendet(H, tol), "rank": numerical_rank(H, tol), **_tolerance_fields(tol)}),
          end="")
    return EXIT_OK


def cmd_pinv(args) -> int:
    tol = _policy(args)
    H = _read_full(args.input)
    reference = pinv(H, tol)
    result = reference
    if args.method == "banachiewicz":
        if args.split is None:
            raise ValueError("--method banachiewicz requires --split")
        if not 1 <= args.split < H.shape[0]:
            raise ValueError(f"--split must lie in 1..{H.shape[0] - 1}")
        try:
            if not is_maximal_rank(H, args.split, tol):
                raise PreconditionError(f"matrix is not of maximal rank for split {args.split}")
            result = banachiewicz_pinv(H, args.split, tol)
        except PreconditionError as exc:
            _err(str(exc))
            return EXIT_NOT_MAXIMAL_RANK
        diff = np.linalg.norm(result - reference)
        scale = max(np.linalg.norm(reference), np.finfo(float).tiny)
        if diff > PINV_CROSS_RTOL * scale:
            _err(f"block pseudoinverse differs from eigenvalue pseudoinverse (relative {diff / scale:.3e})")
            return EXIT_MISMATCH
    _write(args.output, result, comments=[f"pseudoinverse of {args.input} ({args.method})"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="psdcomplete", description="PSD completion of partial Hermitian matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_tol(p):
        p.add_argument("--tol", type=float, default=None,
                       help="relative tolerance for rank and PSD tests (default 1e-9)")
        return p

    p = sub.add_parser("check", help="test chordality, list cliques and the clique tree")
    p.add_argument("input")
    p.set_defaults(func=cmd_check)

    p = with_tol(sub.add_parser("complete", help="complete a partial matrix"))
    p.add_argument("input")
    p.add_argument("output", help="output file, '-' for stdout")
    p.add_argument("--verify", action="store_true", help="also run the uniqueness checks")
    p.add_argument("--report", help="write the report to this file")
    p.add_argument("--trials", type=int, default=100, help="perturbations for --verify")
    p.add_argument("--seed", type=int, default=0, help="random seed for --verify")
    p.set_defaults(func=cmd_complete)

    p = with_tol(sub.add_parser("gendet", help="generalized determinant and rank"))
    p.add_argument("input")
    p.set_defaults(func=cmd_gendet)

    p = with_tol(sub.add_parser("pinv", help="Moore-Penrose pseudoinverse"))
    p.add_argument("input")
    p.add_argument("output", help="output file, '-' for stdout")
    p.add_argument("--method", choices=("eig", "banachiewicz"), default="eig")
    p.add_argument("--split", type=int, help="size of the leading block for banachiewicz")
    p.set_defaults(func=cmd_pinv)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotChordalError as exc:
        _err("pattern is not chordal; chordless cycle " + " - ".join(str(v + 1) for v in exc.witness))
        return EXIT_NOT_CHORDAL
    except CliqueNotPSDError as exc:
        _err(f"clique {_one_based(exc.clique)} is not positive semidefinite")
        return EXIT_CLIQUE_NOT_PSD
    except (ParseError, OSError, ValueError, CompletionError) as exc:
        _err(str(exc))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
