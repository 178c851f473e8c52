"""Command-line interface.

Exit codes: ``unify`` 0 unifiable / 1 not; ``classify`` 0 definite /
2 inconclusive; ``fuzz`` 1 on any oracle disagreement or soundness
violation; 3 for unreadable input or failed preconditions everywhere.
"""
from __future__ import annotations

import argparse
import sys

from .classify import classify
from .decompose import DecompositionError, decompose
from .harness import GenConfig, run_campaign
from .loops import ExtensionBuilder, ResourceLimitError
from .terms import SemiloopSpec, TermSyntaxError, format_term
from .unify import OccursCheck, unify

EXIT_BAD_INPUT = 3


def _read_semiloop(path: str) -> SemiloopSpec:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return SemiloopSpec.from_text(text)


def _natural(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def cmd_extend(args) -> int:
    sl = _read_semiloop(args.file)
    term = ExtensionBuilder(sl, args.node_budget).term(args.n)
    print(f"extendable: {format_term(term)}")
    print(f"fixed: {format_term(sl.fixed)}")
    return 0


def cmd_unify(args) -> int:
    sl = _read_semiloop(args.file)
    term = ExtensionBuilder(sl, args.node_budget).term(args.n)
    out = unify(term, sl.fixed)
    if out.unifiable:
        print("UNIFIABLE")
        print(out.mgu)
        return 0
    if isinstance(out, OccursCheck):
        print(f"OCCURS-CHECK {format_term(out.variable)}")
    else:
        print("CLASH")
    return 1


def cmd_classify(args) -> int:
    sl = _read_semiloop(args.file)
    c = classify(sl, args.bound)
    sys.stdout.write(c.to_text())
    return 0 if c.definite else 2


def cmd_decompose(args) -> int:
    sl = _read_semiloop(args.file)
    trace = decompose(sl, args.k, windowed=(args.op == "Dprime"))
    sys.stdout.write(trace.to_text())
    return 0


def cmd_fuzz(args) -> int:
    cfg = GenConfig(seed=args.seed, max_depth=args.max_depth, max_var_index=args.max_var_index,
                    recvar_positions=args.recvar_positions,
                    fixed_term_depth=args.fixed_term_depth)
    report = run_campaign(cfg, args.count, args.bound, workers=args.workers)
    text = report.to_text(timings=args.timings)
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semiloop", description="Loop and semiloop unification.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="semiloop file, or - for standard input")
        return sp

    sp = with_input("extend", "print the n-extension")
    sp.add_argument("--n", type=_natural, required=True)
    sp.add_argument("--node-budget", type=_positive, default=10**6)
    sp.set_defaults(func=cmd_extend)

    sp = with_input("unify", "unify the n-extension with the fixed term")
    sp.add_argument("--n", type=_natural, required=True)
    sp.add_argument("--node-budget", type=_positive, default=10**6)
    sp.set_defaults(func=cmd_unify)

    sp = with_input("classify", "decide loop unifiability where a sufficient condition applies")
    sp.add_argument("--bound", type=_positive, default=None,
                    help="last extension to probe (default max(2*delta+8, 32))")
    sp.set_defaults(func=cmd_classify)

    sp = with_input("decompose", "print the layer decomposition of the k-extension unifier")
    sp.add_argument("--k", type=_natural, required=True)
    sp.add_argument("--op", choices=("D", "Dprime"), default="Dprime")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("fuzz", help="classify random semiloops and cross-check with the oracle")
    sp.add_argument("--seed", type=_natural, required=True)
    sp.add_argument("--count", type=_natural, required=True)
    sp.add_argument("--bound", type=_positive, default=None)
    sp.add_argument("--out", default=None, help="also write the report to this file")
    sp.add_argument("--workers", type=_positive, default=1)
    sp.add_argument("--max-depth", type=_positive, default=3)
    sp.add_argument("--max-var-index", type=_positive, default=4)
    sp.add_argument("--recvar-positions", type=_positive, default=1)
    sp.add_argument("--fixed-term-depth", type=_natural, default=3)
    sp.add_argument("--timings", action="store_true",
                    help="append wall-clock figures (makes output non-reproducible)")
    sp.set_defaults(func=cmd_fuzz)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TermSyntaxError, DecompositionError, ResourceLimitError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
