"""Command line entry point: ``dominion construct | gamma | bounds | verify-paper``.

Exit codes: 0 success, 2 usage, 3 validation, 4 budget, 5 theorem-check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bounds import evaluate_bounds
from .designs import (
    Design,
    DesignError,
    affine_plane,
    complement,
    cyclic_design,
    decode,
    dual,
    encode,
    has_repeated_blocks,
    projective_plane,
    residual,
)
from .harness import verify_paper
from .incidence import incidence_graph
from .solver import BudgetExceeded, classify_neatness, enumerate_minimum_dominating_sets, minimum_domination

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_BUDGET, EXIT_THEOREM = 0, 2, 3, 4, 5


def _read_design(path: str) -> Design:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return decode(text, name=path)


def _parse_base(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad base block {text!r}") from None


def cmd_construct(args) -> int:
    kind = args.kind
    if kind in ("pg", "ag"):
        q = int(args.arg)
        d = projective_plane(q) if kind == "pg" else affine_plane(q)
    elif kind == "cyclic":
        if not args.base:
            print("cyclic needs at least one --base", file=sys.stderr)
            return EXIT_USAGE
        d = cyclic_design(int(args.arg), args.base)
    else:
        src = _read_design(args.arg)
        if kind == "complement":
            d = complement(src)
        elif kind == "dual":
            d = dual(src)
        else:
            d = residual(src, args.block)
    text = encode(d)
    summary = f"{d.name}: {d.params}"
    if has_repeated_blocks(d):
        summary += " (repeated blocks)"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(summary)
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)
    return EXIT_OK


def cmd_gamma(args) -> int:
    d = _read_design(args.design)
    g = incidence_graph(d)
    res = minimum_domination(g, args.budget, args.threads)
    if not res.complete:
        print(f"budget exhausted: {res.lower_bound} <= gamma <= {res.gamma}")
        return EXIT_BUDGET
    print(f"design: {d.params}")
    print(f"gamma = {res.gamma}")
    print("witness: " + " ".join(g.label(u) for u in range(g.n) if res.witness >> u & 1))
    print(f"nodes explored: {res.nodes_explored}")
    if args.neat:
        rep = classify_neatness(d, args.budget, args.threads)
        print(f"minimum dominating sets: {rep.count_mds}")
        print(f"neat minimum dominating sets: {rep.count_neat}")
        print(f"neat: {str(rep.is_neat_design).lower()}")
        print(f"super-neat: {str(rep.is_super_neat).lower()}")
    elif args.enumerate:
        sets = enumerate_minimum_dominating_sets(g, res.gamma, args.budget, args.threads)
        print(f"minimum dominating sets: {len(sets)}")
    if args.list:
        sets = enumerate_minimum_dominating_sets(g, res.gamma, args.budget, args.threads)
        for S in sets:
            print("  " + " ".join(g.label(u) for u in range(g.n) if S >> u & 1))
    return EXIT_OK


def cmd_bounds(args) -> int:
    d = _read_design(args.design)
    gamma = None
    if args.solve:
        res = minimum_domination(incidence_graph(d), args.budget, args.threads)
        if not res.complete:
            print(f"budget exhausted: {res.lower_bound} <= gamma <= {res.gamma}", file=sys.stderr)
            return EXIT_BUDGET
        gamma = res.gamma
    rep = evaluate_bounds(d, gamma)
    out = {
        "id": d.name,
        "params": d.params.as_dict(),
        "gamma": gamma,
        "bounds": rep.to_json(),
        "point_count_curve": rep.point_count_curve,
        "superneat_sufficient": rep.superneat_sufficient,
        "status": rep.status,
    }
    if rep.biplane_line_table:
        out["biplane_line_bounds"] = [list(row) for row in rep.biplane_line_table]
    print(json.dumps(out, indent=2))
    return EXIT_THEOREM if rep.violated else EXIT_OK


def cmd_verify_paper(args) -> int:
    def progress(entry):
        for c in entry.checks:
            print(f"{c.status.upper():8s} {entry.id:45s} {c.name:30s} {c.seconds:8.3f}s  {c.detail}")
        sys.stdout.flush()

    report = verify_paper(
        max_q=args.max_q,
        extra_designs=[Path(p) for p in args.design],
        budget=args.budget,
        threads=args.threads,
        progress=None if args.quiet else progress,
    )
    if args.json:
        Path(args.json).write_text(json.dumps(report.to_json(), indent=2) + "\n", encoding="utf-8")
    counts = report.counts()
    print(", ".join(f"{k}: {v}" for k, v in counts.items()))
    return report.exit_code()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dominion", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def solver_opts(p):
        p.add_argument("--budget", type=int, default=None, help="node budget (default: $DOMINION_NODE_BUDGET or 1e9)")
        p.add_argument("--threads", type=int, default=1, help="worker processes for the search")

    p = sub.add_parser("construct", help="build a design and write it in the text format")
    p.add_argument("kind", choices=["pg", "ag", "cyclic", "complement", "residual", "dual"])
    p.add_argument("arg", help="plane order q, cyclic modulus v, or an input design file")
    p.add_argument("--base", type=_parse_base, action="append", help="comma-separated base block (cyclic)")
    p.add_argument("--block", type=int, default=0, help="block index removed by 'residual'")
    p.add_argument("-o", "--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("gamma", help="domination number of a design's incidence graph")
    p.add_argument("design")
    p.add_argument("--enumerate", action="store_true", help="count all minimum dominating sets")
    p.add_argument("--neat", action="store_true", help="classify neat / super-neat")
    p.add_argument("--list", action="store_true", help="print every minimum dominating set")
    solver_opts(p)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("bounds", help="evaluate closed-form bounds as JSON")
    p.add_argument("design")
    p.add_argument("--solve", action="store_true", help="compute gamma and judge each bound")
    solver_opts(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify-paper", help="run the full verification suite")
    p.add_argument("--max-q", type=int, default=3, help="largest plane order included")
    p.add_argument("--json", help="write the JSON report here")
    p.add_argument("--design", action="append", default=[], help="extra design file to include")
    p.add_argument("--quiet", action="store_true")
    solver_opts(p)
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DesignError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
