"""Command-line front end: ``folsem eval | parse | check``.

Exit codes for ``eval``: 0 answers found, 1 finite failure, 2 the outcome
contains error, 3 malformed input.  ``check`` exits 0 iff no check failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .interpretations import UnsupportedOracle, load_interpretation
from .oracle import CHECKS, run_suite
from .semantics import MUTATIONS, evaluate_formula
from .syntax import (
    OPEN_SIGNATURE,
    parse_formula,
    parse_subst,
    print_formula,
    print_subst,
    print_term,
    render_tree,
)
from .terms import MalformedInput

EXIT_OK, EXIT_FAILURE, EXIT_ERROR, EXIT_MALFORMED = 0, 1, 2, 3


def _diagnostic(exc: MalformedInput, text: str | None) -> str:
    lines = [f"error: {exc.message}"]
    if exc.span is not None and text is not None and "\n" not in text:
        raw = text.encode("utf-8")
        start = len(raw[: exc.span.start].decode("utf-8", "replace"))
        width = max(1, len(raw[exc.span.start : exc.span.end].decode("utf-8", "replace")))
        lines.append(f"  {text}")
        lines.append("  " + " " * start + "^" * width)
    elif exc.span is not None:
        lines.append(f"  at bytes {exc.span.start}..{exc.span.end}")
    return "\n".join(lines)


def _subst_json(theta) -> dict:
    return {str(x): print_term(t) for x, t in theta.items()}


def cmd_eval(args) -> int:
    text = None
    try:
        interp = load_interpretation(args.interp)
        if args.query_file is not None:
            try:
                with open(args.query_file, encoding="utf-8") as fh:
                    text = fh.read().strip()
            except OSError as exc:
                raise MalformedInput(f"cannot read query file: {exc}") from exc
        else:
            text = args.query
        phi = parse_formula(text, interp.signature)
        text = args.subst
        theta = parse_subst(args.subst, interp.algebra)
        text = None
        out = evaluate_formula(phi, theta, interp)
    except MalformedInput as exc:
        print(_diagnostic(exc, text), file=sys.stderr)
        return EXIT_MALFORMED

    if args.format == "json":
        doc = {
            "answers": [
                {"full": _subst_json(a.full), "delta": _subst_json(a.delta)} for a in out.answers
            ],
            "error": out.error,
        }
        print(json.dumps(doc, sort_keys=True))
    else:
        for a in out.answers:
            print(f"{print_subst(a.full)}  delta {print_subst(a.delta)}")
        if out.error:
            print("error")
        if out.is_failure:
            print("fail")

    if out.error:
        return EXIT_ERROR
    if out.answers:
        return EXIT_OK
    return EXIT_FAILURE


def cmd_parse(args) -> int:
    try:
        sig = load_interpretation(args.interp).signature if args.interp else OPEN_SIGNATURE
        phi = parse_formula(args.query, sig)
    except MalformedInput as exc:
        print(_diagnostic(exc, args.query), file=sys.stderr)
        return EXIT_MALFORMED
    print(print_formula(phi))
    if args.tree:
        print(render_tree(phi))
    return EXIT_OK


def cmd_check(args) -> int:
    if args.count < 0:
        print("error: --count must be non-negative", file=sys.stderr)
        return EXIT_MALFORMED
    try:
        interp = load_interpretation(args.interp) if args.interp else None
        result = run_suite(
            args.count,
            args.seed,
            interp=interp,
            checks=args.checks or CHECKS,
            mutations=args.mutate or (),
            jobs=args.jobs,
        )
    except UnsupportedOracle as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except MalformedInput as exc:
        print(_diagnostic(exc, None), file=sys.stderr)
        return EXIT_MALFORMED

    summary = result.summary()
    for name, counts in summary.items():
        verdict = "FAIL" if counts["fail"] else "ok"
        print(
            f"{name:14s} {verdict:4s} pass={counts['pass']} fail={counts['fail']} "
            f"not-applicable={counts['n/a']}"
        )
    failures = result.failures
    for r in failures[:5]:
        print(f"  counterexample [{r.check}] seed={r.seed}: {json.dumps(r.counterexample, sort_keys=True)}")
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(result.to_json())
            fh.write("\n")
    print(f"{args.count} instances, seed {args.seed}: {len(failures)} failures")
    return EXIT_OK if not failures else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="folsem", description="Run first-order formulas as programs over an interpretation."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a query")
    ev.add_argument("--interp", required=True, help="interpretation JSON file, or 'int'")
    src = ev.add_mutually_exclusive_group(required=True)
    src.add_argument("--query", help="query text")
    src.add_argument("--query-file", help="file containing the query")
    ev.add_argument("--subst", default="{}", help="initial substitution, e.g. '{x/1}'")
    ev.add_argument("--format", choices=("text", "json"), default="text")
    ev.set_defaults(func=cmd_eval)

    pa = sub.add_parser("parse", help="print the canonical form of a query")
    pa.add_argument("--query", required=True)
    pa.add_argument("--interp", help="resolve symbols against this interpretation")
    pa.add_argument("--tree", action="store_true", help="also print the syntax tree")
    pa.set_defaults(func=cmd_parse)

    ch = sub.add_parser("check", help="run the soundness and notes suites")
    ch.add_argument("--count", type=int, default=1000)
    ch.add_argument("--seed", type=int, required=True)
    ch.add_argument("--report", help="write the JSON report here")
    ch.add_argument("--interp", help="check formulas over this (finite) interpretation")
    ch.add_argument("--check", dest="checks", action="append", choices=CHECKS)
    ch.add_argument(
        "--mutate", action="append", choices=MUTATIONS, help="enable a deliberate evaluator defect"
    )
    ch.add_argument("--jobs", type=int, default=1)
    ch.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
