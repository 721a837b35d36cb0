"""Command-line entry point: ``rewb <subcommand> ...``.

Exit status: 0 on success, 1 on a domain error (bad rewb, bad ref-word,
precondition violation, or crosscheck mismatches), 2 on usage errors.
Default machine budgets can be overridden with REWB_MAX_STEPS and
REWB_MAX_CELLS.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import machine as mc
from . import syntax as sx
from .construct import CapturedReferenceError, build_nesa, build_nsa
from .langlab import EXAMPLES, crosscheck, example, language_slice
from .larsen import label_note, larsen_nesa, larsen_rewb
from .refnfa import build_ref_nfa, enumerate_refwords, oracle_match
from .refword import deref, deref_values, format_refword, format_word, parse_refword, parse_word


class DomainError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _nonnegative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def default_budget() -> mc.Budget:
    base = mc.Budget()
    try:
        steps = int(os.environ.get("REWB_MAX_STEPS", base.max_steps))
        cells = int(os.environ.get("REWB_MAX_CELLS", base.max_cells))
        return mc.Budget(steps, cells)
    except ValueError as exc:
        raise DomainError(f"bad budget environment variable: {exc}")


def _budget(args) -> mc.Budget:
    base = default_budget()
    return mc.Budget(args.max_steps or base.max_steps, args.max_cells or base.max_cells)


def _add_budget(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-steps", type=_positive, help="search expansions (default 1000000)")
    p.add_argument("--max-cells", type=_positive, help="stack tape cells (default 10000)")


def _alphabet(text: str) -> tuple:
    try:
        letters = parse_word(text.replace(",", " "))
    except ValueError as exc:
        raise DomainError(f"bad alphabet: {exc}")
    if not letters:
        raise DomainError("alphabet is empty")
    return tuple(dict.fromkeys(letters))


def _parse_rewb(text: str) -> sx.Rewb:
    try:
        return sx.parse(text)
    except sx.RewbSyntaxError as exc:
        raise DomainError(f"cannot parse rewb: {exc}")


def _load_machine(path: str) -> mc.StackMachine:
    try:
        with open(path, encoding="utf-8") as fh:
            return mc.loads(fh.read())
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}")
    except (ValueError, KeyError, TypeError) as exc:
        raise DomainError(f"invalid machine file {path}: {exc}")


def _emit_machine(m: mc.StackMachine, args, out) -> None:
    text = mc.to_dot(m) if getattr(args, "dot", False) else mc.dumps(m) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_parse(args, out) -> int:
    ast = _parse_rewb(args.rewb)
    if args.json:
        out.write(json.dumps(sx.to_json(ast), indent=2) + "\n")
        return 0
    out.write(f"rewb: {sx.pretty_print(ast)}\n")
    out.write(f"k: {sx.max_label(ast)}\n")
    out.write(f"alphabet: {' '.join(sx.alphabet(ast)) or '(none)'}\n")
    out.write(f"labels: {' '.join(map(str, sorted(ast.var))) or '(none)'}\n")
    out.write(f"captured reference: {'yes' if sx.has_captured_reference(ast) else 'no'}\n")
    return 0


def cmd_deref(args, out) -> int:
    try:
        v = parse_refword(args.refword)
    except ValueError as exc:
        raise DomainError(f"cannot parse ref-word: {exc}")
    trace = deref_values(v)
    if args.trace:
        for r, (value, snap) in enumerate(zip(trace.values, trace.snapshots[1:]), 1):
            out.write(f"loop {r}: replaced by {format_refword(value)} -> {format_refword(snap)}\n")
    if trace.result is None:
        raise DomainError("dereference is undefined (an opening bracket is never closed)")
    out.write(format_word(trace.result) + "\n")
    return 0


def cmd_refwords(args, out) -> int:
    ast = _parse_rewb(args.rewb)
    words = enumerate_refwords(build_ref_nfa(ast), args.max_len)
    for v in sorted(words, key=lambda x: (len(x), x)):
        out.write(f"{format_refword(v)}\t{format_word(deref(v))}\n")
    return 0


def cmd_match(args, out) -> int:
    ast = _parse_rewb(args.rewb)
    try:
        w = parse_word(args.word)
    except ValueError as exc:
        raise DomainError(f"cannot parse word: {exc}")
    result = oracle_match(ast, w)
    if result.accepted:
        out.write(f"ACCEPT\nwitness: {format_refword(result.witness)}\n")
    else:
        out.write("REJECT\n")
    return 0


def cmd_compile(args, out) -> int:
    ast = _parse_rewb(args.rewb)
    alphabet = _alphabet(args.alphabet) if args.alphabet else None
    try:
        if args.command == "compile-nesa":
            m = build_nesa(ast, alphabet)
        else:
            m = build_nsa(ast, alphabet, prune=not args.no_prune)
    except (CapturedReferenceError, ValueError) as exc:
        raise DomainError(str(exc))
    _emit_machine(m, args, out)
    return 0


def cmd_run(args, out) -> int:
    m = _load_machine(args.machine)
    problems = mc.validate_flavor(m)
    if problems:
        raise DomainError(f"machine is not a valid {m.flavor}: {problems[0].reason}")
    try:
        w = parse_word(args.input)
    except ValueError as exc:
        raise DomainError(f"cannot parse input: {exc}")
    unknown = set(w) - set(m.input_alphabet)
    if unknown:
        raise DomainError(f"input uses symbols outside the alphabet: {' '.join(sorted(unknown))}")
    result = mc.accepts(m, w, _budget(args))
    out.write(f"{result.outcome}\n")
    if result.accepted and args.trace:
        out.write(mc.trace_render(result.trace, w) + "\n")
    elif not result.accepted:
        how = "search space exhausted" if result.exhausted else "step limit reached"
        out.write(f"({how} after {result.expansions} expansions)\n")
    return 0


def _acceptor(args):
    if args.example:
        return example(args.example)
    if args.machine:
        return _load_machine(args.machine)
    if args.rewb is None:
        raise DomainError("give a rewb, --machine FILE or --example NAME")
    return _parse_rewb(args.rewb)


def cmd_slice(args, out) -> int:
    acceptor = _acceptor(args)
    report = language_slice(acceptor, _alphabet(args.alphabet), args.max_len, _budget(args))
    if args.json:
        out.write(json.dumps(report.to_json(), indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(report.to_text() + "\n")
    return 0


def cmd_crosscheck(args, out) -> int:
    ast = _parse_rewb(args.rewb)
    report = crosscheck(ast, _alphabet(args.alphabet), args.max_len, with_nesa=not args.no_nesa)
    if args.json:
        out.write(json.dumps(report.to_json(), indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(report.to_text() + "\n")
    return 0 if report.ok else 1


def cmd_larsen(args, out) -> int:
    if args.nesa:
        _emit_machine(larsen_nesa(args.level), args, out)
        return 0
    ast = larsen_rewb(args.level)
    if args.json:
        out.write(json.dumps(sx.to_json(ast), indent=2) + "\n")
    else:
        out.write(sx.pretty_print(ast) + "\n")
        out.write(f"# {label_note(args.level)}\n")
    return 0


def cmd_export(args, out) -> int:
    if args.example:
        m = example(args.example)
        if not isinstance(m, mc.StackMachine):
            raise DomainError(f"example {args.example} is a rewb, not a machine")
    elif args.machine:
        m = _load_machine(args.machine)
    else:
        raise DomainError("give a machine file or --example NAME")
    args.dot = args.format == "dot"
    _emit_machine(m, args, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rewb",
        description="Regular expressions with backreferences and stack automata.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a rewb and show its properties")
    p.add_argument("rewb")
    p.add_argument("--json", action="store_true", help="print the AST as JSON")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("deref", help="dereference a ref-word, e.g. '[1 a ]1 1'")
    p.add_argument("refword")
    p.add_argument("--trace", action="store_true", help="show each replacement")
    p.set_defaults(func=cmd_deref)

    p = sub.add_parser("refwords", help="list ref-words of a rewb with their dereference")
    p.add_argument("rewb")
    p.add_argument("--max-len", type=_nonnegative, default=6)
    p.set_defaults(func=cmd_refwords)

    p = sub.add_parser("match", help="decide membership with the reference oracle")
    p.add_argument("rewb")
    p.add_argument("word", help="input word, '~' for the empty word")
    p.set_defaults(func=cmd_match)

    for name, text in (("compile-nsa", "nested stack automaton"), ("compile-nesa", "nonerasing stack automaton")):
        p = sub.add_parser(name, help=f"compile a rewb into a {text} (JSON)")
        p.add_argument("rewb")
        p.add_argument("--alphabet", help="extra input letters, e.g. 'ab'")
        p.add_argument("--dot", action="store_true", help="emit Graphviz instead of JSON")
        p.add_argument("-o", "--output", help="write to a file instead of stdout")
        if name == "compile-nsa":
            p.add_argument("--no-prune", action="store_true", help="keep every bookkeeping state")
        p.set_defaults(func=cmd_compile)

    p = sub.add_parser("run", help="run a machine (JSON file) on an input word")
    p.add_argument("machine")
    p.add_argument("input")
    p.add_argument("--trace", action="store_true")
    _add_budget(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("slice", help="accepted words up to a length bound")
    p.add_argument("rewb", nargs="?")
    p.add_argument("--machine", help="machine JSON file instead of a rewb")
    p.add_argument("--example", choices=EXAMPLES)
    p.add_argument("--alphabet", required=True)
    p.add_argument("--max-len", type=_nonnegative, required=True)
    p.add_argument("--json", action="store_true")
    _add_budget(p)
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("crosscheck", help="compare compiled machines with the oracle")
    p.add_argument("rewb")
    p.add_argument("--alphabet", required=True)
    p.add_argument("--max-len", type=_nonnegative, required=True)
    p.add_argument("--no-nesa", action="store_true", help="skip the nonerasing machine")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("larsen", help="Larsen hierarchy rewbs and machines")
    p.add_argument("--level", type=_nonnegative, required=True)
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--rewb", action="store_true", help="print x_i (default)")
    kind.add_argument("--nesa", action="store_true", help="print the machine A_i")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--dot", action="store_true")
    fmt.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_larsen)

    p = sub.add_parser("export", help="export a machine as DOT or JSON")
    p.add_argument("machine", nargs="?")
    p.add_argument("--example", choices=[e for e in EXAMPLES if e.endswith("nesa")])
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
