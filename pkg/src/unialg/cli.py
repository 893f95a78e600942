"""Command-line workbench.

Exit status: 0 for success/ACCEPT, 1 for REJECT or a failed check, 2 for
usage and input errors.
"""
from __future__ import annotations

import argparse
import itertools
import os
import sys

from . import decider
from .encoding import Alphabet, EncodingError, PositionSet, Word, validate_observation, word_repr
from .flows import (
    FlowError,
    TermVector,
    format_vector,
    format_wiring,
    parse_wiring,
    wiring_action,
    wiring_mul,
)
from .machines import MachineError, accepts, compile_machine, parse_machine
from .terms import TermError, format_substitution, mgu, parse_term


class UsageError(Exception):
    pass


def _read_file(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _wiring(arg: str):
    if os.path.isfile(arg):
        return parse_wiring(_read_file(arg))
    if "<-" not in arg:
        raise UsageError(f"{arg!r} is neither a file nor an inline wiring")
    # inline wirings may separate flows with ';'
    return parse_wiring(arg.replace(";", "\n"))


def _positions(args, n):
    if getattr(args, "positions", None):
        return PositionSet(tuple(p.strip() for p in args.positions.split(",")))
    return PositionSet.default(n)


def _load_program(args):
    """(observation, alphabet, machine-or-None) from a .pm or wiring source."""
    if args.source.endswith(".pm"):
        m = parse_machine(_read_file(args.source))
        return compile_machine(m), m.alphabet, m
    phi = _wiring(args.source)
    if args.alphabet:
        alphabet = Alphabet.parse(args.alphabet)
    else:
        letters = list(validate_observation(phi).alphabet)
        text = args.word or ""
        extra = text.split(",") if "," in text else list(text)
        letters += sorted(set(x.strip() for x in extra if x.strip()) - set(letters))
        if not letters:
            raise UsageError("cannot infer an alphabet; pass --alphabet")
        alphabet = Alphabet(tuple(letters))
    return phi, alphabet, None


def cmd_mgu(args, out):
    theta = mgu(parse_term(args.t), parse_term(args.u))
    print("NONE" if theta is None else format_substitution(theta), file=out)
    return 0


def cmd_compose(args, out):
    print(format_wiring(wiring_mul(_wiring(args.f), _wiring(args.g))), file=out)
    return 0


def cmd_act(args, out):
    v = TermVector([parse_term(args.t)])
    print(format_vector(wiring_action(_wiring(args.f), v)), file=out)
    return 0


def cmd_word_encode(args, out):
    alphabet = Alphabet.parse(args.alphabet)
    word = Word.parse(args.word, alphabet)
    print(format_wiring(word_repr(word, _positions(args, len(word)))), file=out)
    return 0


def cmd_compile(args, out):
    m = parse_machine(_read_file(args.machine))
    print(format_wiring(compile_machine(m)), file=out)
    return 0


def cmd_simulate(args, out):
    m = parse_machine(_read_file(args.machine))
    ok = accepts(m, Word.parse(args.word, m.alphabet))
    print("ACCEPT" if ok else "REJECT", file=out)
    return 0 if ok else 1


def cmd_decide(args, out):
    phi, alphabet, _ = _load_program(args)
    word = Word.parse(args.word, alphabet)
    positions = _positions(args, len(word))
    if args.method == "graph":
        g = decider.build_action_graph(phi, word, positions)
        ok = decider.decide_nilpotent_graph(g, phi)
        if args.dot:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(decider.to_dot(g))
    else:
        ok = decider.power_nilpotency(phi, word, positions).nilpotent
    print("ACCEPT" if ok else "REJECT", file=out)
    return 0 if ok else 1


def cmd_graph(args, out):
    phi, alphabet, _ = _load_program(args)
    word = Word.parse(args.word, alphabet)
    g = decider.build_action_graph(phi, word, _positions(args, len(word)))
    dot = decider.to_dot(g)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(dot)
    else:
        out.write(dot)
    return 0


def cmd_check(args, out):
    m = parse_machine(_read_file(args.machine))
    phi = compile_machine(m)
    letters = m.alphabet.letters
    rows = []
    for n in range(args.max_len + 1):
        for w in itertools.product(letters, repeat=n):
            word = Word(m.alphabet, w)
            sim = accepts(m, word)
            graph = decider.decide_membership(phi, word, method="graph")
            power = decider.power_nilpotency(phi, word).nilpotent
            rows.append((str(word) or "(empty)", sim, graph, power))
    verdict = {True: "ACCEPT", False: "REJECT"}
    width = max(len(r[0]) for r in rows)
    print(f"{'word':<{width}}  simulator  graph   power   agree", file=out)
    bad = 0
    for name, sim, graph, power in rows:
        agree = sim == graph == power
        bad += not agree
        print(f"{name:<{width}}  {verdict[sim]:<9}  {verdict[graph]:<6}  {verdict[power]:<6}  "
              f"{'yes' if agree else 'NO'}", file=out)
    print(f"{len(rows) - bad}/{len(rows)} words agree", file=out)
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unialg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("mgu", help="most general unifier of two terms")
    s.add_argument("t")
    s.add_argument("u")
    s.set_defaults(func=cmd_mgu)

    s = sub.add_parser("compose", help="product of two wirings (files or ';'-separated text)")
    s.add_argument("f")
    s.add_argument("g")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("act", help="action of a wiring on a closed term")
    s.add_argument("f")
    s.add_argument("t")
    s.set_defaults(func=cmd_act)

    s = sub.add_parser("word-encode", help="print the wiring representing a word")
    s.add_argument("--alphabet", required=True)
    s.add_argument("--word", required=True)
    s.add_argument("--positions")
    s.set_defaults(func=cmd_word_encode)

    s = sub.add_parser("compile", help="compile a pointer machine to an observation")
    s.add_argument("machine")
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("simulate", help="run the pointer-machine simulator")
    s.add_argument("machine")
    s.add_argument("--word", required=True)
    s.set_defaults(func=cmd_simulate)

    for verb, func in (("decide", cmd_decide), ("graph", cmd_graph)):
        s = sub.add_parser(verb, help="decide membership" if verb == "decide" else "export the action graph")
        s.add_argument("source", help="machine (.pm) or observation wiring")
        s.add_argument("--word", required=True)
        s.add_argument("--alphabet")
        s.add_argument("--positions")
        s.add_argument("--dot", help="write the action graph in DOT format")
        if verb == "decide":
            s.add_argument("--method", choices=("graph", "power"), default="graph")
        s.set_defaults(func=func)

    s = sub.add_parser("check", help="cross-validate simulator, graph and power deciders")
    s.add_argument("machine")
    s.add_argument("--max-len", type=int, default=4)
    s.set_defaults(func=cmd_check)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, TermError, FlowError, EncodingError, MachineError,
            decider.DeciderError, OSError) as e:
        print(f"unialg {args.verb}: error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
