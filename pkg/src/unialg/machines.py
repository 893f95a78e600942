"""Pointer machines: a read-only cyclic tape, N pointers, MOVE/SWAP steps.

A machine accepts a word when no run, from any configuration, is infinite.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Optional

from .encoding import Alphabet, EncodingError, PositionSet, Word, computation_term
from .flows import Flow, Permutation, Wiring, flow_tensor, perm_repr
from .terms import SYMBOLS, App, SymbolTable, prod

DIRECTIONS = ("l", "r")


class MachineError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass(frozen=True)
class TransitionRule:
    """``source -> target x perm``; after the swap slot k holds old slot perm(k)."""

    source: tuple
    target: tuple
    perm: Permutation

    def __str__(self):
        return f"trans {' '.join(self.source)} -> {' '.join(self.target)} perm {self.perm}"


@dataclass(frozen=True)
class PointerMachine:
    pointers: int
    states: tuple
    rules: tuple
    alphabet: Alphabet

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        # transitions form a set; repeats would double coefficients when compiled
        object.__setattr__(self, "rules", tuple(dict.fromkeys(self.rules)))
        if self.pointers < 1:
            raise MachineError("a machine needs at least one pointer")
        if len(set(self.states)) != len(self.states):
            raise MachineError(f"duplicate states in {self.states}")
        for q in self.states:
            if q in self.alphabet or q in ("*", "l", "r"):
                raise MachineError(f"state {q!r} clashes with a letter or reserved symbol")
        reads = set(self.alphabet.letters) | {"*"}
        for rule in self.rules:
            for c, d, s in (rule.source, rule.target):
                if c not in reads:
                    raise MachineError(f"{rule}: unknown symbol {c!r}")
                if d not in DIRECTIONS:
                    raise MachineError(f"{rule}: direction must be l or r, got {d!r}")
                if s not in self.states:
                    raise MachineError(f"{rule}: undeclared state {s!r}")
            if rule.perm.n != self.pointers:
                raise MachineError(f"{rule}: permutation must have {self.pointers} entries")

    def __str__(self):
        return format_machine(self)


@dataclass(frozen=True, order=True)
class Configuration:
    c: str
    d: str
    s: str
    positions: tuple

    def __str__(self):
        return f"({self.c}, {self.d}, {self.s}, {self.positions})"


# -- DSL ---------------------------------------------------------------------

def parse_machine(text: str) -> PointerMachine:
    pointers = None
    alphabet = None
    states = None
    rules = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        key, args = words[0], words[1:]
        try:
            if key == "pointers":
                if len(args) != 1 or not args[0].isdigit():
                    raise MachineError("usage: pointers N", lineno)
                pointers = int(args[0])
            elif key == "alphabet":
                alphabet = Alphabet(tuple(args))
            elif key == "states":
                states = tuple(args)
            elif key == "trans":
                rules.append((lineno, args))
            else:
                raise MachineError(f"unknown directive {key!r}", lineno)
        except EncodingError as e:
            raise MachineError(str(e), lineno) from None
    if pointers is None or alphabet is None or states is None:
        raise MachineError("machine needs 'pointers', 'alphabet' and 'states' lines")
    parsed = []
    for lineno, args in rules:
        # c d s -> c d s perm i1 ... iN
        if len(args) < 9 or args[3] != "->" or args[7] != "perm":
            raise MachineError("usage: trans c d s -> c d s perm i1 ... iN", lineno)
        images = args[8:]
        if len(images) != pointers:
            raise MachineError(f"perm has {len(images)} entries, expected {pointers}", lineno)
        try:
            perm = Permutation(tuple(int(i) for i in images))
        except ValueError as e:
            raise MachineError(f"perm is not a bijection: {e}", lineno) from None
        rule = TransitionRule(tuple(args[0:3]), tuple(args[4:7]), perm)
        try:
            PointerMachine(pointers, states, (rule,), alphabet)
        except MachineError as e:
            raise MachineError(str(e), lineno) from None
        parsed.append(rule)
    return PointerMachine(pointers, states, tuple(parsed), alphabet)


def format_machine(m: PointerMachine) -> str:
    lines = [
        f"pointers {m.pointers}",
        f"alphabet {' '.join(m.alphabet.letters)}",
        f"states {' '.join(m.states)}",
    ]
    lines.extend(str(r) for r in m.rules)
    return "\n".join(lines) + "\n"


# -- predicates --------------------------------------------------------------

def is_deterministic(m: PointerMachine) -> bool:
    sources = [r.source for r in m.rules]
    return len(set(sources)) == len(sources)


def is_reversible(m: PointerMachine) -> bool:
    targets = [r.target for r in m.rules]
    return is_deterministic(m) and len(set(targets)) == len(targets)


# -- simulation --------------------------------------------------------------

def configurations(m: PointerMachine, n: int) -> Iterable[Configuration]:
    """All configurations of (m, n), in lexicographic order."""
    letters = ("*",) + m.alphabet.letters
    for c, d, s in itertools.product(letters, DIRECTIONS, m.states):
        for pos in itertools.product(range(n + 1), repeat=m.pointers):
            yield Configuration(c, d, s, pos)


def _flip(d: str) -> str:
    return "r" if d == "l" else "l"


def step(m: PointerMachine, word: Word, conf: Configuration) -> set[Configuration]:
    n = len(word)
    p1 = conf.positions[0]
    if conf.c != word.symbol_at(p1):
        return set()
    # MOVE: the main pointer moves, direction flips, the new cell is read.
    p1 = (p1 - 1 if conf.d == "l" else p1 + 1) % (n + 1)
    moved = (p1,) + conf.positions[1:]
    key = (word.symbol_at(p1), _flip(conf.d), conf.s)
    # SWAP: every rule firing on the moved configuration.
    out = set()
    for rule in m.rules:
        if rule.source == key:
            c2, d2, s2 = rule.target
            pos = tuple(moved[rule.perm(i) - 1] for i in range(1, m.pointers + 1))
            out.add(Configuration(c2, d2, s2, pos))
    return out


def configuration_graph(m: PointerMachine, word: Word) -> dict:
    return {conf: step(m, word, conf) for conf in configurations(m, len(word))}


def accepts(m: PointerMachine, word: Word) -> bool:
    """True iff every run from every configuration is finite."""
    graph = configuration_graph(m, word)
    try:
        TopologicalSorter(graph).prepare()
    except CycleError:
        return False
    return True


def run(m: PointerMachine, word: Word, start: Configuration, limit: int) -> list:
    """Follow a deterministic machine from ``start``; stops on halt, repeat or ``limit``."""
    trace = [start]
    seen = {start}
    conf = start
    while len(trace) <= limit:
        nxt = step(m, word, conf)
        if not nxt:
            break
        if len(nxt) > 1:
            raise MachineError("run() needs a deterministic machine")
        (conf,) = nxt
        trace.append(conf)
        if conf in seen:
            break
        seen.add(conf)
    return trace


# -- compilation -------------------------------------------------------------

def encode_configuration(conf: Configuration, positions: PositionSet,
                         table: SymbolTable = SYMBOLS) -> App:
    slots = [positions.names[k] for k in conf.positions]
    return computation_term(conf.c, conf.d, conf.s, slots, table)


def decode_configuration(t, positions: PositionSet) -> Configuration:
    from .encoding import parse_computation_term

    parsed = parse_computation_term(t)
    if parsed is None:
        raise EncodingError(f"{t} is not a computation term")
    c, d, s, slots = parsed
    return Configuration(c, d, s, tuple(positions.names.index(a) for a in slots))


def _triple(c: str, d: str, s: str, table: SymbolTable):
    letter = App(table.star) if c == "*" else App(table.intern(c, 0, "alphabet"))
    return prod(letter, App(table.intern(d, 0, "direction")), App(table.intern(s, 0, "state")),
                table=table)


def compile_rule(rule: TransitionRule, table: SymbolTable = SYMBOLS) -> Flow:
    # [sigma] moves old slot sigma^-1(j) into slot j, so the rule's perm is inverted.
    core = Flow(_triple(*rule.target, table), _triple(*rule.source, table))
    return flow_tensor(core, perm_repr(rule.perm.inverse(), table))


def compile_machine(m: PointerMachine, table: SymbolTable = SYMBOLS) -> Wiring:
    """The S-observation summing one flow per transition rule."""
    return Wiring([compile_rule(r, table) for r in m.rules])
