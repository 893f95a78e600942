"""Word representations, S-observations and computation spaces.

Computation terms are grouped as ``(c.(d.q)) . (a1.(a2.(... .(aN.*))))``:
the letter/direction/state triple on the left of the outer product, the
pointer positions on the right, slot 1 being the main pointer.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .flows import Flow, Wiring, is_concrete
from .terms import (
    SYMBOLS,
    App,
    Symbol,
    SymbolTable,
    Term,
    Var,
    format_term,
    prod,
)

RESERVED = ("*", "l", "r")


class EncodingError(ValueError):
    pass


class ObservationError(EncodingError):
    def __init__(self, flow: Optional[Flow], reason: str):
        where = f"flow {flow}: " if flow is not None else ""
        super().__init__(where + reason)
        self.flow = flow
        self.reason = reason


def _check_constant_name(name: str, what: str):
    if name in RESERVED:
        raise EncodingError(f"{what} {name!r} is reserved")
    if not name or not name[0].islower() or not name.replace("_", "a").isalnum():
        raise EncodingError(f"{what} {name!r} must be an identifier with a lowercase initial")


@dataclass(frozen=True)
class Alphabet:
    letters: tuple

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        if not letters:
            raise EncodingError("alphabet must be nonempty")
        if len(set(letters)) != len(letters):
            raise EncodingError(f"duplicate letters in alphabet {letters}")
        for a in letters:
            _check_constant_name(a, "letter")

    @classmethod
    def parse(cls, text: str) -> "Alphabet":
        return cls(tuple(x.strip() for x in text.split(",") if x.strip()))

    def __len__(self):
        return len(self.letters)

    def __contains__(self, letter):
        return letter in self.letters

    def __iter__(self):
        return iter(self.letters)


@dataclass(frozen=True)
class Word:
    alphabet: Alphabet
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        for c in self.letters:
            if c not in self.alphabet:
                raise EncodingError(f"letter {c!r} is not in the alphabet {self.alphabet.letters}")

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet) -> "Word":
        """``abba`` splits into characters, ``a,bb,a`` on commas."""
        text = text.strip()
        if "," in text:
            letters = tuple(x.strip() for x in text.split(","))
        else:
            letters = tuple(text)
        return cls(alphabet, letters)

    def __len__(self):
        return len(self.letters)

    def symbol_at(self, k: int) -> str:
        """Tape content at position k (mod n+1); position 0 holds ``*``."""
        k %= len(self.letters) + 1
        return "*" if k == 0 else self.letters[k - 1]

    def __str__(self):
        if all(len(c) == 1 for c in self.letters):
            return "".join(self.letters)
        return ",".join(self.letters)


@dataclass(frozen=True)
class PositionSet:
    names: tuple

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise EncodingError("need at least one position constant")
        if len(set(names)) != len(names):
            raise EncodingError(f"position constants must be distinct: {names}")
        for p in names:
            _check_constant_name(p, "position")

    @classmethod
    def default(cls, n: int) -> "PositionSet":
        return cls(tuple(f"p{i}" for i in range(n + 1)))

    def __len__(self):
        return len(self.names)

    def symbols(self, table: SymbolTable = SYMBOLS) -> list[Symbol]:
        return [table.intern(p, 0, "position") for p in self.names]


def _letter(name: str, table: SymbolTable) -> App:
    if name == "*":
        return App(table.star)
    return App(table.intern(name, 0, "alphabet"))


def word_repr(word: Word, positions: Optional[PositionSet] = None,
              table: SymbolTable = SYMBOLS) -> Wiring:
    """Cyclic tape of ``word``: ``2(n+1)`` flows, position 0 holding ``*``."""
    n = len(word)
    if positions is None:
        positions = PositionSet.default(n)
    if len(positions) != n + 1:
        raise EncodingError(f"word of length {n} needs {n + 1} positions, got {len(positions)}")
    ps = [App(s) for s in positions.symbols(table)]
    cs = [_letter("*", table)] + [_letter(c, table) for c in word.letters]
    x, y = Var("X"), Var("Y")
    left, right = App(table.left), App(table.right)
    flows = []
    for i in range(n + 1):
        j = (i + 1) % (n + 1)
        u = prod(prod(cs[i], right, x, table=table), prod(ps[i], y, table=table), table=table)
        v = prod(prod(cs[j], left, x, table=table), prod(ps[j], y, table=table), table=table)
        flows.append(Flow(u, v))
        flows.append(Flow(v, u))
    return Wiring(flows)


# -- observations ------------------------------------------------------------

@dataclass(frozen=True)
class ObservationParams:
    arity: int
    states: tuple
    alphabet: tuple = ()


def _is_constant(t: Term) -> bool:
    return isinstance(t, App) and not t.args


def _split_triple(t: Term, flow: Flow, side: str):
    if not (isinstance(t, App) and t.sym.kind == "product"):
        raise ObservationError(flow, f"{side} must be a product (c.d.q).(positions)")
    triple, rest = t.args
    if not (isinstance(triple, App) and triple.sym.kind == "product"):
        raise ObservationError(flow, f"{side}: first component must be c.(d.q)")
    c, dq = triple.args
    if not (isinstance(dq, App) and dq.sym.kind == "product"):
        raise ObservationError(flow, f"{side}: first component must be c.(d.q)")
    d, q = dq.args
    if not _is_constant(c) or c.sym.kind in ("direction", "product", "position"):
        raise ObservationError(flow, f"{side}: letter slot must be a letter or *, got {format_term(c)}")
    if not _is_constant(d) or d.sym.kind != "direction":
        raise ObservationError(flow, f"{side}: direction slot must be l or r, got {format_term(d)}")
    if not _is_constant(q) or q.sym.kind in ("direction", "star", "product", "position"):
        raise ObservationError(flow, f"{side}: state slot must be a state constant, got {format_term(q)}")
    return c.sym, q.sym, rest


def _slot_list(t: Term, flow: Flow, side: str):
    """Unfold ``x1.(x2.(... .(xN.y)))`` into ([x1..xN], y)."""
    slots = []
    while isinstance(t, App) and t.sym.kind == "product":
        x, t = t.args
        if not isinstance(x, Var):
            raise ObservationError(flow, f"{side}: permutation slot {format_term(x)} is not a variable")
        slots.append(x)
    if not isinstance(t, Var):
        raise ObservationError(flow, f"{side}: permutation part must end in a variable")
    if not slots:
        raise ObservationError(flow, f"{side}: empty permutation part")
    return slots, t


def observation_permutation(flow: Flow):
    """The permutation image sequence of a validated observation flow.

    Slot i of the head holds the variable found in tail slot ``images[i]``.
    """
    _, _, head_rest = _split_triple(flow.head, flow, "head")
    _, _, tail_rest = _split_triple(flow.tail, flow, "tail")
    hs, _ = _slot_list(head_rest, flow, "head")
    ts, _ = _slot_list(tail_rest, flow, "tail")
    return tuple(ts.index(x) + 1 for x in hs)


def validate_observation(phi: Wiring, alphabet: Optional[Sequence[str]] = None) -> ObservationParams:
    """Check that ``phi`` is an S-observation and return N(phi), S(phi).

    Raises :class:`ObservationError` naming the first offending flow.
    """
    if not is_concrete(phi):
        bad = next(f for f, c in phi.items() if c != 1)
        raise ObservationError(bad, "coefficient is not 1 (observation must be concrete)")
    given = tuple(alphabet or ())
    letters: set[str] = set()
    states: set[str] = set()
    arity = None
    for f in sorted(phi, key=str):
        c2, q2, head_rest = _split_triple(f.head, f, "head")
        c1, q1, tail_rest = _split_triple(f.tail, f, "tail")
        hs, hy = _slot_list(head_rest, f, "head")
        ts, ty = _slot_list(tail_rest, f, "tail")
        if len(set(hs) | {hy}) != len(hs) + 1:
            raise ObservationError(f, "head permutation variables must be distinct")
        if len(hs) != len(ts) or set(hs) != set(ts) or hy != ty:
            raise ObservationError(f, "tail slots must be a permutation of the head slots")
        if arity is None:
            arity = len(hs)
        elif arity != len(hs):
            raise ObservationError(f, f"permutation width {len(hs)} differs from {arity}")
        for c in (c1, c2):
            if c.kind != "star":
                letters.add(c.name)
        states.update((q1.name, q2.name))
    clash = letters & states
    if clash:
        raise ObservationError(None, f"symbols used both as letters and states: {sorted(clash)}")
    if given:
        outside = letters - set(given)
        if outside:
            raise ObservationError(None, f"letters {sorted(outside)} are not in the alphabet {given}")
        clash = states & set(given)
        if clash:
            raise ObservationError(None, f"states {sorted(clash)} collide with alphabet letters")
    all_letters = given + tuple(sorted(letters - set(given)))
    return ObservationParams(arity or 1, tuple(sorted(states)), all_letters)


# -- computation space -------------------------------------------------------

def computation_term(c: str, d: str, q: str, slots: Sequence[str],
                     table: SymbolTable = SYMBOLS) -> App:
    """``(c.(d.q)) . (a1.(... .(aN.*)))`` from symbol names."""
    triple = prod(_letter(c, table), App(table.intern(d, 0, "direction")),
                  App(table.intern(q, 0, "state")), table=table)
    ps = [App(table.intern(a, 0, "position")) for a in slots]
    return prod(triple, prod(*ps, App(table.star), table=table), table=table)


def parse_computation_term(t: Term):
    """Inverse of :func:`computation_term`: (c, d, q, slots) names, or None."""
    try:
        triple, rest = t.args
        c, (d, q) = triple.args[0], triple.args[1].args
        slots = []
        while rest.sym.kind == "product":
            a, rest = rest.args
            slots.append(a.sym.name)
    except (AttributeError, ValueError):
        return None
    if rest.sym.kind != "star":
        return None
    return c.sym.name, d.sym.name, q.sym.name, tuple(slots)


@dataclass(frozen=True)
class ComputationSpace:
    basis: tuple
    params: ObservationParams
    positions: PositionSet
    index: dict = field(compare=False, repr=False, default_factory=dict)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __contains__(self, t: Term) -> bool:
        return t in self.index


def expected_dimension(params: ObservationParams, n: int) -> int:
    return (len(params.alphabet) + 1) * 2 * len(params.states) * (n + 1) ** params.arity


def computation_space(params: ObservationParams, positions: PositionSet,
                      table: SymbolTable = SYMBOLS) -> ComputationSpace:
    """All closed computation terms, in lexicographic order of (c, d, q, slots)."""
    letters = ("*",) + tuple(params.alphabet)
    basis = tuple(
        computation_term(c, d, q, slots, table)
        for c, d, q, slots in itertools.product(
            letters, ("l", "r"), params.states,
            itertools.product(positions.names, repeat=params.arity),
        )
    )
    index = {t: i for i, t in enumerate(basis)}
    return ComputationSpace(basis, params, positions, index)


# -- position renaming -------------------------------------------------------

def _rename_constants(t: Term, mapping: dict) -> Term:
    if isinstance(t, Var):
        return t
    if not t.args:
        return mapping.get(t.sym, t)
    return App(t.sym, tuple(_rename_constants(a, mapping) for a in t.args))


def position_automorphism(phi: Wiring, f: Mapping[str, str],
                          table: SymbolTable = SYMBOLS) -> Wiring:
    """Replace every position constant ``p`` by ``f[p]`` throughout ``phi``."""
    if len(set(f.values())) != len(f):
        raise EncodingError("position renaming must be injective")
    mapping = {table.intern(p, 0, "position"): App(table.intern(q, 0, "position"))
               for p, q in f.items()}
    out = {}
    for flow, c in phi.items():
        for side in (flow.head, flow.tail):
            for sym in _constants(side):
                if sym.kind == "position" and sym not in mapping:
                    raise EncodingError(f"position {sym.name!r} is not mapped")
        new = Flow(_rename_constants(flow.head, mapping), _rename_constants(flow.tail, mapping))
        out[new] = c
    return Wiring(out)


def _constants(t: Term):
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, App):
            if not s.args:
                yield s.sym
            stack.extend(s.args)
