"""Nilpotency of observation x word products on the computation space.

The wiring ``phi . W`` maps the finite computation space into itself.  For
a concrete wiring no coefficient can cancel, so ``(phi W)^k`` vanishes on
the space exactly when the action graph has no path with k edges; the
product is therefore nilpotent iff that graph is acyclic, and then already
at some power k <= D, D being the dimension of the space.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .encoding import (
    ComputationSpace,
    PositionSet,
    Word,
    computation_space,
    validate_observation,
    word_repr,
)
from .flows import (
    Nilpotency,
    TermVector,
    Wiring,
    flow_act,
    is_concrete,
    is_isometric,
    nilpotent_within,
    wiring_mul,
)
from .terms import SYMBOLS, SymbolTable, Term, format_term


class DeciderError(ValueError):
    pass


@dataclass(frozen=True)
class ActionGraph:
    space: ComputationSpace
    edges: dict  # basis term -> frozenset of basis terms

    @property
    def dimension(self) -> int:
        return self.space.dimension

    @property
    def nodes(self) -> tuple:
        return self.space.basis

    def successors(self, v: Term) -> frozenset:
        return self.edges.get(v, frozenset())

    def edge_count(self) -> int:
        return sum(len(s) for s in self.edges.values())


def _support_image(flows: Sequence, terms) -> set:
    out = set()
    for t in terms:
        for f in flows:
            image = flow_act(f, t)
            if image is not None:
                out.add(image)
    return out


def build_action_graph(phi: Wiring, word: Word, positions: Optional[PositionSet] = None,
                       table: SymbolTable = SYMBOLS) -> ActionGraph:
    """Successors of each basis term: match against the word's flows, then phi's."""
    params = validate_observation(phi, word.alphabet.letters)
    if positions is None:
        positions = PositionSet.default(len(word))
    space = computation_space(params, positions, table)
    w_flows = word_repr(word, positions, table).flows()
    phi_flows = phi.flows()
    edges = {}
    for v in space.basis:
        succ = _support_image(phi_flows, _support_image(w_flows, (v,)))
        for u in succ:
            if u not in space:
                raise DeciderError(f"{format_term(u)} leaves the computation space")
        edges[v] = frozenset(succ)
    return ActionGraph(space, edges)


def find_cycle(g: ActionGraph) -> Optional[list]:
    """A cycle of the graph as a node list, or None when it is acyclic."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {v: WHITE for v in g.nodes}
    for root in g.nodes:
        if color[root] != WHITE:
            continue
        color[root] = GREY
        path = [root]
        stack = [iter(sorted(g.successors(root), key=g.space.index.__getitem__))]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                color[path.pop()] = BLACK
                stack.pop()
            elif color[nxt] == GREY:
                return path[path.index(nxt):]
            elif color[nxt] == WHITE:
                color[nxt] = GREY
                path.append(nxt)
                stack.append(iter(sorted(g.successors(nxt), key=g.space.index.__getitem__)))
    return None


def decide_nilpotent_graph(g: ActionGraph, phi: Optional[Wiring] = None) -> bool:
    """True (nilpotent) iff the action graph is acyclic.

    Only meaningful for concrete wirings; pass ``phi`` to have that checked.
    """
    if phi is not None and not is_concrete(phi):
        raise DeciderError("graph decision needs a concrete observation; use the power method")
    return find_cycle(g) is None


def restricted_power_nilpotency(g: ActionGraph) -> Optional[int]:
    """Least k <= D with (phi W)^k(E) = 0 on the space E, computed on supports."""
    frontier = set(g.nodes)
    for k in range(1, g.dimension + 1):
        frontier = set().union(*(g.successors(v) for v in frontier)) if frontier else set()
        if not frontier:
            return k
    return None


def power_nilpotency(phi: Wiring, word: Word, positions: Optional[PositionSet] = None,
                     bound: Optional[int] = None, table: SymbolTable = SYMBOLS) -> Nilpotency:
    """Exact power iteration of the product wiring, bounded by the space dimension."""
    params = validate_observation(phi, word.alphabet.letters)
    if positions is None:
        positions = PositionSet.default(len(word))
    if bound is None:
        # an empty space (no states) still needs one step to see phi W = 0
        bound = max(1, computation_space(params, positions, table).dimension)
    product = wiring_mul(phi, word_repr(word, positions, table))
    return nilpotent_within(product, bound)


def decide_membership(phi: Wiring, word: Word, positions: Optional[PositionSet] = None,
                      method: str = "graph", table: SymbolTable = SYMBOLS) -> bool:
    """Is ``word`` in the language of ``phi``, i.e. is phi . W nilpotent?"""
    if method == "graph":
        if not is_concrete(phi):
            raise DeciderError("graph decision needs a concrete observation; use the power method")
        return decide_nilpotent_graph(build_action_graph(phi, word, positions, table))
    if method == "power":
        res = power_nilpotency(phi, word, positions, table=table)
        return res.nilpotent
    raise DeciderError(f"unknown method {method!r}")


@dataclass(frozen=True)
class Trace:
    """A deterministic run: ``terms`` visited; ``cycle_start`` indexes the repeat if any."""

    terms: tuple
    cycle_start: Optional[int] = None

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    @property
    def halted(self) -> bool:
        return self.cycle_start is None


@dataclass(frozen=True)
class Tracer:
    """Space and product wiring of an isometric observation on one word, built once."""

    space: ComputationSpace
    product: Wiring

    @classmethod
    def build(cls, phi: Wiring, word: Word, positions: Optional[PositionSet] = None,
              table: SymbolTable = SYMBOLS) -> "Tracer":
        if not is_isometric(phi):
            raise DeciderError("deterministic_trace needs an isometric observation")
        params = validate_observation(phi, word.alphabet.letters)
        if positions is None:
            positions = PositionSet.default(len(word))
        space = computation_space(params, positions, table)
        return cls(space, wiring_mul(phi, word_repr(word, positions, table)))

    def trace(self, v0: Term) -> Trace:
        seen = {v0: 0}
        terms = [v0]
        v = v0
        while True:
            image = self.product(TermVector([v]))
            if not image:
                return Trace(tuple(terms))
            if len(image) != 1:
                raise DeciderError(f"{format_term(v)} has {len(image)} successors")
            (v,) = image
            if v not in self.space:
                raise DeciderError(f"{format_term(v)} leaves the computation space")
            if v in seen:
                terms.append(v)
                return Trace(tuple(terms), seen[v])
            seen[v] = len(terms)
            terms.append(v)


def deterministic_trace(phi: Wiring, word: Word, v0: Term,
                        positions: Optional[PositionSet] = None,
                        table: SymbolTable = SYMBOLS) -> Trace:
    """Follow the unique successor chain of ``v0`` under an isometric ``phi``."""
    return Tracer.build(phi, word, positions, table).trace(v0)


def to_dot(g: ActionGraph, include_isolated: bool = False) -> str:
    lines = ["digraph comp {"]
    for v in g.nodes:
        succ = sorted(g.successors(v), key=g.space.index.__getitem__)
        if not succ and include_isolated:
            lines.append(f'  "{format_term(v)}";')
        for u in succ:
            lines.append(f'  "{format_term(v)}" -> "{format_term(u)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
