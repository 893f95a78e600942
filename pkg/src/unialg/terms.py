"""First-order terms, substitutions and unification.

Terms are built over an interned symbol table.  Two symbols are reserved:
the binary product ``.`` (written infix, right-associative) and the star
constant ``*``.  The direction constants ``l`` and ``r`` are pre-registered.

Substitutions are plain dicts mapping :class:`Var` to :class:`Term`.
"""
from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union

SYMBOL_KINDS = ("plain", "product", "star", "alphabet", "direction", "state", "position")


class TermError(ValueError):
    pass


class TermSyntaxError(TermError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class ArityError(TermError):
    pass


@dataclass(frozen=True, eq=False)
class Symbol:
    """An interned function symbol.  Compared by identity."""

    name: str
    arity: int
    kind: str = "plain"

    def __repr__(self):
        return f"Symbol({self.name!r}/{self.arity})"


class SymbolTable:
    """Append-only name -> Symbol registry; arity is fixed at first use."""

    def __init__(self):
        self._symbols: dict[str, Symbol] = {}
        self._lock = threading.Lock()
        self.product = self.intern(".", 2, "product")
        self.star = self.intern("*", 0, "star")
        self.left = self.intern("l", 0, "direction")
        self.right = self.intern("r", 0, "direction")

    def intern(self, name: str, arity: int, kind: str = "plain") -> Symbol:
        sym = self._symbols.get(name)
        if sym is None:
            if kind not in SYMBOL_KINDS:
                raise ValueError(f"unknown symbol kind {kind!r}")
            with self._lock:
                sym = self._symbols.get(name)
                if sym is None:
                    sym = Symbol(name, arity, kind)
                    self._symbols[name] = sym
        if sym.arity != arity:
            raise ArityError(f"symbol {name!r} already has arity {sym.arity}, used with {arity}")
        return sym

    def get(self, name: str) -> Optional[Symbol]:
        return self._symbols.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._symbols

    def __iter__(self) -> Iterator[Symbol]:
        return iter(list(self._symbols.values()))


SYMBOLS = SymbolTable()


class Var:
    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("var", name))

    def __eq__(self, other):
        return isinstance(other, Var) and other.name == self.name

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Var({self.name!r})"

    def __str__(self):
        return self.name


class App:
    __slots__ = ("sym", "args", "_hash")

    def __init__(self, sym: Symbol, args: tuple = ()):
        if len(args) != sym.arity:
            raise ArityError(f"{sym.name} expects {sym.arity} arguments, got {len(args)}")
        self.sym = sym
        self.args = tuple(args)
        self._hash = hash((id(sym), self.args))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, App)
            and other._hash == self._hash
            and other.sym is self.sym
            and other.args == self.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"App({self.sym.name!r}, {self.args!r})"

    def __str__(self):
        return format_term(self)


Term = Union[Var, App]
Substitution = dict


def const(name: str, kind: str = "plain", table: SymbolTable = SYMBOLS) -> App:
    return App(table.intern(name, 0, kind))


def fn(name: str, *args: Term, table: SymbolTable = SYMBOLS) -> App:
    return App(table.intern(name, len(args)), args)


def star(table: SymbolTable = SYMBOLS) -> App:
    return App(table.star)


def prod(*parts: Term, table: SymbolTable = SYMBOLS) -> Term:
    """Right-nested product ``p1 . (p2 . (... . pk))``."""
    if not parts:
        raise ValueError("prod() needs at least one term")
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = App(table.product, (part, result))
    return result


def is_product(t: Term) -> bool:
    return isinstance(t, App) and t.sym.kind == "product"


def variables(t: Term) -> set[Var]:
    out: set[Var] = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Var):
            out.add(s)
        else:
            stack.extend(s.args)
    return out


def iter_variables(t: Term) -> Iterator[Var]:
    """Variables in depth-first left-to-right order, with repetitions."""
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Var):
            yield s
        else:
            stack.extend(reversed(s.args))


def is_closed(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    return all(is_closed(a) for a in t.args)


def depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(depth(a) for a in t.args)


def symbols_of(t: Term) -> set[Symbol]:
    out = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, App):
            out.add(s.sym)
            stack.extend(s.args)
    return out


# -- substitutions -----------------------------------------------------------

def apply_substitution(s: Mapping[Var, Term], t: Term) -> Term:
    """Replace every variable of ``t`` by its image, simultaneously."""
    if not s:
        return t
    if isinstance(t, Var):
        return s.get(t, t)
    if not t.args:
        return t
    return App(t.sym, tuple(apply_substitution(s, a) for a in t.args))


def compose(outer: Mapping[Var, Term], inner: Mapping[Var, Term]) -> Substitution:
    """``outer . inner``: apply ``inner`` first, then ``outer``."""
    out = {x: apply_substitution(outer, t) for x, t in inner.items()}
    for x, t in outer.items():
        out.setdefault(x, t)
    return {x: t for x, t in out.items() if t != x}


def _walk(t: Term, bindings: dict) -> Term:
    while isinstance(t, Var) and t in bindings:
        t = bindings[t]
    return t


def _occurs(x: Var, t: Term, bindings: dict) -> bool:
    stack = [t]
    while stack:
        s = _walk(stack.pop(), bindings)
        if s == x:
            return True
        if isinstance(s, App):
            stack.extend(s.args)
    return False


def _resolve(t: Term, bindings: dict) -> Term:
    t = _walk(t, bindings)
    if isinstance(t, Var) or not t.args:
        return t
    return App(t.sym, tuple(_resolve(a, bindings) for a in t.args))


def mgu(t: Term, u: Term) -> Optional[Substitution]:
    """Most general unifier of ``t`` and ``u``, or None.

    Robinson-style with occurs check.  The result is idempotent.

    >>> X = Var("X")
    >>> mgu(X, parse_term("c . X")) is None
    True
    """
    bindings: dict[Var, Term] = {}
    stack = [(t, u)]
    while stack:
        a, b = stack.pop()
        a = _walk(a, bindings)
        b = _walk(b, bindings)
        if a is b or a == b:
            continue
        if isinstance(a, Var):
            if _occurs(a, b, bindings):
                return None
            bindings[a] = b
        elif isinstance(b, Var):
            if _occurs(b, a, bindings):
                return None
            bindings[b] = a
        else:
            if a.sym is not b.sym:
                return None
            stack.extend(zip(a.args, b.args))
    return {x: _resolve(x, bindings) for x in bindings}


def match_closed(pattern: Term, t: Term) -> Optional[Substitution]:
    """Unify ``pattern`` against the closed term ``t`` (no occurs check needed)."""
    if not is_closed(t):
        raise TermError(f"match_closed: {format_term(t)} is not closed")
    return _match(pattern, t, {})


def _match(pattern: Term, t: Term, s: dict) -> Optional[Substitution]:
    # ``t`` is assumed closed; bindings therefore never chain.
    stack = [(pattern, t)]
    while stack:
        p, c = stack.pop()
        if isinstance(p, Var):
            bound = s.get(p)
            if bound is None:
                s[p] = c
            elif bound != c:
                return None
        elif p.sym is not c.sym:
            return None
        elif p.args:
            stack.extend(zip(p.args, c.args))
    return s


def rename_apart(t: Term, u: Term, prefix: str = "X") -> tuple[Term, Term]:
    """Rename the variables of ``t`` and ``u`` so that their sets are disjoint.

    Fresh names come from a counter local to the call: ``X1, X2, ...`` in
    order of first occurrence, ``t`` before ``u``.
    """
    counter = 0

    def fresh_for(term):
        nonlocal counter
        ren = {}
        for x in iter_variables(term):
            if x not in ren:
                counter += 1
                ren[x] = Var(f"{prefix}{counter}")
        return apply_substitution(ren, term)

    return fresh_for(t), fresh_for(u)


def matchable(t: Term, u: Term) -> bool:
    t2, u2 = rename_apart(t, u)
    return mgu(t2, u2) is not None


def canonical_variables(t: Term, u: Term) -> tuple[Term, Term]:
    """Rename variables to ``V1, V2, ...`` by first occurrence in ``u`` then ``t``."""
    ren: dict[Var, Var] = {}
    for term in (u, t):
        for x in iter_variables(term):
            if x not in ren:
                ren[x] = Var(f"V{len(ren) + 1}")
    if all(k == v for k, v in ren.items()):
        return t, u
    return apply_substitution(ren, t), apply_substitution(ren, u)


# -- text form ---------------------------------------------------------------

_TOKEN = re.compile(r"\s+|#[^\n]*|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<punct>[().,*])")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup:
            tokens.append((m.group(m.lastgroup), m.start()))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, table: SymbolTable):
        self.tokens = _tokenize(text)
        self.i = 0
        self.table = table

    def peek(self):
        return self.tokens[self.i][0]

    def take(self, expected=None):
        tok, pos = self.tokens[self.i]
        if expected is not None and tok != expected:
            raise TermSyntaxError(f"expected {expected!r}, found {tok or 'end of input'!r}", pos)
        self.i += 1
        return tok, pos

    def term(self) -> Term:
        left = self.atom()
        if self.peek() == ".":
            self.take()
            return App(self.table.product, (left, self.term()))
        return left

    def atom(self) -> Term:
        tok, pos = self.take()
        if tok == "*":
            return App(self.table.star)
        if tok == "(":
            inner = self.term()
            self.take(")")
            return inner
        if not tok or not (tok[0].isalpha() or tok[0] == "_"):
            raise TermSyntaxError(f"unexpected {tok or 'end of input'!r}", pos)
        if tok[0].isupper() or tok[0] == "_":
            return Var(tok)
        args = []
        if self.peek() == "(":
            self.take()
            args.append(self.term())
            while self.peek() == ",":
                self.take()
                args.append(self.term())
            self.take(")")
        try:
            sym = self.table.intern(tok, len(args))
        except ArityError as e:
            raise TermSyntaxError(str(e), pos) from None
        return App(sym, tuple(args))


def parse_term(text: str, table: SymbolTable = SYMBOLS) -> Term:
    p = _Parser(text, table)
    t = p.term()
    tok, pos = p.tokens[p.i]
    if tok:
        raise TermSyntaxError(f"trailing input {tok!r}", pos)
    return t


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if t.sym.kind == "product":
        left, right = t.args
        ls = format_term(left)
        if is_product(left):
            ls = f"({ls})"
        return f"{ls}.{format_term(right)}"
    if not t.args:
        return t.sym.name
    return f"{t.sym.name}({','.join(format_term(a) for a in t.args)})"


def format_substitution(s: Mapping[Var, Term]) -> str:
    items = sorted(s.items(), key=lambda kv: kv[0].name)
    return "{" + ", ".join(f"{x.name} -> {format_term(t)}" for x, t in items) + "}"
