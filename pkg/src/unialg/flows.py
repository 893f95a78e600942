"""Flows, wirings and their action on closed terms.

A flow ``head <- tail`` is stored with canonically numbered variables, so
equality of flows is equality up to renaming.  A wiring is a finite formal
sum of flows with exact complex-rational coefficients.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional

from .terms import (
    SYMBOLS,
    SymbolTable,
    Term,
    TermError,
    Var,
    _match,
    apply_substitution,
    canonical_variables,
    format_term,
    is_closed,
    matchable,
    mgu,
    parse_term,
    prod,
    variables,
)


class FlowError(ValueError):
    pass


# -- coefficients ------------------------------------------------------------

class Coefficient:
    """Exact complex number with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        other = _coef(other)
        return Coefficient(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Coefficient(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_coef(other))

    def __mul__(self, other):
        other = _coef(other)
        if not self.im and not other.im:
            return Coefficient(self.re * other.re)
        return Coefficient(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return Coefficient(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Coefficient(other)
        if not isinstance(other, Coefficient):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_positive_real(self) -> bool:
        return not self.im and self.re > 0

    def __repr__(self):
        return f"Coefficient({self.re}, {self.im})"

    def __str__(self):
        return f"[{self.re},{self.im}]"


ONE = Coefficient(1)


def _coef(x) -> Coefficient:
    if isinstance(x, Coefficient):
        return x
    if isinstance(x, complex):
        return Coefficient(Fraction(x.real), Fraction(x.imag))
    return Coefficient(x)


# -- flows -------------------------------------------------------------------

class Flow:
    """``head <- tail`` with ``vars(head) == vars(tail)``, up to renaming."""

    __slots__ = ("head", "tail", "_hash")

    def __init__(self, head: Term, tail: Term, _canonical: bool = False):
        if not _canonical:
            if variables(head) != variables(tail):
                raise FlowError(
                    f"flow {format_term(head)} <- {format_term(tail)}: "
                    "head and tail must have the same variables"
                )
            head, tail = canonical_variables(head, tail)
        self.head = head
        self.tail = tail
        self._hash = hash((head, tail))

    def __eq__(self, other):
        return (
            isinstance(other, Flow)
            and self._hash == other._hash
            and self.head == other.head
            and self.tail == other.tail
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Flow({format_flow(self)!r})"

    def __str__(self):
        return format_flow(self)


def format_flow(f: Flow) -> str:
    return f"{format_term(f.head)} <- {format_term(f.tail)}"


def identity_flow() -> Flow:
    x = Var("X")
    return Flow(x, x)


def _shifted(t: Term) -> Term:
    # Canonical flows only use V1, V2, ...; moving them to W1, W2, ... renames apart.
    ren = {x: Var("W" + x.name[1:]) for x in variables(t)}
    return apply_substitution(ren, t)


def flow_product(f: Flow, g: Flow) -> Optional[Flow]:
    """Resolution of ``f.tail`` against ``g.head``; None when they do not unify."""
    g_head, g_tail = _shifted(g.head), _shifted(g.tail)
    theta = mgu(f.tail, g_head)
    if theta is None:
        return None
    head = apply_substitution(theta, f.head)
    tail = apply_substitution(theta, g_tail)
    return Flow(*canonical_variables(head, tail), _canonical=True)


def flow_dagger(f: Flow) -> Flow:
    return Flow(f.tail, f.head)


def flow_tensor(f: Flow, g: Flow) -> Flow:
    g_head, g_tail = _shifted(g.head), _shifted(g.tail)
    return Flow(prod(f.head, g_head), prod(f.tail, g_tail))


def flow_act(f: Flow, t: Term) -> Optional[Term]:
    """Action on a closed term: match ``t`` against the tail, instantiate the head."""
    s = _match(f.tail, t, {})
    if s is None:
        return None
    return apply_substitution(s, f.head)


# -- permutations ------------------------------------------------------------

@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..n} given by its image sequence."""

    images: tuple

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{len(images)}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """``self . other`` (apply ``other`` first)."""
        return Permutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def __str__(self):
        return " ".join(map(str, self.images))


def perm_repr(sigma: Permutation, table: SymbolTable = SYMBOLS) -> Flow:
    """``x1 . ... . xn . y <- x_sigma(1) . ... . x_sigma(n) . y``."""
    if sigma.n == 0:
        raise FlowError("perm_repr needs n >= 1")
    xs = [Var(f"X{i}") for i in range(1, sigma.n + 1)]
    y = Var("Y")
    head = prod(*xs, y, table=table)
    tail = prod(*(xs[sigma(i) - 1] for i in range(1, sigma.n + 1)), y, table=table)
    return Flow(head, tail)


# -- wirings -----------------------------------------------------------------

class Wiring:
    """Finite formal sum of flows with nonzero exact coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Flow, object] | Iterable[Flow] = ()):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = ((f, ONE) for f in terms)
        acc: dict[Flow, Coefficient] = {}
        for f, c in items:
            c = _coef(c)
            acc[f] = acc[f] + c if f in acc else c
        self._terms = {f: c for f, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _from_dict(cls, terms: dict) -> "Wiring":
        w = cls.__new__(cls)
        w._terms = terms
        w._hash = None
        return w

    @classmethod
    def zero(cls) -> "Wiring":
        return cls()

    @classmethod
    def identity(cls) -> "Wiring":
        return cls([identity_flow()])

    def items(self):
        return self._terms.items()

    def flows(self) -> list[Flow]:
        return list(self._terms)

    def coefficient(self, f: Flow) -> Coefficient:
        return self._terms.get(f, Coefficient(0))

    def support(self) -> frozenset:
        return frozenset(self._terms)

    def __iter__(self) -> Iterator[Flow]:
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        return isinstance(other, Wiring) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        return wiring_add(self, other)

    def __mul__(self, other):
        if isinstance(other, Wiring):
            return wiring_mul(self, other)
        return wiring_scale(other, self)

    def __rmul__(self, other):
        return wiring_scale(other, self)

    def __call__(self, v):
        return wiring_action(self, v)

    @property
    def dagger(self) -> "Wiring":
        return wiring_dagger(self)

    def __repr__(self):
        return f"Wiring({len(self)} flows)"

    def __str__(self):
        return format_wiring(self)


def wiring_add(a: Wiring, b: Wiring) -> Wiring:
    acc = dict(a._terms)
    for f, c in b._terms.items():
        acc[f] = acc[f] + c if f in acc else c
    return Wiring._from_dict({f: c for f, c in acc.items() if c})


def wiring_scale(k, a: Wiring) -> Wiring:
    k = _coef(k)
    if not k:
        return Wiring()
    return Wiring._from_dict({f: k * c for f, c in a._terms.items()})


def wiring_mul(a: Wiring, b: Wiring) -> Wiring:
    acc: dict[Flow, Coefficient] = {}
    for f, c in a._terms.items():
        for g, d in b._terms.items():
            fg = flow_product(f, g)
            if fg is None:
                continue
            cd = c * d
            acc[fg] = acc[fg] + cd if fg in acc else cd
    return Wiring._from_dict({f: c for f, c in acc.items() if c})


def wiring_dagger(a: Wiring) -> Wiring:
    return Wiring._from_dict({flow_dagger(f): c.conjugate() for f, c in a._terms.items()})


def wiring_tensor(a: Wiring, b: Wiring) -> Wiring:
    acc: dict[Flow, Coefficient] = {}
    for f, c in a._terms.items():
        for g, d in b._terms.items():
            fg = flow_tensor(f, g)
            cd = c * d
            acc[fg] = acc[fg] + cd if fg in acc else cd
    return Wiring._from_dict({f: c for f, c in acc.items() if c})


def is_concrete(a: Wiring) -> bool:
    return all(c == ONE for c in a._terms.values())


def is_isometric(a: Wiring) -> bool:
    if not is_concrete(a):
        return False
    fs = a.flows()
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            if matchable(fs[i].head, fs[j].head) or matchable(fs[i].tail, fs[j].tail):
                return False
    return True


# -- term vectors and action -------------------------------------------------

class TermVector:
    """Element of the free vector space over closed terms."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Term, object] | Iterable[Term] = ()):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = ((t, ONE) for t in terms)
        acc: dict[Term, Coefficient] = {}
        for t, c in items:
            if not is_closed(t):
                raise TermError(f"term vector basis element {format_term(t)} is not closed")
            c = _coef(c)
            acc[t] = acc[t] + c if t in acc else c
        self._terms = {t: c for t, c in acc.items() if c}

    @classmethod
    def _from_dict(cls, terms: dict) -> "TermVector":
        v = cls.__new__(cls)
        v._terms = terms
        return v

    def items(self):
        return self._terms.items()

    def support(self) -> frozenset:
        return frozenset(self._terms)

    def coefficient(self, t: Term) -> Coefficient:
        return self._terms.get(t, Coefficient(0))

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        return isinstance(other, TermVector) and self._terms == other._terms

    def __repr__(self):
        return f"TermVector({format_vector(self)!r})"


def wiring_action(a: Wiring, v: TermVector | Term) -> TermVector:
    if not isinstance(v, TermVector):
        v = TermVector([v])
    acc: dict[Term, Coefficient] = {}
    for t, c in v.items():
        for f, lam in a.items():
            image = flow_act(f, t)
            if image is None:
                continue
            lc = lam * c
            acc[image] = acc[image] + lc if image in acc else lc
    return TermVector._from_dict({t: c for t, c in acc.items() if c})


def format_vector(v: TermVector) -> str:
    if not v:
        return "0"
    lines = []
    for t, c in v.items():
        prefix = "" if c == ONE else f"{c} : "
        lines.append(prefix + format_term(t))
    return "\n".join(sorted(lines))


# -- bounded nilpotency ------------------------------------------------------

@dataclass(frozen=True)
class Nilpotency:
    """Outcome of :func:`nilpotent_within`.

    ``step`` is the least k >= 1 with F^k = 0 when found.  ``periodic`` is set
    when the supports of the powers entered a cycle, which for wirings with
    positive real coefficients proves that no power vanishes.
    """

    nilpotent: bool
    step: Optional[int]
    bound: int
    periodic: bool = False


def nilpotent_within(a: Wiring, bound: int) -> Nilpotency:
    positive = all(c.is_positive_real() for c in a._terms.values())
    seen: set[frozenset] = set()
    power = a
    for k in range(1, bound + 1):
        if not power:
            return Nilpotency(True, k, bound)
        if positive:
            supp = power.support()
            if supp in seen:
                return Nilpotency(False, None, bound, periodic=True)
            seen.add(supp)
        if k == bound:
            break
        power = wiring_mul(power, a)
    return Nilpotency(False, None, bound)


# -- text format -------------------------------------------------------------

_RAT = r"[+-]?\d+(?:/\d+)?"
_COEF = re.compile(rf"^\s*\[\s*({_RAT})\s*,\s*({_RAT})\s*\]\s*:")


def parse_flow(text: str, table: SymbolTable = SYMBOLS) -> Flow:
    if text.count("<-") != 1:
        raise FlowError(f"flow must contain exactly one '<-': {text.strip()!r}")
    head, tail = text.split("<-")
    return Flow(parse_term(head, table), parse_term(tail, table))


def parse_wiring(text: str, table: SymbolTable = SYMBOLS) -> Wiring:
    """One flow per line, optional ``[re,im] :`` prefix; lines are summed."""
    acc: dict[Flow, Coefficient] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        coef = ONE
        m = _COEF.match(line)
        if m:
            coef = Coefficient(Fraction(m.group(1)), Fraction(m.group(2)))
            line = line[m.end():]
        try:
            f = parse_flow(line, table)
        except (TermError, FlowError) as e:
            raise FlowError(f"line {lineno}: {e}") from None
        acc[f] = acc[f] + coef if f in acc else coef
    return Wiring._from_dict({f: c for f, c in acc.items() if c})


def format_wiring(a: Wiring) -> str:
    """Canonically sorted, one flow per line; the empty wiring prints as ``0``."""
    if not a:
        return "0"
    lines = []
    for f, c in a.items():
        prefix = "" if c == ONE else f"{c} : "
        lines.append(prefix + format_flow(f))
    return "\n".join(sorted(lines))


__all__ = [
    "Coefficient",
    "Flow",
    "FlowError",
    "Nilpotency",
    "Permutation",
    "TermVector",
    "Wiring",
    "flow_act",
    "flow_dagger",
    "flow_product",
    "flow_tensor",
    "format_flow",
    "format_vector",
    "format_wiring",
    "identity_flow",
    "is_concrete",
    "is_isometric",
    "nilpotent_within",
    "parse_flow",
    "parse_wiring",
    "perm_repr",
    "wiring_action",
    "wiring_add",
    "wiring_dagger",
    "wiring_mul",
    "wiring_scale",
    "wiring_tensor",
]
