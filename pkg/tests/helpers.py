"""Seeded generators shared by the test modules and the acceptance suite."""
import itertools
from pathlib import Path

from unialg.encoding import Alphabet, Word
from unialg.flows import Flow, Permutation, Wiring
from unialg.machines import PointerMachine, TransitionRule, parse_machine
from unialg.terms import SYMBOLS, App, Var, apply_substitution, variables

MACHINE_DIR = Path(__file__).resolve().parent.parent / "machines"
AB = Alphabet(("a", "b"))

CONSTANTS = ("c", "d", "e")
UNARY = ("f", "g")
VARS = tuple(Var(n) for n in ("X", "Y", "Z", "U"))


def load_suite():
    return {p.stem: parse_machine(p.read_text()) for p in sorted(MACHINE_DIR.glob("*.pm"))}


def words_upto(k, alphabet=AB):
    for n in range(k + 1):
        for w in itertools.product(alphabet.letters, repeat=n):
            yield Word(alphabet, w)


def random_term(rng, depth, closed=False, var_pool=VARS):
    """Term of depth <= ``depth`` over c, d, e, f/1, g/1 and the product."""
    if depth == 0 or rng.random() < 0.3:
        if not closed and rng.random() < 0.5:
            return rng.choice(var_pool)
        return App(SYMBOLS.intern(rng.choice(CONSTANTS), 0))
    if rng.random() < 0.35:
        return App(SYMBOLS.intern(rng.choice(UNARY), 1), (random_term(rng, depth - 1, closed, var_pool),))
    return App(SYMBOLS.product, (random_term(rng, depth - 1, closed, var_pool),
                                 random_term(rng, depth - 1, closed, var_pool)))


def close_off(t, keep):
    """Replace variables outside ``keep`` by the constant ``c``."""
    c = App(SYMBOLS.intern("c", 0))
    return apply_substitution({x: c for x in variables(t) - keep}, t)


def random_flow(rng, depth=4):
    head = random_term(rng, depth)
    tail = random_term(rng, depth)
    shared = variables(head) & variables(tail)
    return Flow(close_off(head, shared), close_off(tail, shared))


def random_wiring(rng, max_flows=3, depth=3, concrete=False):
    terms = {}
    for _ in range(rng.randint(0, max_flows)):
        coef = 1 if concrete else complex(rng.randint(-2, 2), rng.randint(-1, 1))
        terms[random_flow(rng, depth)] = coef
    return Wiring(terms)


def instance_of(rng, t, depth=2):
    """A closed instance of ``t``."""
    return apply_substitution({x: random_term(rng, depth, closed=True) for x in variables(t)}, t)


def random_permutation(rng, n):
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return Permutation(tuple(images))


def _triples(states):
    return [(c, d, s) for c in ("*", "a", "b") for d in ("l", "r") for s in states]


def random_reversible_machine(rng, pointers=None, states=("s0", "s1", "s2")):
    pointers = pointers or rng.randint(1, 2)
    triples = _triples(states)
    k = rng.randint(0, 8)
    sources = rng.sample(triples, k)
    targets = rng.sample(triples, k)
    rules = tuple(TransitionRule(s, t, random_permutation(rng, pointers)) for s, t in zip(sources, targets))
    return PointerMachine(pointers, states, rules, AB)


def random_irreversible_machine(rng, pointers=None, states=("s0", "s1", "s2")):
    """Delta with a repeated source or a repeated target."""
    pointers = pointers or rng.randint(1, 2)
    triples = _triples(states)
    k = rng.randint(2, 8)
    sources = rng.sample(triples, k)
    targets = rng.sample(triples, k)
    if rng.random() < 0.5:
        targets[1] = targets[0]
    else:
        sources[1] = sources[0]
        while targets[1] == targets[0]:
            targets[1] = rng.choice(triples)
    rules = tuple(TransitionRule(s, t, random_permutation(rng, pointers)) for s, t in zip(sources, targets))
    return PointerMachine(pointers, states, rules, AB)
