import itertools
import random

import pytest

from unialg.encoding import (
    Alphabet,
    EncodingError,
    ObservationError,
    ObservationParams,
    PositionSet,
    Word,
    computation_space,
    expected_dimension,
    position_automorphism,
    validate_observation,
    word_repr,
)
from unialg.flows import Wiring, flow_act, is_concrete, is_isometric, parse_wiring, wiring_dagger
from unialg.machines import compile_machine
from unialg.terms import format_term, symbols_of

from helpers import AB, load_suite, words_upto

SUITE = load_suite()


def test_word_repr_single_letter():
    w = word_repr(Word(AB, ("a",)), PositionSet(("p0", "p1")))
    expected = parse_wiring("""
        (*.r.X).(p0.Y) <- (a.l.X).(p1.Y)
        (a.l.X).(p1.Y) <- (*.r.X).(p0.Y)
        (a.r.X).(p1.Y) <- (*.l.X).(p0.Y)
        (*.l.X).(p0.Y) <- (a.r.X).(p1.Y)
    """)
    assert w == expected


def test_word_repr_empty_word():
    w = word_repr(Word(AB, ()), PositionSet(("p0",)))
    assert w == parse_wiring("(*.r.X).(p0.Y) <- (*.l.X).(p0.Y)\n(*.l.X).(p0.Y) <- (*.r.X).(p0.Y)")


@pytest.mark.parametrize("word", list(words_upto(3)), ids=str)
def test_word_repr_shape(word):
    w = word_repr(word)
    assert len(w) == 2 * (len(word) + 1)
    assert is_concrete(w)
    assert is_isometric(w)
    assert wiring_dagger(w) == w


def test_word_repr_errors():
    with pytest.raises(EncodingError):
        word_repr(Word(AB, ("a",)), PositionSet(("p0",)))
    with pytest.raises(EncodingError):
        Word(AB, ("c",))
    with pytest.raises(EncodingError):
        Alphabet(("a", "*"))
    with pytest.raises(EncodingError):
        PositionSet(("p0", "p0"))


def test_word_parse():
    assert Word.parse("abba", AB).letters == ("a", "b", "b", "a")
    ab2 = Alphabet(("aa", "b"))
    assert Word.parse("aa,b,aa", ab2).letters == ("aa", "b", "aa")
    assert Word.parse("", AB).letters == ()


def test_word_tape_is_cyclic():
    w = Word(AB, ("a", "b"))
    assert [w.symbol_at(k) for k in range(-1, 4)] == ["b", "*", "a", "b", "*"]


def test_validate_compiled_machines():
    for name, m in SUITE.items():
        params = validate_observation(compile_machine(m), m.alphabet.letters)
        assert params.arity == (m.pointers if m.rules else 1)
        assert set(params.states) <= set(m.states)


def test_validate_zero_wiring():
    params = validate_observation(Wiring())
    assert params == ObservationParams(1, (), ())


def test_word_is_not_an_observation():
    with pytest.raises(ObservationError):
        validate_observation(word_repr(Word(AB, ("a",))))


@pytest.mark.parametrize("text, reason", [
    ("[2,0] : (a.l.s).(X.Y) <- (a.l.s).(X.Y)", "concrete"),
    ("(a.l.s).(X.Y) <- (a.x.s).(X.Y)", "direction"),
    ("(a.l.X).(Z.Y) <- (a.l.X).(Z.Y)", "state"),
    ("(a.l.s).(X.c.Y) <- (a.l.s).(X.c.Y)", "variable"),
    ("(a.l.s).(X.Z.Y) <- (a.l.s).(Z.X.Y)\n(a.r.s).(X.Y) <- (a.r.s).(X.Y)", "width"),
    ("(a.l.s).(X.Y) <- (s.l.a).(X.Y)", "letters and states"),
])
def test_validate_rejections(text, reason):
    with pytest.raises(ObservationError) as e:
        validate_observation(parse_wiring(text))
    assert reason in str(e.value)


def test_validate_alphabet_check():
    phi = parse_wiring("(c.l.s).(X.Y) <- (a.l.s).(X.Y)")
    with pytest.raises(ObservationError):
        validate_observation(phi, ("a", "b"))
    assert validate_observation(phi).alphabet == ("a", "c")


def test_dimension_sample():
    params = ObservationParams(1, ("s0", "s1"), ("a", "b"))
    space = computation_space(params, PositionSet.default(3))
    assert space.dimension == 48 == expected_dimension(params, 3)


def test_dimension_minimal():
    params = ObservationParams(1, ("s0",), ("a",))
    assert computation_space(params, PositionSet.default(0)).dimension == 4


def test_dimension_formula_random_draws():
    rng = random.Random(11)
    for _ in range(20):
        k, s, arity, n = rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3), rng.randint(0, 3)
        params = ObservationParams(arity, tuple(f"q{i}" for i in range(s)), tuple(f"a{i}" for i in range(k)))
        space = computation_space(params, PositionSet.default(n))
        # oracle: count by brute enumeration of tuples
        count = sum(1 for _ in itertools.product(range(k + 1), range(2), range(s), range((n + 1) ** arity)))
        assert space.dimension == count == len(set(space.basis))


def test_basis_order_and_shape():
    params = ObservationParams(2, ("s",), ("a",))
    space = computation_space(params, PositionSet.default(1))
    assert format_term(space.basis[0]) == "(*.l.s).p0.p0.*"
    assert format_term(space.basis[1]) == "(*.l.s).p0.p1.*"
    assert format_term(space.basis[-1]) == "(a.r.s).p1.p1.*"


def test_space_closed_under_product_action():
    for name, m in SUITE.items():
        phi = compile_machine(m)
        for word in words_upto(2):
            params = validate_observation(phi, AB.letters)
            space = computation_space(params, PositionSet.default(len(word)))
            product = phi * word_repr(word)
            for v in space.basis:
                for u in product(v):
                    assert u in space


def test_position_automorphism_identity():
    w = word_repr(Word(AB, ("a", "b")))
    assert position_automorphism(w, {"p0": "p0", "p1": "p1", "p2": "p2"}) == w


def test_position_automorphism_word():
    w = word_repr(Word(AB, ("a",)), PositionSet(("p0", "p1")))
    renamed = position_automorphism(w, {"p0": "q0", "p1": "q1"})
    assert renamed == word_repr(Word(AB, ("a",)), PositionSet(("q0", "q1")))


def test_position_automorphism_unmapped():
    w = word_repr(Word(AB, ("a",)))
    with pytest.raises(EncodingError):
        position_automorphism(w, {"p0": "q0"})


def test_position_automorphism_commutes_with_operations():
    rng = random.Random(5)
    for word in list(words_upto(2)):
        P = PositionSet.default(len(word))
        names = list(P.names)
        targets = [f"z{i}" for i in range(len(names))]
        rng.shuffle(targets)
        f = dict(zip(names, targets))
        w = word_repr(word, P)
        phi = compile_machine(SUITE["loopb"])
        prod = phi * w
        assert position_automorphism(prod, f) == phi * position_automorphism(w, f)
        assert position_automorphism(w.dagger, f) == position_automorphism(w, f).dagger
        assert position_automorphism(w * w, f) == position_automorphism(w, f) * position_automorphism(w, f)


def test_observation_and_word_symbol_separation():
    w = word_repr(Word(AB, ("a", "b")))
    for flow in w:
        kinds = {s.kind for s in symbols_of(flow.head) | symbols_of(flow.tail)}
        assert "state" not in kinds
    for m in SUITE.values():
        for flow in compile_machine(m):
            kinds = {s.kind for s in symbols_of(flow.head) | symbols_of(flow.tail)}
            assert "position" not in kinds


def test_word_flows_act_on_computation_terms():
    # a word flow moves the main pointer and keeps the state and other slots
    w = word_repr(Word(AB, ("a",)))
    space = computation_space(ObservationParams(2, ("s",), ("a", "b")), PositionSet.default(1))
    moved = [flow_act(f, space.basis[0]) for f in w]
    assert sum(m is not None for m in moved) == 1
