import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from unialg.flows import (
    Coefficient,
    Flow,
    FlowError,
    Permutation,
    TermVector,
    Wiring,
    flow_act,
    flow_dagger,
    flow_product,
    flow_tensor,
    format_wiring,
    identity_flow,
    is_concrete,
    is_isometric,
    nilpotent_within,
    parse_flow,
    parse_wiring,
    perm_repr,
    wiring_action,
    wiring_dagger,
    wiring_tensor,
)
from unialg.terms import is_closed, matchable, parse_term

from helpers import instance_of, random_wiring
from strategies import closed_terms, flows

F = parse_flow
P = parse_term
I = identity_flow()


def test_flow_requires_same_variables():
    with pytest.raises(FlowError):
        Flow(P("c"), P("X"))


def test_flows_equal_up_to_renaming():
    assert F("X.c <- c.X") == F("Y.c <- c.Y")
    assert F("X.Y <- Y.X") == F("B.A <- A.B")
    assert F("X.Y <- X.Y") != F("X.Y <- Y.X")


def test_product_example():
    assert flow_product(F("X.c <- (c.c).X"), F("Y.Z <- Z.Y")) == F("X.c <- X.(c.c)")


def test_product_unit_and_clash():
    f = F("X.c <- (c.c).X")
    assert flow_product(I, f) == f
    assert flow_product(f, I) == f
    assert flow_product(F("c <- c"), F("d <- d")) is None


def test_dagger():
    f = F("X.c <- c.X")
    assert flow_dagger(f) == F("c.X <- X.c")
    assert flow_dagger(flow_dagger(f)) == f
    assert flow_dagger(I) == I


def test_tensor():
    assert flow_tensor(F("c <- d"), I) == F("c.X <- d.X")
    assert flow_tensor(I, I) == F("X.Y <- X.Y")


def test_action_example():
    v = wiring_action(Wiring([F("X.c <- X.(c.c)")]), TermVector([P("d.(c.c)")]))
    assert v == TermVector([P("d.c")])


def test_action_identity_and_clash():
    t = P("f(c).d")
    assert wiring_action(Wiring([I]), t) == TermVector([t])
    assert not wiring_action(Wiring([F("e <- d")]), t)


def test_wiring_zero_laws():
    w = Wiring({F("X.c <- c.X"): 2, F("c <- d"): Coefficient(0, 1)})
    zero = Wiring()
    assert w * zero == zero
    assert w + zero == w
    assert w * Wiring.identity() == w


def test_zero_coefficients_dropped():
    f = F("c <- d")
    w = Wiring({f: 1}) + Wiring({f: -1})
    assert w == Wiring() and len(w) == 0


def test_dagger_conjugates():
    f = F("c <- d")
    w = Wiring({f: Coefficient(1, 2)})
    assert wiring_dagger(w) == Wiring({flow_dagger(f): Coefficient(1, -2)})


def test_colliding_products_accumulate():
    # two concrete flows whose products with g coincide
    a = Wiring([F("c.X <- X"), F("c.d <- d")])
    g = Wiring([F("d <- e")])
    prod = a * g
    assert prod == Wiring({F("c.d <- e"): 2})
    assert not is_concrete(prod)


def test_concrete_disjoint_products_stay_concrete():
    a = Wiring([F("c.X <- d.X"), F("e.X <- f(X)")])
    b = Wiring([F("d.X <- X"), F("f(X) <- g(X)")])
    assert is_concrete(a * b)


def test_is_concrete():
    assert is_concrete(Wiring())
    assert not is_concrete(Wiring({F("c <- d"): 2}))


def test_is_isometric_examples():
    assert is_isometric(parse_wiring("c.X <- X.d\nd.c <- c.c"))
    assert is_isometric(Wiring([F("X.c <- (c.c).X")]))
    # tails X and Y are matchable
    assert not is_isometric(parse_wiring("c.X <- X\nd.Y <- Y"))
    assert not is_isometric(Wiring({F("c <- d"): 2}))


def test_perm_repr():
    tau = Permutation((2, 1))
    assert perm_repr(tau) == F("X1.X2.Y <- X2.X1.Y")
    assert perm_repr(Permutation((1,))) == F("X1.Y <- X1.Y")
    with pytest.raises(FlowError):
        perm_repr(Permutation(()))
    with pytest.raises(ValueError):
        Permutation((2, 2))


def test_tau_conjugation():
    us = [F("c <- d"), F("f(X) <- g(X)"), F("X.e <- e.X")]
    tau = Wiring([perm_repr(Permutation((2, 1)))])

    def stack(a, b, c):
        return Wiring([flow_tensor(a, flow_tensor(b, flow_tensor(c, I)))])

    lhs = tau * stack(*us) * tau.dagger
    assert lhs == stack(us[1], us[0], us[2])


def test_nilpotent_within():
    assert nilpotent_within(Wiring(), 5).step == 1
    res = nilpotent_within(Wiring.identity(), 50)
    assert not res.nilpotent and res.step is None
    assert nilpotent_within(Wiring([F("c <- d")]), 5).step == 2


def test_nilpotent_within_without_period_shortcut():
    # complex coefficients disable the support-cycle certificate
    w = Wiring({identity_flow(): Coefficient(0, 1)})
    res = nilpotent_within(w, 20)
    assert not res.nilpotent and not res.periodic


def test_nilpotent_chain():
    chain = parse_wiring("a <- b\nb <- c\nc <- d")
    assert nilpotent_within(chain, 10).step == 4


def test_wiring_text_round_trip():
    text = "[1/2,-3] : X.c <- c.X\nc <- d  # comment\n\nc <- d\n"
    w = parse_wiring(text)
    assert w.coefficient(F("c <- d")) == 2
    assert w.coefficient(F("X.c <- c.X")) == Coefficient(Fraction(1, 2), -3)
    assert parse_wiring(format_wiring(w)) == w
    assert format_wiring(Wiring()) == "0"


def test_wiring_text_errors():
    with pytest.raises(FlowError):
        parse_wiring("c <- d <- e")
    with pytest.raises(FlowError):
        parse_wiring("c <- X")


# -- properties --------------------------------------------------------------

@settings(max_examples=300)
@given(flows())
def test_dagger_involution(f):
    assert flow_dagger(flow_dagger(f)) == f


@settings(max_examples=300)
@given(flows(), flows(), st.randoms(use_true_random=False))
def test_action_compatible_with_product(l, k, rnd):
    t = instance_of(rnd, k.tail) if rnd.random() < 0.7 else instance_of(rnd, P("X.Y"))
    assume(is_closed(t))
    kt = flow_act(k, t)
    lk = flow_product(l, k)
    lhs = flow_act(l, kt) if kt is not None else None
    rhs = flow_act(lk, t) if lk is not None else None
    assert lhs == rhs


@settings(max_examples=300)
@given(flows(), closed_terms, closed_terms)
def test_action_injective(f, t, u):
    a, b = flow_act(f, t), flow_act(f, u)
    if a is not None and a == b:
        assert t == u


@settings(max_examples=200)
@given(st.randoms(use_true_random=False))
def test_product_dagger_antimultiplicative(rnd):
    a, b = random_wiring(rnd), random_wiring(rnd)
    assert wiring_dagger(a * b) == wiring_dagger(b) * wiring_dagger(a)


@settings(max_examples=200)
@given(st.randoms(use_true_random=False))
def test_mixed_tensor_law(rnd):
    f, g, p, q = (random_wiring(rnd, max_flows=2) for _ in range(4))
    assert wiring_tensor(f, g) * wiring_tensor(p, q) == wiring_tensor(f * p, g * q)


@settings(max_examples=200)
@given(st.randoms(use_true_random=False))
def test_partial_isometry(rnd):
    w = random_wiring(rnd, concrete=True)
    assume(is_isometric(w))
    assert w * w.dagger * w == w


@settings(max_examples=200)
@given(st.randoms(use_true_random=False), closed_terms)
def test_isometric_action_single_term(rnd, t):
    w = random_wiring(rnd, concrete=True)
    assume(is_isometric(w))
    if w and rnd.random() < 0.7:
        t = instance_of(rnd, rnd.choice(w.flows()).tail)
    for image in (w(t), w.dagger(t)):
        assert len(image) <= 1
        assert all(c == 1 for _, c in image.items())


@given(st.permutations(range(1, 6)))
def test_permutation_inverse(images):
    sigma = Permutation(tuple(images))
    assert Wiring([perm_repr(sigma)]) * Wiring([perm_repr(sigma.inverse())]) == Wiring(
        [perm_repr(Permutation.identity(5))])


def test_concrete_products_have_positive_coefficients():
    rnd = random.Random(7)
    for _ in range(100):
        a = random_wiring(rnd, concrete=True)
        b = random_wiring(rnd, concrete=True)
        assert all(c.is_positive_real() for _, c in (a * b).items())


def test_isometric_implies_pairwise_disjoint():
    rnd = random.Random(3)
    for _ in range(200):
        w = random_wiring(rnd, concrete=True)
        fs = w.flows()
        pairs = [(f, g) for i, f in enumerate(fs) for g in fs[i + 1:]]
        oracle = all(not matchable(f.head, g.head) and not matchable(f.tail, g.tail) for f, g in pairs)
        assert is_isometric(w) == oracle
