import pytest

from rsg.actions import ONE, Tree, tree_act
from rsg.errors import ArityError, DomainError
from rsg.sampling import random_r, random_sd, random_word, random_x
from rsg.semidirect import SDElement, SemidirectProduct, down, in_R
from rsg.terms import Sandwich, Tower, eval_term, onedir_params, onedir_value, parse_term, two_transform, yuck_construct
from rsg import words as W

ID = SDElement(ONE, "")


def x(tree, word):
    return SDElement(Tree(frozenset(tree)), word)


def test_pretty_forms():
    assert Tower(0, "+").pretty() == "(y0 x z0)^+"
    assert Tower(1, "+").pretty() == "((y0 x z0)^+ z1)^*"
    assert Tower(1, "*").pretty() == "(y1 (y0 x z0)^*)^+"
    assert Sandwich().pretty() == "y x z"
    assert Sandwich(Tower(0, "*")).pretty() == "y (y0 x z0)^* z"


def test_arity_and_slots(sd):
    assert Tower(2, "+").arity == 4
    assert Sandwich(Tower(1, "*")).arity == 5
    assert Tower(1, "+").slots == ["y0", "z0", "z1"]
    with pytest.raises(ArityError):
        Tower(1, "+").evaluate(sd, ID, [ID])


@pytest.mark.parametrize("text", ["yxz", "tower:0+", "tower:3*", "sandwich:2+"])
def test_parse_term_round_trip(text):
    assert parse_term(text).code == text


def test_parse_term_rejects_garbage():
    with pytest.raises(DomainError):
        parse_term("tower:x+")


def test_eval_examples(sd):
    c = x(["", "a"], "a")
    assert eval_term(Tower(0, "+"), sd, c, [ID, ID]) == x(["", "a"], "")
    assert eval_term(Sandwich(), sd, c, [ID, ID]) == c


def test_onedir_depth_zero(act):
    A, B = Tree(frozenset(["", "b"])), Tree(frozenset(["a"]))
    alpha = [SDElement(A, "a"), SDElement(B, "ab")]
    assert onedir_params(act, Tower(0, "+"), alpha) == (A, B, "a")
    assert onedir_params(act, Tower(0, "*"), alpha) == (tree_act("BA", B), tree_act("A", A), "BA")


def test_onedir_random(act, ab, rng):
    G = SemidirectProduct(act, group=True)
    for t in [Tower(d, op) for d in range(3) for op in "+*"]:
        for _ in range(20):
            alpha = [random_sd(rng, ab, 4, 3) for _ in range(t.arity)]
            U, V, g = onedir_params(act, t, alpha)
            for _ in range(5):
                c = random_r(rng, ab, 4, 3)
                assert t.evaluate(G, c, alpha) == onedir_value(act, U, V, g, c, t.inner)


@pytest.mark.parametrize("variant", ["+", "*"])
def test_yuck_identity_g(act, sd, ab, rng, variant):
    U, V = Tree(frozenset(["", "a"])), Tree(frozenset(["", "b", "bb"]))
    t, beta = yuck_construct(act, U, V, "", variant)
    assert t.depth == 0 and t.family == variant
    for _ in range(20):
        c = random_r(rng, ab)
        assert t.evaluate(sd, c, beta) == onedir_value(act, U, V, "", c, variant, with_one=True)


@pytest.mark.parametrize("variant", ["+", "*"])
def test_yuck_random(act, sd, ab, rng, variant):
    for _ in range(30):
        U, V = random_x(rng, ab, 4), random_x(rng, ab, 4)
        g = W.reduce(random_word(rng, ab, 6))
        t, beta = yuck_construct(act, U, V, g, variant)
        assert t.family == variant
        assert len(W.nice_factorization_free(g)) <= t.depth + 1
        assert all(in_R(act, b) for b in beta)
        for _ in range(5):
            c = random_r(rng, ab)
            assert t.evaluate(sd, c, beta) == onedir_value(act, U, V, g, c, variant, with_one=True)


def test_yuck_rejects_unknown_variant(act):
    with pytest.raises(DomainError):
        yuck_construct(act, ONE, ONE, "a", "-")


def test_two_on_sandwich(act):
    y, z = x(["a", "ab"], "b"), x(["A"], "a")
    t2, beta = two_transform(act, Sandwich(), [y, z])
    assert t2 == Sandwich()
    assert beta == [down(act, y), down(act, z)]


def test_two_fixes_R_constants(act, ab, rng):
    for _ in range(30):
        alpha = [random_r(rng, ab), random_r(rng, ab)]
        assert two_transform(act, Sandwich(), alpha)[1] == alpha


def test_two_random(act, sd, ab, rng):
    for t in [Sandwich(Tower(d, op)) for d in range(3) for op in "+*"]:
        for _ in range(15):
            alpha = [random_sd(rng, ab, 4, 3) for _ in range(t.arity)]
            t2, beta = two_transform(act, t, alpha)
            assert isinstance(t2, Sandwich) and t2.inner.family == t.inner.family
            assert all(in_R(act, b) for b in beta)
            for _ in range(5):
                c = random_r(rng, ab)
                assert sd.down(t.evaluate(sd, c, alpha)) == t2.evaluate(sd, c, beta)


def test_two_needs_sandwich(act):
    with pytest.raises(DomainError):
        two_transform(act, Tower(0, "+"), [ID, ID])
