import itertools

import pytest

from rsg import words as W
from rsg.actions import ONE, Tree, enumerate_subtrees, tree_act
from rsg.algebra import FinRestrictionAlgebra
from rsg.chains import (
    Chain,
    Link,
    brute_force_epsilon,
    build_proper_cover,
    chain_in_R,
    first_broken_link,
    in_sigma_normalize,
    random_valid_chain,
    saturate_epsilon,
    transform_chain,
    verify_chain,
)
from rsg.corpus import diamond
from rsg.errors import DomainError, InstanceError
from rsg.semidirect import SDElement, down, in_R
from rsg.terms import Sandwich

ID = SDElement(ONE, "")


def T(*vs):
    return Tree(frozenset(vs))


def x(tree, word):
    return SDElement(T(*tree), word)


def test_empty_chain(sd):
    p = x(["", "a"], "a")
    assert verify_chain(Chain(p, p), sd)
    assert not verify_chain(Chain(p, ID), sd)


def test_single_identity_link(sd):
    p, q = x(["", "a"], "a"), x(["", "b"], "b")
    link = Link(Sandwich(), [ID, ID], p, p)
    assert verify_chain(Chain(p, p, [link]), sd)
    assert not verify_chain(Chain(p, q, [link]), sd)


def test_planted_break_is_located(sd, ab, rng):
    ch = None
    while ch is None or len(ch) < 3:
        ch = random_valid_chain(rng, ab)
    assert first_broken_link(ch, sd) is None
    bad = ch.links[1]
    ch.links[1] = Link(bad.term, bad.consts, x(["", "b", "bb", "bbb"], "bbb"), bad.d)
    assert first_broken_link(ch, sd) == 1
    assert not verify_chain(ch, sd)


def test_relation_filter(sd):
    p = x(["", "a"], "a")
    ch = Chain(p, p, [Link(Sandwich(), [ID, ID], p, p)])
    assert verify_chain(ch, sd, relation=lambda c, d: c == d)
    assert not verify_chain(ch, sd, relation=lambda c, d: False)


def test_single_link_with_non_R_constants(act, sd, ab, rng):
    found = 0
    while found < 20:
        ch = random_valid_chain(rng, ab, max_links=1)
        ln = ch.links[0]
        if ln.term.inner is not None or all(in_R(act, k) for k in ln.consts):
            continue
        found += 1
        out = transform_chain(act, ch)
        assert verify_chain(out, sd) and chain_in_R(act, out)
        assert out.links[0].consts == [down(act, k) for k in ln.consts]


def test_R_constants_are_fixed(act, ab, rng):
    for _ in range(30):
        ch = random_valid_chain(rng, ab)
        out = transform_chain(act, ch)
        again = transform_chain(act, out)
        for ln_out, ln_again in zip(out.links, again.links):
            if ln_out.term.inner is None:
                assert ln_again.consts == ln_out.consts


def test_random_chains_transform(act, sd, ab, rng):
    seen_three = False
    for _ in range(150):
        ch = random_valid_chain(rng, ab)
        assert verify_chain(ch, sd)
        out = transform_chain(act, ch)
        assert verify_chain(out, sd) and chain_in_R(act, out)
        assert (out.s, out.t, len(out)) == (ch.s, ch.t, len(ch))
        seen_three |= len(ch) >= 3
    assert seen_three


def test_transform_requires_R_endpoints(act):
    with pytest.raises(DomainError):
        transform_chain(act, Chain(x([""], "a"), x([""], "a")))


def test_in_sigma_normalize(sd):
    p, q = x(["", "a"], "a"), x(["a", "ab", ""], "a")
    P, Q = in_sigma_normalize(p, q)
    assert (P, Q) == (x(["", "a"], ""), x(["a", "ab", ""], ""))
    assert in_sigma_normalize(p, x(["", "b"], "b")) is None
    # (A ∧ B, ā) = (A, 1)(B, ā)
    assert sd.mul(P, q) == SDElement(T("", "a", "ab"), "a")


a1 = W.Alphabet("a")


def test_epsilon_trivial_cases(ab):
    eq = saturate_epsilon([], 3, ab)
    assert all(len(b) == 1 for b in eq.blocks) and eq.stabilized
    A = T("", "a")
    assert all(len(b) == 1 for b in saturate_epsilon([(A, A)], 3, ab).blocks)


@pytest.mark.parametrize("bound", [3, 4])
def test_epsilon_single_letter_matches_brute_force(bound):
    gen = [(T(""), T("", "a"))]
    fast = saturate_epsilon(gen, bound, a1)
    assert fast.partition_key() == brute_force_epsilon(gen, bound, a1)
    assert fast.related(T(""), T("", "a", "aa"))
    assert not fast.related(T(""), T("", "A"))


def test_epsilon_is_order_independent_and_invariant(ab):
    gens = [(T("", "a"), T("", "b")), (T("", "A", "AA"), T(""))]
    e1 = saturate_epsilon(gens, 3, ab, check_stable=False)
    e2 = saturate_epsilon(gens[::-1], 3, ab, check_stable=False)
    assert e1.partition_key() == e2.partition_key()
    trees = enumerate_subtrees(ab, 3)
    for A, B in itertools.combinations(trees, 2):
        if not e1.related(A, B):
            continue
        for v in A.vertices & B.vertices:
            gA, gB = tree_act(W.invert(v), A), tree_act(W.invert(v), B)
            if e1.contains(gA) and e1.contains(gB):
                assert e1.related(gA, gB)


def test_epsilon_rejects_oversized_generator(ab):
    with pytest.raises(DomainError):
        saturate_epsilon([(T("", "a", "aa", "aaa"), T(""))], 3, ab)


@pytest.mark.parametrize("S", [FinRestrictionAlgebra.trivial(), FinRestrictionAlgebra.chain(2)], ids=["trivial", "chain2"])
def test_cover_small(S):
    rep = build_proper_cover(S, 3)
    assert rep.ok and rep.stabilized
    d = rep.as_dict(S)
    assert d["stabilized"] is True and set(d["checks"]) == {"morphism", "projection_separating", "proper", "stabilized"}


def test_cover_without_identity():
    D = diamond()
    S = FinRestrictionAlgebra.from_algebra(D, [1, 2, 3])  # {e, f, 0}: no identity
    assert S.identity is None
    rep = build_proper_cover(S, 2)
    assert rep.identity_adjoined
    assert rep.checks["morphism"] and rep.checks["projection_separating"] and rep.checks["proper"]


def test_cover_rejects_non_restriction_input():
    bad = FinRestrictionAlgebra([[0, 1], [1, 0]], [1, 1], [0, 0], validate=False)
    with pytest.raises(InstanceError):
        build_proper_cover(bad, 2)
