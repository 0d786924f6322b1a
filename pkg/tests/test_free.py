import pytest

from rsg.actions import Tree
from rsg.algebra import FinRestrictionAlgebra
from rsg.errors import AlphabetError, DomainError
from rsg.free import (
    FreeRestrictionMonoid,
    ReducedFreeMonoid,
    bfs_closure,
    decompose,
    evaluate_morphism,
    parse_assignment,
)
from rsg.semidirect import SDElement


def x(tree, word):
    return SDElement(Tree(frozenset(tree)), word)


@pytest.fixture
def fr(ab):
    return FreeRestrictionMonoid(ab)


def test_generators(fr):
    a, b = fr.generator("a"), fr.generator("b")
    assert a == x(["", "a"], "a")
    assert fr.mul(a, b) == x(["", "a", "ab"], "ab")
    assert fr.plus(a) == x(["", "a"], "")
    with pytest.raises(AlphabetError):
        fr.generator("c")


@pytest.mark.parametrize(
    "elem, text",
    [
        (x(["", "a"], ""), "(a)⁺"),
        (x(["", "A"], ""), "(a)*"),
        (x(["", "a", "aB"], ""), "(a·(b)*)⁺"),
    ],
)
def test_decompose_examples(fr, elem, text):
    t = decompose(elem)
    assert str(t) == text
    assert t.evaluate(fr, fr.generators()) == elem


def test_decompose_rejects_non_elements():
    with pytest.raises(DomainError):
        decompose(x(["", "A"], "A"))
    with pytest.raises(DomainError):
        decompose(x(["a"], "a"))


def test_evaluate_back_is_identity(fr):
    gens = fr.generators()
    for elem in fr.elements_upto(4):
        assert evaluate_morphism(elem, fr, gens) == elem


def test_morphism_to_reduced_free_monoid_is_second_projection(fr):
    target = ReducedFreeMonoid()
    for elem in fr.elements_upto(4):
        assert evaluate_morphism(elem, target, {"a": "a", "b": "b"}) == elem.second


def test_morphism_into_finite_algebra_respects_operations(fr):
    S = FinRestrictionAlgebra.chain(3)
    asg = {"a": 1, "b": 2}
    elems = fr.elements_upto(3)
    phi = {e: evaluate_morphism(e, S, asg) for e in elems}
    for p in elems:
        assert phi[fr.plus(p)] == S.plus(phi[p])
        assert phi[fr.star(p)] == S.star(phi[p])
        for q in elems:
            pq = fr.mul(p, q)
            if pq in phi:
                assert phi[pq] == S.mul(phi[p], phi[q])


@pytest.mark.parametrize("n", [2, 3])
def test_bfs_closure_matches_enumeration(fr, n):
    assert bfs_closure(fr, n) == set(fr.elements_upto(n))


def test_parse_assignment():
    assert parse_assignment("a=3, b=5", int) == {"a": 3, "b": 5}
    with pytest.raises(DomainError):
        parse_assignment("a3", int)
