import itertools

import pytest

from rsg import words as W
from rsg.actions import verify_nice_factorization
from rsg.algebra import check_associativity, check_identities
from rsg.errors import BottomlessError, InstanceError, ParseError
from rsg.partial import (
    ChiAction,
    ChiClass,
    FiniteSemilattice,
    MAlgebra,
    MElement,
    PartialAction,
    bottomless_words,
    chain_example,
    chi_class,
    chi_equal,
    chi_meet,
    chi_members,
    check_m_equals_R,
    check_mg_identity,
    check_prefix_criterion,
    diamond_example,
    greatest_in_sigma_classes,
)

INSTANCES = [("chain", chain_example), ("diamond", diamond_example)]


def test_m_operations_chain_example():
    pa = chain_example()
    M = MAlgebra(pa)
    e = pa.Y.index("e")
    ea = MElement(e, "a")
    assert M.mul(ea, ea) == MElement(e, "aa")
    assert M.plus(ea) == MElement(e, "")
    assert M.star(ea) == MElement(e, "")


def test_alpha_basics():
    pa = diamond_example()
    assert pa.alpha("") == {i: i for i in range(4)}
    inv = pa.alpha("A")
    assert inv == {v: k for k, v in pa.alpha("a").items()}
    # α_{ab⁻¹} = α_a ∘ α_{b⁻¹}, defined exactly where the composite is
    fa, fB = pa.alpha("a"), pa.alpha("B")
    expect = {y: fa[fB[y]] for y in fB if fB[y] in fa}
    assert pa.alpha("aB") == expect


def test_m_identity_examples():
    pa = chain_example()
    assert pa.m_identity("") == pa.Y.top
    assert pa.m_identity("a") == pa.Y.index("e")


def test_empty_map_is_bottomless():
    Y = FiniteSemilattice([[0, 1], [1, 1]], ["1", "e"])
    pa = PartialAction(Y, {"a": {}})
    with pytest.raises(BottomlessError):
        pa.m_identity("a")
    assert set(bottomless_words(pa, 2)) == {"a", "A", "aa", "AA"}


def test_invalid_partial_actions():
    Y = FiniteSemilattice([[0, 1], [1, 1]], ["1", "e"])
    with pytest.raises(InstanceError):
        PartialAction(Y, {"a": {0: 1}})  # domain {1} is not an ideal
    with pytest.raises(InstanceError):
        PartialAction(Y, {"a": {0: 1, 1: 1}})
    with pytest.raises(ParseError):
        PartialAction.from_json_obj({"letters": {}})


def test_json_round_trip():
    for _, make in INSTANCES:
        pa = make()
        back = PartialAction.from_json_obj(pa.to_json_obj())
        assert back.maps == pa.maps and back.Y.meet_table == pa.Y.meet_table


@pytest.mark.parametrize("name, make", INSTANCES)
def test_m_algebra_identities(name, make):
    M = MAlgebra(make())
    frag = M.fragment(3)
    assert all(M.valid(z) for z in frag)
    triples = list(itertools.product(frag[:25], repeat=3))
    assert check_identities(M, triples).ok
    assert check_associativity(M, triples) is None


@pytest.mark.parametrize("name, make", INSTANCES)
def test_perfect_monoid_properties(name, make):
    pa = make()
    assert check_mg_identity(pa, 4) == []
    assert greatest_in_sigma_classes(MAlgebra(pa), 4) == []
    assert check_m_equals_R(pa, 3) == {"image_in_R": True, "operations": True, "onto": True}
    rep = check_prefix_criterion(pa, 3)
    assert rep.ok and rep.checked > 0


def test_chi_meet_examples():
    pa = chain_example()
    top, e = pa.Y.top, pa.Y.index("e")
    assert chi_meet(pa, ChiClass(top, ""), chi_class(pa, top, "a")) == ChiClass(e, "")
    x = chi_class(pa, e, "ab")
    assert chi_meet(pa, x, x) == x
    D = diamond_example()
    for A, B in itertools.product(range(D.Y.n), repeat=2):
        assert chi_meet(D, ChiClass(A, ""), ChiClass(B, "")) == ChiClass(D.Y.meet(A, B), "")


@pytest.mark.parametrize("name, make", INSTANCES)
def test_chi_canonical_form(name, make):
    pa = make()
    for g in W.enumerate_reduced(pa.alphabet, 3):
        for A in range(pa.Y.n):
            c = chi_class(pa, A, g)
            assert chi_equal(pa, (A, g), (c.A, c.g))
            for B, h in chi_members(pa, c, 3):
                assert chi_class(pa, B, h) == c


@pytest.mark.parametrize("name, make", INSTANCES)
def test_chi_semilattice_laws(name, make):
    pa = make()
    act = ChiAction(pa)
    classes = act.classes(2)
    for x, y in itertools.product(classes, repeat=2):
        m = act.meet(x, y)
        assert m == act.meet(y, x)
        assert act.meet(m, x) == m
    for g in W.enumerate_reduced(pa.alphabet, 4):
        assert verify_nice_factorization(act, g)
