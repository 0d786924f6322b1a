import itertools
import json

import pytest

from rsg.algebra import (
    Congruence,
    FinRestrictionAlgebra,
    check_associativity,
    check_identities,
    finite_congruence_closure,
    is_factorisable,
    is_proper,
    is_reduced,
    natural_leq,
    projections,
    quotient_finite,
    sigma_congruence,
    sigma_related,
    units,
)
from rsg.corpus import completions, cyclic_group, diamond, small_algebras, symmetric_inverse_monoid
from rsg.errors import CongruenceError, InstanceError, ParseError
from rsg.oracles import congruence_oracle, natural_leq_oracle, sigma_oracle


def test_semilattice_and_reduced_monoid_pass():
    for S in (diamond(), FinRestrictionAlgebra.chain(3), cyclic_group(4)):
        assert check_identities(S).ok
        assert check_associativity(S) is None


def test_planted_defect_is_reported_with_witness():
    S = FinRestrictionAlgebra.chain(2)
    # plus(1) = e breaks x+x = x at x = 1
    bad = FinRestrictionAlgebra(S.table, [1, 1], S.star_map, S.names)
    rep = check_identities(bad)
    assert not rep.ok
    names = {r.name for r in rep.failures()}
    assert "x+x = x" in names
    witness = next(r.witness for r in rep.failures() if r.name == "x+x = x")
    assert witness[0] == 0


def test_natural_order_and_sigma_examples():
    D = diamond()
    one, e, f, zero = range(4)
    assert natural_leq(D, D.mul(e, f), e)
    assert all(natural_leq(D, a, a) for a in range(4))
    # with a zero every pair of projections is sigma-related
    assert sigma_related(D, e, f)
    Z = cyclic_group(3)
    assert [sigma_related(Z, a, b) for a in range(3) for b in range(3)] == [a == b for a in range(3) for b in range(3)]


@pytest.mark.parametrize("name, S", small_algebras())
def test_relations_match_oracles(name, S):
    for a, b in itertools.product(range(S.n), repeat=2):
        assert S.sigma(a, b) == sigma_oracle(S, a, b)
        assert S.leq(a, b) == natural_leq_oracle(S, a, b)


def test_structural_predicates():
    assert is_reduced(cyclic_group(3))
    assert not is_reduced(diamond())
    assert is_proper(diamond())
    assert not is_proper(symmetric_inverse_monoid(2))
    assert units(cyclic_group(3)) == [0, 1, 2]
    assert len(projections(symmetric_inverse_monoid(2))) == 4


def test_closure_examples():
    D = diamond()
    rho = finite_congruence_closure(D, [(1, 2)])
    assert rho.blocks == [[0], [1, 2, 3]]
    assert finite_congruence_closure(D, []) == Congruence.equality(4)
    C2 = FinRestrictionAlgebra.chain(2)
    assert finite_congruence_closure(C2, [(0, 1)]) == Congruence.universal(2)


@pytest.mark.parametrize("name, S", small_algebras())
def test_closure_matches_oracle_on_pairs(name, S):
    for pair in itertools.combinations(range(S.n), 2):
        rho = finite_congruence_closure(S, [pair])
        assert rho == congruence_oracle(S, [pair])
        assert rho.is_compatible(S)


def test_quotient_of_three_chain():
    C3 = FinRestrictionAlgebra.chain(3)
    Q = quotient_finite(C3, finite_congruence_closure(C3, [(1, 2)]))
    assert Q.n == 2
    assert Q.table == FinRestrictionAlgebra.chain(2).table
    assert check_identities(Q).ok


def test_quotient_rejects_non_congruence():
    C3 = FinRestrictionAlgebra.chain(3)
    with pytest.raises(CongruenceError) as err:
        quotient_finite(C3, Congruence(3, [[0, 2], [1]]))
    assert err.value.context is not None


def test_sigma_quotient_is_reduced():
    for _, S in small_algebras():
        assert is_reduced(quotient_finite(S, sigma_congruence(S)))


def test_json_round_trip():
    S = symmetric_inverse_monoid(2)
    T = FinRestrictionAlgebra.from_json_obj(json.loads(S.dumps()))
    assert T.table == S.table and T.plus_map == S.plus_map and T.names == S.names
    by_name = FinRestrictionAlgebra.from_json_obj({"names": ["1", "e"], "mul": [["1", "e"], ["e", "e"]], "plus": ["1", "e"], "star": ["1", "e"]})
    assert by_name.table == FinRestrictionAlgebra.chain(2).table


def test_bad_json_is_rejected():
    with pytest.raises(ParseError):
        FinRestrictionAlgebra.from_json_obj({"mul": [0]})
    with pytest.raises(InstanceError):
        FinRestrictionAlgebra([[0, 5], [1, 1]], [0, 1], [0, 1])


def test_completions_are_factorisable():
    for _, c in completions():
        assert is_factorisable(c.F)
    assert is_factorisable(diamond())
    # I2 without the swap: the only unit is 1 but not every element is a projection
    I2 = symmetric_inverse_monoid(2)
    brandt = FinRestrictionAlgebra.from_algebra(I2, [i for i in range(I2.n) if I2.names[i] != "{0>1,1>0}"])
    assert check_identities(brandt).ok
    assert not is_factorisable(brandt)
