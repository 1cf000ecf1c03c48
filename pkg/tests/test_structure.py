from __future__ import annotations

import itertools

import pytest

from conftest import algebra
from emvkit.algebra import ChangLex, FiniteEMV, FinSubsets, Representing, boolean, chain, product
from emvkit.errors import HasTop, ImproperIdeal, RdpViolation, ZeroAlgebra
from emvkit.structure import (
    GeaTable,
    chain_height,
    check_gea,
    direct_image_witness,
    gea_to_emv,
    ideal_generated,
    is_ideal,
    is_prime,
    maximal_ideals,
    maximal_ideals_bruteforce,
    monoid_reconstruct,
    quotient,
    radical_and_infinitesimals,
    representing_mv,
    subalgebra_closure,
    to_gea,
)

P = product([chain(2), chain(1)])


def idx(*labels):
    return frozenset(P.labels.index(l) for l in labels)


def test_ideal_generated():
    C = chain(2)
    assert ideal_generated(C, []) == {0}
    assert ideal_generated(C, [1]) == {0, 1, 2}
    assert ideal_generated(P, idx("(1,0)")) == idx("(0,0)", "(1,0)", "(2,0)")


def test_maximal_ideals_examples():
    assert maximal_ideals(chain(2)) == [frozenset({0})]
    assert set(maximal_ideals(P)) == {idx("(0,0)", "(1,0)", "(2,0)"), idx("(0,0)", "(0,1)")}
    B = boolean(2)
    assert set(maximal_ideals(B)) == {frozenset({0, 1}), frozenset({0, 2})}


def test_maximal_ideals_match_bruteforce(algebra_name):
    M = algebra(algebra_name)
    assert set(maximal_ideals(M, cross_check=False)) == set(maximal_ideals_bruteforce(M))
    for I in maximal_ideals(M):
        assert is_ideal(M, I) and is_prime(M, I)


def test_zero_algebra():
    with pytest.raises(ZeroAlgebra):
        maximal_ideals(FiniteEMV([[0]]))


def test_quotients():
    C = chain(2)
    Q, proj = quotient(C, {0})
    assert Q.table == C.table and proj == (0, 1, 2)
    Q, proj = quotient(P, idx("(0,0)", "(1,0)", "(2,0)"))
    assert Q.n == 2 and chain_height(Q) == 1
    with pytest.raises(ImproperIdeal):
        quotient(C, {0, 1, 2})


def test_quotient_by_maximal_is_chain(algebra_name):
    M = algebra(algebra_name)
    for I in maximal_ideals(M):
        Q, _ = quotient(M, I)
        assert chain_height(Q) is not None


def test_subalgebra_closure():
    C = chain(2)
    assert subalgebra_closure(C, [2]) == {0, 2}
    assert subalgebra_closure(C, [1]) == {0, 1, 2}
    assert subalgebra_closure(boolean(2), [1]) == {0, 1}


def test_gea_plus_on_chain():
    E = to_gea(chain(2))
    for i, j in itertools.product(range(3), repeat=2):
        assert E.defined(i, j) == (i + j <= 2)


def test_gea_round_trip(algebra_name):
    M = algebra(algebra_name)
    assert gea_to_emv(to_gea(M)).table == M.table


def test_rdp_violation_detected():
    # the 5-element "diamond" effect algebra: 0, a, b, c with a+b = b+c = a+c = 1
    plus = [[None] * 5 for _ in range(5)]
    for x in range(5):
        plus[0][x] = plus[x][0] = x
    for x, y in [(1, 2), (2, 3), (1, 3)]:
        plus[x][y] = plus[y][x] = 4
    with pytest.raises(RdpViolation):
        check_gea(GeaTable(5, tuple(map(tuple, plus))))


def test_monoid_reconstruct(algebra_name):
    M = algebra(algebra_name)
    join, meet = monoid_reconstruct(M)
    assert join[0][M.top] == M.top and meet[0][M.top] == 0


def test_radical_examples():
    assert radical_and_infinitesimals(chain(2)) == (frozenset({0}), frozenset({0}))
    rad, inf = radical_and_infinitesimals(FinSubsets(), 6)
    assert rad == inf == {frozenset()}
    rad, _ = radical_and_infinitesimals(ChangLex(), 20)
    assert rad == {(0, m) for m in range(21)}


def test_representing_mv():
    with pytest.raises(HasTop):
        representing_mv(chain(2))
    N = representing_mv(FinSubsets())
    assert isinstance(N, Representing)
    assert direct_image_witness(N, 4) is None
