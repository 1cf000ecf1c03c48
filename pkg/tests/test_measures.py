from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from conftest import algebra, state_pool
from emvkit.algebra import FinSubsets, FinSupportProduct, Representing, boolean, chain
from emvkit.errors import NotAdditive, NotAState, NotFiniteSupport, NotSubadditive, UnsupportedCarrier
from emvkit.measures import (
    decompositions,
    height,
    integral_represent,
    jordan_lattice,
    random_signed_measure,
    strong_join_T,
    sup_construction,
)
from emvkit.states import SymbolicState, Tail, point_morphism, state_morphisms


def test_decompositions_examples():
    assert decompositions(chain(2), 2) == [(1, 1), (2,)]
    B = boolean(2)
    assert decompositions(B, 3) == [(1, 2), (3,)]
    assert decompositions(B, 0) == [()]
    for a in (1, 2):
        assert decompositions(B, a) == [(a,)]


def test_decompositions_are_complete(algebra_name):
    # unbounded recursion never finds more parts than the height allows
    M = algebra(algebra_name)
    for x in M.elements:
        full = decompositions(M, x, max_parts=M.n)
        assert full == decompositions(M, x)
        assert all(len(d) <= height(M, x) for d in full)


def test_sup_construction_examples():
    C = chain(2)
    m = (0, 1, 2)
    assert sup_construction(C, m) == m
    B = boolean(2)
    assert sup_construction(B, [0, 2, 3, 3])[3] == 5
    assert sup_construction(C, [0, 1, 2])[2] == 2
    with pytest.raises(NotSubadditive):
        sup_construction(C, [0, 0, 1])


def test_jordan_examples():
    B = boolean(2)
    r = jordan_lattice(B, [0, 2, 0, 2], [0, 0, 3, 3])
    assert r.join[3] == 5
    pos = jordan_lattice(B, [0, 2, 0, 2], [0, 0, 0, 0])
    assert pos.pos == (0, 2, 0, 2) and pos.neg == (0, 0, 0, 0)
    r = jordan_lattice(chain(2), [0, -1, -2], [0, 0, 0])
    assert r.pos == (0, 0, 0) and r.neg[1] == 1
    with pytest.raises(NotAdditive):
        jordan_lattice(chain(2), [0, 1, 1], [0, 0, 0])


def test_random_signed_measures_are_additive(algebra_name):
    M = algebra(algebra_name)
    rng = random.Random(1)
    for _ in range(5):
        m = random_signed_measure(M, rng)
        r = jordan_lattice(M, m, m)
        assert r.join == r.meet == m


def test_strong_join_examples():
    assert strong_join_T({1: 2}, {2: 3}) == SymbolicState.of({1: 2, 2: 3})
    assert strong_join_T({1: 1}, {1: 1}) == SymbolicState.of({1: 1})
    assert strong_join_T(point_morphism(1), SymbolicState.of({1: F(1, 2)})) == point_morphism(1)
    with pytest.raises(NotFiniteSupport):
        strong_join_T(SymbolicState.of(tail=Tail(1, F(1, 2), F(1, 2))), {1: 1})


def test_integral_finite(algebra_name):
    M = algebra(algebra_name)
    for k, m in enumerate(state_morphisms(M)):
        mu = integral_represent(M, m)
        assert mu.weights == ((f"s{k}", 1),)
    for _, s in state_pool(algebra_name, 10):
        assert integral_represent(M, s).mass == 1


def test_integral_symbolic():
    T = FinSubsets()
    mu = integral_represent(T, SymbolicState.of({1: F(1, 3), 4: F(2, 3)}))
    assert mu.to_json() == {"weights": {"s1": "1/3", "s4": "2/3"}, "inf": "0"}
    N = Representing(T)
    mu = integral_represent(N, SymbolicState.of({1: F(1, 2)}, inf=F(1, 2)))
    assert mu.to_json() == {"weights": {"s1~": "1/2"}, "inf": "1/2"}
    with pytest.raises(NotAState):
        integral_represent(T, SymbolicState.of({1: F(1, 2)}))
    with pytest.raises(UnsupportedCarrier):
        integral_represent(FinSupportProduct(2), point_morphism(1))
    with pytest.raises(NotAState):
        integral_represent(chain(2), [0, 1, 1])
