from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emvkit.errors import DimensionMismatch, Infeasible, Unbounded
from emvkit.ratlp import (
    LinSystem,
    affine_rank,
    check_certificate,
    rank,
    rat,
    rat_str,
    solve,
    vertex_test,
)

H = Fraction(1, 2)


def test_rat_parsing():
    assert rat("3/6") == H
    assert rat(2) == 2
    assert rat_str(Fraction(4, 2)) == "2"
    assert rat_str(Fraction(-1, 3)) == "-1/3"
    with pytest.raises(Exception):
        rat(0.5)


def test_single_equation():
    s = LinSystem()
    s.add_var("v", 0, 1)
    s.add_row({"v": 2}, 1)
    assert solve(s)["v"] == H


def test_bound_conflict_has_certificate():
    s = LinSystem()
    s.add_var("v", 0, 1)
    s.add_row({"v": 1}, 2)
    with pytest.raises(Infeasible) as exc:
        solve(s)
    assert check_certificate(s, exc.value.certificate)


def test_maximize_on_simplex():
    s = LinSystem()
    s.add_var(1, 0)
    s.add_var(2, 0)
    s.add_row({1: 1, 2: 1}, 1)
    sol = solve(s, {1: 1})
    assert sol.value == 1 and sol[1] == 1 and sol[2] == 0


def test_unbounded():
    s = LinSystem()
    s.add_var("x", 0)
    with pytest.raises(Unbounded):
        solve(s, {"x": 1})


def test_free_variables():
    s = LinSystem()
    s.add_var("x", None, None)
    s.add_var("y", None, 3)
    s.add_row({"x": 1, "y": 1}, -5)
    s.add_row({"x": 1, "y": -1}, 1)
    sol = solve(s)
    assert (sol["x"], sol["y"]) == (-2, -3)


def test_affine_rank():
    assert affine_rank([(0, 1), (1, 0)]) == 1
    assert affine_rank([(0, 0), (1, 0), (0, 1)]) == 2
    assert rank([(1, 2), (2, 4)]) == 1
    with pytest.raises(DimensionMismatch):
        affine_rank([(0, 0), (1,)])


def test_vertex_test():
    s = LinSystem()
    s.add_var(0, 0)
    s.add_var(1, 0)
    s.add_row({0: 1, 1: 1}, 1)
    assert not vertex_test((H, H), s)
    assert vertex_test((1, 0), s)


small = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_feasible_systems_are_solved(nvars, nrows, data):
    # build a system around a known point, so it is feasible by construction
    point = [data.draw(st.fractions(0, 2, max_denominator=3)) for _ in range(nvars)]
    s = LinSystem()
    for i in range(nvars):
        s.add_var(i, 0, 2)
    for _ in range(nrows):
        coeffs = {i: data.draw(small) for i in range(nvars)}
        s.add_row(coeffs, sum(c * point[i] for i, c in coeffs.items()))
    sol = solve(s)
    assert s.satisfied_by(sol.assignment)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.data())
def test_solver_outcomes_are_certified(nvars, nrows, data):
    s = LinSystem()
    for i in range(nvars):
        s.add_var(i, 0, 1)
    for _ in range(nrows):
        s.add_row({i: data.draw(small) for i in range(nvars)}, data.draw(small))
    try:
        sol = solve(s)
    except Infeasible as exc:
        assert check_certificate(s, exc.certificate)
    else:
        assert s.satisfied_by(sol.assignment)
