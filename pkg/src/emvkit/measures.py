"""Signed measures on finite carriers and the Jordan-measure lattice.

A signed measure on a finite carrier is a tuple of :class:`Fraction` values
indexed by element, additive on every defined partial sum.  Lattice
operations use the two-part decomposition formula; the sup-construction
(dynamic programming over first parts) serves as the independent oracle.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import FiniteEMV, FinSubsets, Representing
from .errors import (
    DisagreementBug,
    NotAdditive,
    NotAState,
    NotFiniteSupport,
    NotSubadditive,
    UnsupportedCarrier,
)
from .ratlp import LinSystem, rat, solve
from .states import (
    SymbolicState,
    additivity_pairs,
    check_state,
    evaluate,
    km_decompose,
    state_morphisms,
)

ZERO = Fraction(0)
Measure = tuple  # tuple[Fraction, ...]


def _cache(M: FiniteEMV) -> dict:
    return M.__dict__.setdefault("_measures_cache", {})


def _differences(M: FiniteEMV) -> dict[int, list[tuple[int, int]]]:
    """``x -> [(p, z), ...]`` with ``p + z = x`` and ``p != 0``."""
    cache = _cache(M)
    if "diff" not in cache:
        diff: dict[int, list[tuple[int, int]]] = {x: [] for x in M.elements}
        for p in range(1, M.n):
            for z in M.elements:
                x = M.partial_add(p, z)
                if x is not None:
                    diff[x].append((p, z))
        cache["diff"] = diff
    return cache["diff"]


def height(M: FiniteEMV, x: int | None = None):
    """Length of the longest strictly increasing chain from 0 to ``x`` (all heights if None)."""
    cache = _cache(M)
    if "height" not in cache:
        h = [0] * M.n
        # elements sorted by the size of their down-set form a linear extension
        order = sorted(M.elements, key=lambda e: bin(M._down[e]).count("1"))
        for e in order:
            below = [d for d in M.elements if d != e and M.leq(d, e)]
            h[e] = max((h[d] + 1 for d in below), default=0)
        cache["height"] = tuple(h)
    return cache["height"] if x is None else cache["height"][x]


def decompositions(M: FiniteEMV, x: int, max_parts: int | None = None) -> list[tuple[int, ...]]:
    """Sorted multisets of nonzero parts whose partial sum is defined and equals ``x``."""
    if max_parts is None:
        max_parts = height(M, x)
    diff = _differences(M)
    memo: dict[tuple[int, int, int], list[tuple[int, ...]]] = {}

    def go(y: int, least: int, budget: int) -> list[tuple[int, ...]]:
        if y == 0:
            return [()]
        if budget == 0:
            return []
        key = (y, least, budget)
        if key not in memo:
            out = []
            for p, z in diff[y]:
                if p >= least:
                    out.extend((p,) + rest for rest in go(z, p, budget - 1))
            memo[key] = out
        return memo[key]

    return sorted(set(go(x, 1, max_parts)))


def _as_measure(M: FiniteEMV, m) -> Measure:
    if isinstance(m, Mapping):
        m = [m[x] for x in M.elements]
    if len(m) != M.n:
        raise NotAdditive(f"expected {M.n} values, got {len(m)}")
    return tuple(rat(v) for v in m)


def is_signed_measure(M: FiniteEMV, m: Measure):
    """``None`` if additive, else a witness pair."""
    if m[0] != 0:
        return (0, 0)
    for x, y, z in additivity_pairs(M):
        if m[z] != m[x] + m[y]:
            return (x, y)
    return None


def _require_additive(M: FiniteEMV, m: Measure) -> Measure:
    m = _as_measure(M, m)
    w = is_signed_measure(M, m)
    if w is not None:
        raise NotAdditive("not a signed measure", witness=list(w))
    return m


def sup_construction(M: FiniteEMV, d) -> Measure:
    """``m(x) = max`` over decompositions of ``Σ d(parts)`` for subadditive ``d``."""
    d = _as_measure(M, d)
    for x, y, z in additivity_pairs(M):
        if d[z] > d[x] + d[y]:
            raise NotSubadditive("d(x+y) > d(x) + d(y)", witness=[x, y])
    diff = _differences(M)
    m: list[Fraction | None] = [None] * M.n
    m[0] = ZERO
    for x in sorted(M.elements, key=lambda e: height(M, e)):
        if x:
            # every z with p + z = x, p != 0, sits strictly lower
            m[x] = max(d[p] + m[z] for p, z in diff[x])
    out = tuple(m)
    if is_signed_measure(M, out) is not None:
        raise DisagreementBug("sup-construction is not additive", witness=list(is_signed_measure(M, out)))
    return out


def _two_part(M: FiniteEMV, m1: Measure, m2: Measure, pick) -> Measure:
    diff = _differences(M)
    vals = [ZERO]
    for x in range(1, M.n):
        cands = [m1[x] + m2[0], m1[0] + m2[x]]
        cands += [m1[p] + m2[z] for p, z in diff[x]]
        vals.append(pick(cands))
    return tuple(vals)


def join(M: FiniteEMV, m1, m2) -> Measure:
    return _two_part(M, _require_additive(M, m1), _require_additive(M, m2), max)


def meet(M: FiniteEMV, m1, m2) -> Measure:
    return _two_part(M, _require_additive(M, m1), _require_additive(M, m2), min)


def add(m1: Measure, m2: Measure) -> Measure:
    return tuple(a + b for a, b in zip(m1, m2))


def neg(m: Measure) -> Measure:
    return tuple(-a for a in m)


def scale(m: Measure, r) -> Measure:
    r = rat(r)
    return tuple(r * a for a in m)


def zero(M: FiniteEMV) -> Measure:
    return (ZERO,) * M.n


def leq_plus(m1: Measure, m2: Measure) -> bool:
    return all(a <= b for a, b in zip(m1, m2))


@dataclass(frozen=True)
class JordanResult:
    join: Measure
    meet: Measure
    pos: Measure
    neg: Measure


def jordan_lattice(M: FiniteEMV, m1, m2) -> JordanResult:
    """Join and meet of ``m1, m2`` plus the Jordan decomposition of ``m1``."""
    m1 = _require_additive(M, m1)
    m2 = _require_additive(M, m2)
    j = _two_part(M, m1, m2, max)
    mt = _two_part(M, m1, m2, min)
    if j != sup_construction(M, [max(a, b) for a, b in zip(m1, m2)]):
        raise DisagreementBug("join differs from the sup-construction")
    if mt != neg(sup_construction(M, [max(-a, -b) for a, b in zip(m1, m2)])):
        raise DisagreementBug("meet differs from the dual sup-construction")
    o = zero(M)
    pos = _two_part(M, m1, o, max)
    negative = neg(_two_part(M, m1, o, min))
    if add(pos, neg(negative)) != m1:
        raise DisagreementBug("m != m+ - m-")
    return JordanResult(j, mt, pos, negative)


# ---------------------------------------------------------------------------
# strong measures on finite subsets

def _weights(m) -> dict[int, Fraction]:
    if isinstance(m, SymbolicState):
        if not m.finite_support or m.inf:
            raise NotFiniteSupport("measure must be a finite combination of point morphisms")
        return dict(m.base)
    return {int(n): rat(w) for n, w in dict(m).items()}


def strong_join_T(m1, m2, *, max_subset: int = 5) -> SymbolicState:
    """Coordinatewise max of weights, checked against the two-part formula."""
    w1, w2 = _weights(m1), _weights(m2)
    support = sorted(set(w1) | set(w2))
    joined = {n: max(w1.get(n, ZERO), w2.get(n, ZERO)) for n in support}
    for r in range(min(len(support), max_subset) + 1):
        for A in itertools.combinations(support, r):
            best = max(
                sum((w1.get(n, ZERO) for n in A1), ZERO)
                + sum((w2.get(n, ZERO) for n in A if n not in A1), ZERO)
                for k in range(len(A) + 1)
                for A1 in itertools.combinations(A, k)
            )
            if best != sum((joined[n] for n in A), ZERO):
                raise DisagreementBug("coordinatewise max differs from the two-part formula",
                                      witness=list(A))
    return SymbolicState.of(joined)


# ---------------------------------------------------------------------------
# discrete integral representation

@dataclass(frozen=True)
class DiscreteMeasure:
    """Weights on state-morphism ids plus an atom at ``s_∞`` (representing carriers)."""

    weights: tuple[tuple[str, Fraction], ...]
    inf: Fraction = ZERO

    @property
    def mass(self) -> Fraction:
        return sum((w for _, w in self.weights), ZERO) + self.inf

    def to_json(self) -> dict:
        from .ratlp import rat_str

        return {"weights": {k: rat_str(w) for k, w in self.weights}, "inf": rat_str(self.inf)}


def morphism_id(k: int) -> str:
    return f"s{k}"


def integral_represent(M, s, *, budget: int = 6) -> DiscreteMeasure:
    """Barycentric measure on the state-morphisms reproducing ``s``."""
    if isinstance(M, FiniteEMV):
        rep = check_state(M, s)
        if not rep.is_state:
            raise NotAState("input is not a state")
        s = tuple(rat(v) for v in (s.values() if isinstance(s, Mapping) else s))
        weights = km_decompose(M, s)
        morphs = state_morphisms(M)
        for x in M.elements:
            if sum((w * t[x] for w, t in zip(weights, morphs)), ZERO) != s[x]:
                raise DisagreementBug("integral does not reproduce the state", witness=[x])
        return DiscreteMeasure(tuple((morphism_id(k), w) for k, w in enumerate(weights) if w))

    inner = M.inner if isinstance(M, Representing) else M
    if not isinstance(inner, FinSubsets):
        raise UnsupportedCarrier(f"no integral representation on {M!r}")
    if not isinstance(s, SymbolicState):
        raise NotAState("symbolic carriers take a SymbolicState")
    if s.mass != 1:
        raise NotAState(f"total mass is {s.mass}, not 1")
    if not s.finite_support:
        raise NotFiniteSupport("geometric tails have no finite discrete representation")
    if isinstance(M, Representing):
        mu = DiscreteMeasure(tuple((f"s{n}~", w) for n, w in s.base), s.inf)
    else:
        if s.inf:
            raise NotAState("s_∞ does not live on this carrier")
        mu = DiscreteMeasure(tuple((f"s{n}", w) for n, w in s.base))
    back = SymbolicState(s.base, None, mu.inf)
    for x in M.enumerate(budget):
        if evaluate(M, back, x) != evaluate(M, s, x):
            raise DisagreementBug("integral does not reproduce the state")
    return mu


# ---------------------------------------------------------------------------
# random generators

def random_rational(rng: random.Random, lo: int = -6, hi: int = 6, max_den: int = 6) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, max_den))


def atoms(M: FiniteEMV) -> list[int]:
    return [x for x in range(1, M.n) if height(M, x) == 1]


def random_signed_measure(M: FiniteEMV, rng: random.Random) -> Measure:
    """Integer combination of morphisms plus an additive perturbation pinned at the atoms."""
    m = zero(M)
    for t in state_morphisms(M):
        m = add(m, scale(t, rng.randint(-3, 3)))
    sys = LinSystem()
    for x in M.elements:
        sys.add_var(x, None, None)
    sys.add_row({0: 1}, 0)
    for x, y, z in additivity_pairs(M):
        coeffs: dict[int, int] = {}
        for k, c in ((x, 1), (y, 1), (z, -1)):
            coeffs[k] = coeffs.get(k, 0) + c
        sys.add_row(coeffs, 0)
    for a in atoms(M):
        sys.add_row({a: 1}, random_rational(rng))
    sol = solve(sys)
    m = add(m, tuple(sol[x] for x in M.elements))
    if is_signed_measure(M, m) is not None:
        raise DisagreementBug("generated measure is not additive")
    return m


def random_positive_measure(M: FiniteEMV, rng: random.Random) -> Measure:
    m = zero(M)
    for t in state_morphisms(M):
        m = add(m, scale(t, Fraction(rng.randint(0, 6), rng.randint(1, 4))))
    return m
