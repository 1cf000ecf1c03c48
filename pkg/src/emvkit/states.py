"""States, state-morphisms and pre-states.

On a finite carrier a functional is a dense tuple of :class:`Fraction`
values indexed by element.  On the symbolic families a pre-state is a
:class:`SymbolicState`: a nonnegative combination of the point morphisms
``s_n`` (finitely many weights plus an optional geometric tail) and, on a
representing algebra, a weight on ``s_∞``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import (
    EMVAlgebra,
    FiniteEMV,
    FinSubsets,
    FinSupportProduct,
    Representing,
)
from .errors import (
    DecompositionInfeasible,
    DimensionMismatch,
    DisagreementBug,
    HasTop,
    Infeasible,
    MassExceedsOne,
    NotAdditive,
    NotAState,
    NotAStateOnSub,
    NotSubalgebra,
    UnsupportedCarrier,
)
from .ratlp import LinSystem, affine_rank, rat, solve, vertex_test
from .structure import (
    chain_height,
    ideal_generated,
    maximal_ideals,
    quotient,
    subalgebra_closure,
)

ZERO = Fraction(0)
ONE = Fraction(1)

StateVec = tuple  # tuple[Fraction, ...] indexed by carrier element


class PreStateClass(enum.Enum):
    ZERO = "Zero"
    PRE_STATE_NOT_STRONG = "PreStateNotStrong"
    STRONG_PRE_STATE_NOT_STATE = "StrongPreStateNotState"
    STATE = "State"
    STATE_MORPHISM = "StateMorphism"

    def __str__(self):
        return self.value


# ---------------------------------------------------------------------------
# finite carriers

def _cache(M: FiniteEMV) -> dict:
    return M.__dict__.setdefault("_states_cache", {})


def state_morphisms(M: FiniteEMV) -> list[StateVec]:
    """One morphism per maximal ideal ``I``: ``s(x) = height(x/I) / height(M/I)``."""
    cache = _cache(M)
    if "morphisms" in cache:
        return list(cache["morphisms"])
    out = []
    for I in maximal_ideals(M):
        Q, proj = quotient(M, I)
        h = chain_height(Q)
        if h is None:
            raise DisagreementBug("quotient by a maximal ideal is not a chain",
                                  witness=sorted(I))
        level = [sum(Q.leq(d, c) for d in Q.elements) - 1 for c in Q.elements]
        s = tuple(Fraction(level[proj[x]], h) for x in M.elements)
        out.append(s)
    cache["morphisms"] = tuple(out)
    return out


def additivity_pairs(M: FiniteEMV) -> list[tuple[int, int, int]]:
    """All ``(x, y, x + y)`` with ``0 < x <= y`` (by index) and the sum defined."""
    cache = _cache(M)
    if "pairs" not in cache:
        pairs = []
        for x in range(1, M.n):
            for y in range(x, M.n):
                z = M.partial_add(x, y)
                if z is not None:
                    pairs.append((x, y, z))
        cache["pairs"] = tuple(pairs)
    return list(cache["pairs"])


def state_polytope(M: FiniteEMV) -> LinSystem:
    """One variable per element in [0,1]; ``s(0) = 0``, ``s(top) = 1`` and additivity."""
    if M.top is None:
        raise UnsupportedCarrier("finite carrier without top")
    sys = LinSystem()
    for x in M.elements:
        sys.add_var(x, 0, 1)
    sys.add_row({0: 1}, 0)
    sys.add_row({M.top: 1}, 1)
    for x, y, z in additivity_pairs(M):
        coeffs: dict[int, int] = {}
        for k, c in ((x, 1), (y, 1), (z, -1)):
            coeffs[k] = coeffs.get(k, 0) + c
        sys.add_row(coeffs, 0)
    return sys


def _as_vector(M: FiniteEMV, f) -> StateVec:
    if isinstance(f, Mapping):
        f = [f[x] for x in M.elements]
    if len(f) != M.n:
        raise DimensionMismatch(f"expected {M.n} values, got {len(f)}")
    return tuple(rat(v) for v in f)


def additivity_witness(M: FiniteEMV, f: StateVec):
    if f[0] != 0:
        return (0, 0)
    for x, y, z in additivity_pairs(M):
        if f[z] != f[x] + f[y]:
            return (x, y)
    return None


def morphism_witness(M: FiniteEMV, f: StateVec):
    """A pair with ``s(x ∧ y) ≠ min(s(x), s(y))`` or ``None``."""
    for x, y in itertools.combinations(M.elements, 2):
        if f[M.meet(x, y)] != min(f[x], f[y]):
            return (x, y)
    return None


def kernel(M: FiniteEMV, f: StateVec) -> frozenset:
    return frozenset(x for x in M.elements if f[x] == 0)


@dataclass
class StateReport:
    is_additive: bool
    in_range: bool
    attains_one: bool
    is_state: bool
    is_morphism: bool
    is_extremal: bool
    kernel: frozenset
    kernel_is_maximal: bool
    witnesses: dict = field(default_factory=dict)


def check_state(M: FiniteEMV, f) -> StateReport:
    """Classify a functional; for states, morphism ⇔ maximal kernel ⇔ vertex is asserted."""
    f = _as_vector(M, f)
    witnesses = {}
    in_range = all(0 <= v <= 1 for v in f)
    add_w = additivity_witness(M, f)
    if add_w is not None:
        witnesses["additivity"] = add_w
    attains = any(v == 1 for v in f)
    is_state = in_range and add_w is None and attains
    ker = kernel(M, f)
    ker_max = ker in maximal_ideals(M)
    morph = extremal = False
    if is_state:
        mw = morphism_witness(M, f)
        morph = mw is None
        if mw is not None:
            witnesses["morphism"] = mw
        extremal = vertex_test(f, state_polytope(M))
        if not morph == ker_max == extremal:
            raise DisagreementBug(
                f"morphism={morph}, maximal kernel={ker_max}, vertex={extremal} disagree",
                witness=[str(v) for v in f])
    return StateReport(add_w is None, in_range, attains, is_state, morph, extremal, ker,
                       ker_max, witnesses)


def km_decompose(M: FiniteEMV, s) -> tuple[Fraction, ...]:
    """Barycentric weights of a state over ``state_morphisms(M)``."""
    s = _as_vector(M, s)
    if not check_state(M, s).is_state:
        raise NotAState("input is not a state", witness=[str(v) for v in s])
    morphs = state_morphisms(M)
    if affine_rank(morphs) != len(morphs) - 1:
        raise DisagreementBug("state-morphisms are affinely dependent")
    sys = LinSystem()
    for i in range(len(morphs)):
        sys.add_var(i, 0, None)
    sys.add_row({i: 1 for i in range(len(morphs))}, 1)
    for x in M.elements:
        sys.add_row({i: m[x] for i, m in enumerate(morphs)}, s[x])
    try:
        sol = solve(sys)
    except Infeasible as exc:
        raise DecompositionInfeasible("no convex decomposition found",
                                      witness=exc.certificate) from exc
    return tuple(sol[i] for i in range(len(morphs)))


def convex_combination(vectors: Sequence[StateVec], weights: Sequence) -> StateVec:
    if len(vectors) != len(weights):
        raise DimensionMismatch("weights and vectors differ in number")
    n = len(vectors[0])
    return tuple(sum((rat(w) * v[x] for w, v in zip(weights, vectors)), ZERO) for x in range(n))


def horn_tarski_extend(M: FiniteEMV, M0, s0: Mapping, *, morphism: bool = False) -> StateVec:
    """Extend a state (or state-morphism) on the subalgebra ``M0`` to all of ``M``.

    State mode solves the state polytope with ``s(x) = s0(x)`` pinned on
    ``M0``; morphism mode extends ``Ker(s0)`` to a maximal ideal of ``M``.
    """
    M0 = frozenset(M0)
    if subalgebra_closure(M, M0) != M0:
        raise NotSubalgebra("element set is not a subalgebra", witness=sorted(M0))
    s0 = {x: rat(v) for x, v in s0.items()}
    if set(s0) != M0:
        raise NotAStateOnSub("values must be given exactly on the subalgebra")
    if s0[0] != 0 or not all(0 <= v <= 1 for v in s0.values()) or 1 not in s0.values():
        raise NotAStateOnSub("not a [0,1]-valued functional attaining 1 with s(0)=0")
    for x, y in itertools.product(M0, repeat=2):
        z = M.partial_add(x, y)
        if z is not None and s0[z] != s0[x] + s0[y]:
            raise NotAStateOnSub("not additive on the subalgebra", witness=[x, y])

    if morphism:
        for x, y in itertools.product(M0, repeat=2):
            if s0[M.meet(x, y)] != min(s0[x], s0[y]):
                raise NotAStateOnSub("not a state-morphism on the subalgebra", witness=[x, y])
        J = ideal_generated(M, [x for x in M0 if s0[x] == 0])
        for I, m in zip(maximal_ideals(M), state_morphisms(M)):
            if J <= I:
                if any(m[x] != s0[x] for x in M0):
                    raise DisagreementBug("extended morphism does not restrict to s0")
                return m
        raise Infeasible("kernel does not extend to a maximal ideal")

    sys = state_polytope(M)
    for x in sorted(M0):
        sys.add_row({x: 1}, s0[x])
    sol = solve(sys)
    return tuple(sol[x] for x in M.elements)


# ---------------------------------------------------------------------------
# symbolic pre-states

@dataclass(frozen=True)
class Tail:
    """Weights ``c · q^(n - n0)`` for every ``n >= n0``."""

    n0: int
    c: Fraction
    q: Fraction

    def __post_init__(self):
        if not 0 < self.q < 1 or self.c < 0 or self.n0 < 0:
            raise NotAState("tail needs 0 < q < 1, c >= 0, n0 >= 0")

    def weight(self, n: int) -> Fraction:
        return self.c * self.q ** (n - self.n0) if n >= self.n0 else ZERO

    @property
    def mass(self) -> Fraction:
        return self.c / (1 - self.q)


@dataclass(frozen=True)
class SymbolicState:
    """``Σ λ_n s_n (+ tail) + λ_∞ s_∞`` with exact weights."""

    base: tuple[tuple[int, Fraction], ...] = ()
    tail: Tail | None = None
    inf: Fraction = ZERO

    def __post_init__(self):
        merged: dict[int, Fraction] = {}
        for n, w in self.base:
            merged[int(n)] = merged.get(int(n), ZERO) + rat(w)
        object.__setattr__(self, "base", tuple(sorted((n, w) for n, w in merged.items() if w)))
        object.__setattr__(self, "inf", rat(self.inf))
        if any(w < 0 for _, w in self.base) or self.inf < 0:
            raise NotAState("weights must be nonnegative")

    @classmethod
    def of(cls, weights: Mapping[int, object] | None = None, tail: Tail | None = None,
           inf=0) -> "SymbolicState":
        return cls(tuple((n, rat(w)) for n, w in (weights or {}).items()), tail, rat(inf))

    def weight(self, n: int) -> Fraction:
        w = dict(self.base).get(n, ZERO)
        return w + self.tail.weight(n) if self.tail else w

    @property
    def finite_support(self) -> bool:
        return self.tail is None or self.tail.c == 0

    @property
    def mass_on_M(self) -> Fraction:
        m = sum((w for _, w in self.base), ZERO)
        return m + (self.tail.mass if self.tail else ZERO)

    @property
    def mass(self) -> Fraction:
        return self.mass_on_M + self.inf

    def support(self) -> list[int]:
        return [n for n, _ in self.base]

    def scaled(self, r) -> "SymbolicState":
        r = rat(r)
        tail = Tail(self.tail.n0, self.tail.c * r, self.tail.q) if self.tail else None
        return SymbolicState(tuple((n, w * r) for n, w in self.base), tail, self.inf * r)


def point_morphism(n: int) -> SymbolicState:
    return SymbolicState(((n, ONE),))


INFINITY_MORPHISM = SymbolicState(inf=ONE)


def _coordinates(M: EMVAlgebra, x) -> list[tuple[int, Fraction]]:
    if isinstance(M, FinSubsets):
        return [(n, ONE) for n in x]
    if isinstance(M, FinSupportProduct):
        return [(n, Fraction(v, M.k)) for n, v in x]
    raise UnsupportedCarrier(f"no point morphisms on {M!r}")


def evaluate(M: EMVAlgebra, s: SymbolicState, x) -> Fraction:
    """Value of a symbolic (pre-)state at an element."""
    if isinstance(M, Representing):
        inner = sum((s.weight(n) * c for n, c in _coordinates(M.inner, x.x)), ZERO)
        return s.mass - inner if x.complement else inner
    return sum((s.weight(n) * c for n, c in _coordinates(M, x)), ZERO)


def _top_free(M: EMVAlgebra) -> EMVAlgebra:
    if isinstance(M, FiniteEMV) or M.top is not None:
        raise HasTop(f"{M!r} has a top element")
    if not isinstance(M, (FinSubsets, FinSupportProduct)):
        raise UnsupportedCarrier(f"no symbolic states on {M!r}")
    return M


def extend_to_representing(M: EMVAlgebra, s: SymbolicState) -> SymbolicState:
    """The unique state on N restricting to the pre-state ``s``: ``λ_∞ = 1 - mass``."""
    _top_free(M)
    if s.inf:
        raise NotAState("input must be a pre-state on M (no s_∞ weight)")
    if s.mass_on_M > 1:
        raise MassExceedsOne(f"mass {s.mass_on_M} exceeds 1")
    return SymbolicState(s.base, s.tail, ONE - s.mass_on_M)


def extend_strong(M: EMVAlgebra, s: SymbolicState) -> SymbolicState:
    """Extension of a strong pre-state as ``r·~(s/r) + (1 - r)·s_∞`` with ``r = max s``."""
    _top_free(M)
    if not s.finite_support:
        raise NotAState("only strong pre-states (finite support) extend this way")
    r = s.mass_on_M
    if r > 1:
        raise MassExceedsOne(f"mass {r} exceeds 1")
    if r == 0:
        return INFINITY_MORPHISM
    normalized = extend_to_representing(M, s.scaled(1 / r))
    mixed = normalized.scaled(r)
    return SymbolicState(mixed.base, mixed.tail, mixed.inf + (1 - r))


@dataclass(frozen=True)
class Restriction:
    state: SymbolicState
    is_state: bool


def restrict_from_representing(M: EMVAlgebra, s: SymbolicState) -> Restriction:
    """Restriction of a state on N to M; a state on M iff it attains 1."""
    _top_free(M)
    if s.mass != 1:
        raise NotAState(f"a state on N has total mass 1, got {s.mass}")
    r = SymbolicState(s.base, s.tail, ZERO)
    return Restriction(r, r.finite_support and r.mass_on_M == 1)


def extend_restrict(M: EMVAlgebra, direction: str, s: SymbolicState):
    if direction in ("M->N", "up"):
        return extend_to_representing(M, s)
    if direction in ("N->M", "down"):
        return restrict_from_representing(M, s)
    raise ValueError(f"direction must be 'M->N' or 'N->M', got {direction!r}")


def probe_elements(M: EMVAlgebra, s: SymbolicState, budget: int = 6) -> list:
    """Finite sample of elements around the support of ``s``."""
    if isinstance(M, Representing):
        base = probe_elements(M.inner, s, budget)
        return [M.direct(x) for x in base] + [M.complement(x) for x in base]
    idx = s.support()
    if s.tail:
        idx += range(s.tail.n0, s.tail.n0 + 3)
    idx = sorted(set(idx))[:budget]
    fresh = (max(idx) if idx else 0) + 1
    idx.append(fresh)
    if isinstance(M, FinSubsets):
        return [frozenset(c) for r in range(len(idx) + 1) for c in itertools.combinations(idx, r)]
    if isinstance(M, FinSupportProduct):
        levels = range(M.k + 1) if (M.k + 1) ** len(idx) <= 4096 else sorted({0, 1, M.k})
        return [tuple((i, v) for i, v in zip(idx, lv) if v)
                for lv in itertools.product(levels, repeat=len(idx))]
    raise UnsupportedCarrier(f"no symbolic states on {M!r}")


def symbolic_morphism_witness(M: EMVAlgebra, s: SymbolicState, sample) -> tuple | None:
    for x, y in itertools.combinations(sample, 2):
        if evaluate(M, s, M.meet(x, y)) != min(evaluate(M, s, x), evaluate(M, s, y)):
            return (x, y)
    return None


def classify_prestate(M: EMVAlgebra, f, budget: int = 6) -> PreStateClass:
    """Zero / PreStateNotStrong / StrongPreStateNotState / State / StateMorphism."""
    if isinstance(M, FiniteEMV):
        f = _as_vector(M, f)
        if not all(0 <= v <= 1 for v in f):
            raise NotAState("values outside [0,1]")
        w = additivity_witness(M, f)
        if w is not None:
            raise NotAdditive("not additive", witness=list(w))
        top = max(f)
        if top == 0:
            return PreStateClass.ZERO
        if top < 1:
            return PreStateClass.STRONG_PRE_STATE_NOT_STATE
        if morphism_witness(M, f) is None:
            return PreStateClass.STATE_MORPHISM
        return PreStateClass.STATE

    if not isinstance(f, SymbolicState):
        raise NotAState("symbolic carriers take a SymbolicState")
    sample = probe_elements(M, f, budget)
    for x, y in itertools.product(sample, repeat=2):
        z = M.partial_add(x, y)
        if z is not None and evaluate(M, f, z) != evaluate(M, f, x) + evaluate(M, f, y):
            raise NotAdditive("not additive on the sample", witness=[x, y])
    if isinstance(M, Representing):
        if f.mass > 1:
            raise NotAState(f"values exceed 1 (mass {f.mass})")
        sup, attained = f.mass, True
    else:
        if f.inf:
            raise NotAState("s_∞ weight only makes sense on a representing algebra")
        sup, attained = f.mass_on_M, f.finite_support
        if sup > 1:
            raise NotAState(f"values exceed 1 (supremum {sup})")
    if sup == 0:
        return PreStateClass.ZERO
    if not attained:
        return PreStateClass.PRE_STATE_NOT_STRONG
    if sup < 1:
        return PreStateClass.STRONG_PRE_STATE_NOT_STATE
    if symbolic_morphism_witness(M, f, sample) is None:
        return PreStateClass.STATE_MORPHISM
    return PreStateClass.STATE
