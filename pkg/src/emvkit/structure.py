"""Ideals, quotients, subalgebras, the GEA round trip and the representing algebra."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .algebra import (
    ChangLex,
    EMVAlgebra,
    FiniteEMV,
    FinSubsets,
    FinSupportProduct,
    Representing,
    idempotent_atoms,
    natural_order,
    verify_axioms,
)
from .errors import (
    DisagreementBug,
    HasTop,
    HypothesisFailure,
    ImproperIdeal,
    NoBooleanCover,
    NotALattice,
    RdpViolation,
    Unsupported,
    ZeroAlgebra,
)

Ideal = frozenset

BRUTE_FORCE_LIMIT = 12


def _require_finite(M, what):
    if not isinstance(M, FiniteEMV):
        raise Unsupported(f"{what} needs a finite carrier, got {M!r}")


def _cache(M: FiniteEMV) -> dict:
    # results derived from an immutable table may be memoized on it
    try:
        return M.__dict__.setdefault("_structure_cache", {})
    except AttributeError:  # pragma: no cover
        return {}


def is_ideal(M: FiniteEMV, S: Iterable[int]) -> bool:
    S = set(S)
    if 0 not in S:
        return False
    for y in S:
        for x in M.elements:
            if M.leq(x, y) and x not in S:
                return False
    return all(M.oplus(x, y) in S for x in S for y in S)


def ideal_generated(M: FiniteEMV, S: Iterable[int]) -> Ideal:
    """Least ideal containing ``S``: close under ``↓`` and ``⊕`` to a fixpoint."""
    _require_finite(M, "ideal_generated")
    cur = set(S) | {0}
    while True:
        nxt = set(cur)
        for y in cur:
            nxt.update(x for x in M.elements if M.leq(x, y))
        nxt.update(M.oplus(x, y) for x in cur for y in cur)
        if nxt == cur:
            return Ideal(cur)
        cur = nxt


def maximal_ideals_bruteforce(M: FiniteEMV) -> list[Ideal]:
    """Every maximal ideal, by enumerating all subsets containing 0."""
    _require_finite(M, "maximal_ideals_bruteforce")
    rest = list(range(1, M.n))
    proper = []
    for r in range(len(rest) + 1):
        for extra in itertools.combinations(rest, r):
            S = {0, *extra}
            if len(S) < M.n and is_ideal(M, S):
                proper.append(Ideal(S))
    return [I for I in proper if not any(I < J for J in proper)]


def maximal_ideals(M: FiniteEMV, *, cross_check: bool = True) -> list[Ideal]:
    """Maximal ideals ``{x : x ∧ e = 0}`` for each idempotent atom ``e``.

    Carriers of at most 12 elements are also checked against the subset
    brute force; a mismatch raises :class:`DisagreementBug`.
    """
    _require_finite(M, "maximal_ideals")
    cache = _cache(M)
    if "maxideals" in cache:
        return list(cache["maxideals"])
    if M.n == 1:
        raise ZeroAlgebra("the zero algebra has no maximal ideals")
    out = []
    for e in idempotent_atoms(M):
        I = Ideal(x for x in M.elements if M.meet(x, e) == 0)
        if I not in out:
            out.append(I)
    if cross_check and M.n <= BRUTE_FORCE_LIMIT:
        oracle = maximal_ideals_bruteforce(M)
        if set(oracle) != set(out):
            raise DisagreementBug("atom construction disagrees with brute force",
                                  witness=[sorted(I) for I in oracle])
    cache["maxideals"] = tuple(out)
    return out


def is_prime(M: FiniteEMV, I: Ideal) -> bool:
    for x, y in itertools.product(M.elements, repeat=2):
        a = M.common_idempotent(x, y)
        if M.odot(x, M.lam(a, y)) not in I and M.odot(y, M.lam(a, x)) not in I:
            return False
    return True


# ---------------------------------------------------------------------------
# radical and infinitesimals

def multiples_defined(M: EMVAlgebra, x, limit: int = 64):
    """Iterate ``n·x``: ``False`` once a multiple is undefined, ``True`` when
    ``n·x`` stops growing (only possible for ``x = 0`` by cancellation), and
    ``None`` when the limit is reached without a decision."""
    acc = x
    for _ in range(limit):
        nxt = M.partial_add(acc, x)
        if nxt is None:
            return False
        if nxt == acc:
            return True
        acc = nxt
    return None


def in_radical(M: EMVAlgebra, x) -> bool:
    """Family rule for membership in the radical of a symbolic carrier."""
    if isinstance(M, ChangLex):
        return x[0] == 0
    if isinstance(M, (FinSubsets, FinSupportProduct)):
        return x == M.zero
    raise Unsupported(f"no radical rule for {M!r}")


def is_infinitesimal(M: EMVAlgebra, x, limit: int = 64) -> bool:
    verdict = multiples_defined(M, x, limit)
    if verdict is not None:
        return verdict
    if isinstance(M, ChangLex):
        return M.is_infinitesimal(x)
    raise DisagreementBug(f"cannot decide whether {x!r} is infinitesimal")


def radical_and_infinitesimals(M: EMVAlgebra, bound: int | None = None):
    """``(Rad, Infinit)`` as sets; symbolic carriers are sampled up to ``bound``.

    The two sets must agree; a mismatch raises :class:`DisagreementBug`.
    """
    if isinstance(M, FiniteEMV):
        rad = frozenset(M.elements)
        for I in maximal_ideals(M):
            rad &= I
        inf = frozenset(x for x in M.elements if is_infinitesimal(M, x))
    else:
        if isinstance(M, Representing):
            raise Unsupported("radical of a representing algebra is not supported")
        if bound is None:
            raise Unsupported("symbolic carriers need a sampling bound")
        sample = M.enumerate(bound)
        rad = frozenset(x for x in sample if in_radical(M, x))
        inf = frozenset(x for x in sample if is_infinitesimal(M, x))
    if rad != inf:
        raise DisagreementBug("radical and infinitesimals differ",
                              witness=[sorted(map(repr, rad ^ inf))])
    return rad, inf


# ---------------------------------------------------------------------------
# quotients and subalgebras

def quotient(M: FiniteEMV, I: Iterable[int]) -> tuple[FiniteEMV, tuple[int, ...]]:
    """``M/I`` with ``x ~ y`` iff ``x <= y ⊕ i`` and ``y <= x ⊕ j`` for some ``i, j ∈ I``.

    Returns the quotient algebra and the projection (element -> class index).
    Classes are numbered by their least member, so the class of 0 is 0.
    """
    _require_finite(M, "quotient")
    I = frozenset(I)
    if not is_ideal(M, I):
        raise ImproperIdeal("not an ideal", witness=sorted(I))
    if len(I) == M.n:
        raise ImproperIdeal("the whole carrier is not a proper ideal", witness=sorted(I))

    def below_mod(x, y):
        return any(M.leq(x, M.oplus(y, i)) for i in I)

    proj = [-1] * M.n
    reps: list[int] = []
    for x in M.elements:
        if proj[x] >= 0:
            continue
        proj[x] = len(reps)
        for y in range(x + 1, M.n):
            if proj[y] < 0 and below_mod(x, y) and below_mod(y, x):
                proj[y] = len(reps)
        reps.append(x)
    rows = [[proj[M.oplus(x, y)] for y in reps] for x in reps]
    for x, y in itertools.product(M.elements, repeat=2):
        if proj[M.oplus(x, y)] != rows[proj[x]][proj[y]]:
            raise DisagreementBug("⊕ is not compatible with the ideal", witness=[x, y])
    labels = ["[" + M.labels[r] + "]" for r in reps]
    return FiniteEMV(rows, labels, name=f"{M.name}/I"), tuple(proj)


def chain_height(M: FiniteEMV) -> int | None:
    """Height of a totally ordered carrier, ``None`` if not a chain."""
    for x, y in itertools.combinations(M.elements, 2):
        if not (M.leq(x, y) or M.leq(y, x)):
            return None
    return M.n - 1


def subalgebra_closure(M: FiniteEMV, S: Iterable[int]) -> frozenset:
    """Least subset containing ``S ∪ {0}`` closed under ``⊕, ∨, ∧`` and local complements."""
    _require_finite(M, "subalgebra_closure")
    cur = set(S) | {0}
    while True:
        nxt = set(cur)
        for x in cur:
            for y in cur:
                nxt.add(M.oplus(x, y))
                nxt.add(M.join(x, y))
                nxt.add(M.meet(x, y))
        for b in cur:
            if M.is_idempotent(b):
                nxt.update(M.lam(b, x) for x in cur if M.leq(x, b))
        if nxt == cur:
            return frozenset(cur)
        cur = nxt


# ---------------------------------------------------------------------------
# generalized effect algebras

@dataclass(frozen=True)
class GeaTable:
    """Partial addition on ``0..n-1``; ``None`` marks undefined sums."""

    n: int
    plus: tuple[tuple[int | None, ...], ...]

    def add(self, x, y):
        return self.plus[x][y]

    def defined(self, x, y) -> bool:
        return self.plus[x][y] is not None

    def leq(self, x, y) -> bool:
        return any(self.plus[x][z] == y for z in range(self.n))

    def minus(self, y, x):
        """The unique ``z`` with ``x + z = y`` or ``None``."""
        for z in range(self.n):
            if self.plus[x][z] == y:
                return z
        return None


def check_gea(E: GeaTable, rdp_limit: int = 9) -> None:
    """Raise :class:`RdpViolation` if a GEA axiom or RDP fails."""
    n, P = E.n, E.plus
    R = range(n)
    for x in R:
        if P[x][0] != x:
            raise RdpViolation("0 is not neutral", witness=[x])
    for x, y in itertools.product(R, repeat=2):
        if P[x][y] != P[y][x]:
            raise RdpViolation("not commutative", witness=[x, y])
        if P[x][y] == 0 and (x, y) != (0, 0):
            raise RdpViolation("not positive", witness=[x, y])
    for x, y, z in itertools.product(R, repeat=3):
        xy = P[x][y]
        if xy is not None and P[xy][z] is not None:
            yz = P[y][z]
            if yz is None or P[x][yz] != P[xy][z]:
                raise RdpViolation("not associative", witness=[x, y, z])
        if y != z and P[x][y] is not None and P[x][y] == P[x][z]:
            raise RdpViolation("not cancellative", witness=[x, y, z])
    if n > rdp_limit:
        return
    for x1, x2, y1, y2 in itertools.product(R, repeat=4):
        s = P[x1][x2]
        if s is None or P[y1][y2] != s:
            continue
        if not _riesz_witness(E, x1, x2, y1, y2):
            raise RdpViolation("no Riesz refinement", witness=[x1, x2, y1, y2])


def _riesz_witness(E: GeaTable, x1, x2, y1, y2):
    for c11 in range(E.n):
        c12 = E.minus(x1, c11)
        c21 = E.minus(y1, c11)
        if c12 is None or c21 is None:
            continue
        c22 = E.minus(x2, c21)
        if c22 is not None and E.add(c12, c22) == y2:
            return c11, c12, c21, c22
    return None


def to_gea(M: FiniteEMV, rdp_limit: int = 9) -> GeaTable:
    """Partial addition ``x + y = x ⊕ y`` when ``x ⊙ y = 0``, with axioms and RDP checked."""
    _require_finite(M, "to_gea")
    plus = tuple(tuple(M.partial_add(x, y) for y in M.elements) for x in M.elements)
    E = GeaTable(M.n, plus)
    check_gea(E, rdp_limit)
    for x, y in itertools.product(M.elements, repeat=2):
        if E.leq(x, y) != M.leq(x, y):
            raise DisagreementBug("GEA order differs from the natural order", witness=[x, y])
    return E


def gea_to_emv(E: GeaTable, labels=None) -> FiniteEMV:
    """Total ``x ⊕ y = x + (y ∧ (a - x))`` for any Boolean ``a >= x, y``."""
    n = E.n
    check_gea(E)
    R = range(n)
    leq = [[E.leq(x, y) for y in R] for x in R]

    def lub_glb(x, y, up):
        cands = [z for z in R if (leq[x][z] and leq[y][z] if up else leq[z][x] and leq[z][y])]
        for z in cands:
            if all((leq[z][w] if up else leq[w][z]) for w in cands):
                return z
        raise NotALattice("GEA order is not a lattice", witness=[x, y])

    meet = [[lub_glb(x, y, False) for y in R] for x in R]
    for x, y in itertools.product(R, repeat=2):
        lub_glb(x, y, True)

    def local_oplus(x, y, b):
        return E.add(x, meet[y][E.minus(b, x)])

    def is_boolean(a):
        return all(local_oplus(a, a, b) == a for b in R if leq[a][b])

    boolean = [a for a in R if is_boolean(a)]
    rows = []
    for x in R:
        row = []
        for y in R:
            covers = [a for a in boolean if leq[x][a] and leq[y][a]]
            if not covers:
                raise NoBooleanCover("no Boolean element above both", witness=[x, y])
            vals = {local_oplus(x, y, a) for a in covers}
            if len(vals) != 1 or None in vals:
                raise DisagreementBug("⊕ depends on the Boolean cover", witness=[x, y])
            row.append(vals.pop())
        rows.append(row)
    M = FiniteEMV(rows, labels)
    if {a for a in R if M.is_idempotent(a)} != set(boolean):
        raise DisagreementBug("Boolean elements are not the idempotents")
    return M


# ---------------------------------------------------------------------------
# lattice from ⊕ alone

def monoid_reconstruct(M: FiniteEMV):
    """Join and meet tables rebuilt from ``⊕`` via
    ``x ∨ y = (x ⊙ λ_a(y)) ⊕ y`` and ``x ∧ y = x ⊙ (λ_a(x) ⊕ y)``.

    The tables are compared with the natural-order lattice.
    """
    _require_finite(M, "monoid_reconstruct")
    report = verify_axioms(M)
    bad = [v for v in report.violations if v.axiom.startswith(("mv.", "cover", "monoid."))]
    if bad:
        v = bad[0]
        raise HypothesisFailure(f"{v.axiom}: {v.detail}", witness=list(v.witness))
    R = M.elements
    join, meet = [], []
    for x in R:
        jrow, mrow = [], []
        for y in R:
            a = M.common_idempotent(x, y)
            jrow.append(M.oplus(M.odot(x, M.lam(a, y)), y))
            mrow.append(M.odot(x, M.oplus(M.lam(a, x), y)))
        join.append(tuple(jrow))
        meet.append(tuple(mrow))
    join, meet = tuple(join), tuple(meet)
    _, njoin, nmeet = natural_order(M).tables()
    if join != njoin or meet != nmeet:
        raise DisagreementBug("reconstructed lattice differs from the natural order")
    return join, meet


# ---------------------------------------------------------------------------

def representing_mv(M: EMVAlgebra) -> Representing:
    """The MV-algebra containing top-free ``M`` as a maximal ideal."""
    if isinstance(M, FiniteEMV):
        raise HasTop("finite EMV-algebras have a top element")
    return Representing(M)


def ideal_to_json(M: EMVAlgebra, I) -> list:
    return [M.to_json(x) for x in sorted(I, key=_sort_key)]


def _sort_key(x):
    if isinstance(x, frozenset):
        return (len(x), sorted(x))
    return x


def direct_image_witness(N: Representing, budget: int):
    """Sampled check that the Direct image is an ideal of ``N``.

    Returns ``None`` or a pair ``(p, q)`` with ``q`` direct, ``p <= q`` and ``p``
    complemented, or with ``p, q`` direct and ``p ⊕ q`` complemented.
    """
    sample = N.enumerate(budget)
    direct = [p for p in sample if not p.complement]
    for q in direct:
        for p in sample:
            if p.complement and N.leq(p, q):
                return (p, q)
    for p in direct:
        for q in direct:
            if N.oplus(p, q).complement:
                return (p, q)
    return None
