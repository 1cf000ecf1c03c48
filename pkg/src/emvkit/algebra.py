"""Carriers, derived operations and the axiom checker.

A finite EMV-algebra is given by its ``⊕`` table alone; order, lattice,
local complements ``λ_a``, ``⊙`` and the partial sum ``+`` are all derived
from it.  Four infinite families are available symbolically:

* :class:`FinSubsets` -- finite subsets of ℕ under union,
* :class:`FinSupportProduct` -- finitely supported maps ℕ → {0..k},
* :class:`ChangLex` -- Chang's algebra Γ(ℤ ×lex ℤ, (1,0)),
* :class:`Representing` -- the top-completion N of a top-free family.

Elements are plain hashable Python values: ``int`` indices for finite
carriers, ``frozenset`` for subsets, sorted ``(index, level)`` tuples for
finitely supported maps, ``(b, m)`` pairs for Chang's algebra and
:class:`ReprElement` for the representing algebra.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Iterable, Sequence

from .errors import (
    CarrierTooLarge,
    EMVError,
    HasTop,
    MalformedTable,
    NoMinimum,
    NotALattice,
    NotBelow,
    NotDistributive,
    NotIdempotent,
    Unsupported,
)

DEFAULT_MAX_CARRIER = 256


def max_carrier() -> int:
    return int(os.environ.get("EMVKIT_MAX_CARRIER", DEFAULT_MAX_CARRIER))


class EMVAlgebra:
    """Operations shared by every carrier.

    Subclasses provide ``oplus``, ``leq``, ``join``, ``meet``,
    ``idempotent_above``, ``lam`` and ``enumerate``; the rest is derived.
    """

    zero: Any
    top: Any = None
    finite = False

    def is_idempotent(self, a) -> bool:
        return self.oplus(a, a) == a

    def common_idempotent(self, x, y):
        return self.idempotent_above(self.join(x, y))

    def odot(self, x, y):
        a = self.common_idempotent(x, y)
        return self.lam(a, self.oplus(self.lam(a, x), self.lam(a, y)))

    def partial_add(self, x, y):
        """``x + y`` when ``x ⊙ y = 0``, otherwise ``None``."""
        if self.odot(x, y) == self.zero:
            return self.oplus(x, y)
        return None

    def to_json(self, x):
        raise NotImplementedError

    def from_json(self, obj):
        raise NotImplementedError

    def label(self, x) -> str:
        return str(self.to_json(x))


# ---------------------------------------------------------------------------
# finite carriers


class FiniteEMV(EMVAlgebra):
    """Finite carrier ``0..n-1`` described by its ``⊕`` table (0 is index 0).

    The table is *not* validated beyond its shape; use :func:`verify_axioms`.
    """

    finite = True
    zero = 0

    def __init__(self, oplus: Sequence[Sequence[int]], labels: Sequence[str] | None = None,
                 name: str = "table"):
        rows = [list(r) for r in oplus]
        n = len(rows)
        if n == 0:
            raise MalformedTable("empty table")
        if n > max_carrier():
            raise CarrierTooLarge(f"carrier size {n} exceeds EMVKIT_MAX_CARRIER={max_carrier()}")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise MalformedTable(f"row {i} has length {len(row)}, expected {n}", witness=[i])
            for j, v in enumerate(row):
                if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
                    raise MalformedTable(f"entry ({i},{j}) = {v!r} out of range", witness=[i, j])
        self.n = n
        self.table: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in rows)
        self.labels: tuple[str, ...] = tuple(labels) if labels is not None else tuple(
            str(i) for i in range(n))
        if len(self.labels) != n:
            raise MalformedTable("label count does not match carrier size")
        self.name = name
        self._lam: dict[tuple[int, int], int] = {}

    def __repr__(self):
        return f"FiniteEMV({self.name}, n={self.n})"

    def __eq__(self, other):
        return isinstance(other, FiniteEMV) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    @property
    def elements(self) -> range:
        return range(self.n)

    def enumerate(self, bound=None) -> list[int]:
        return list(range(self.n))

    def oplus(self, x, y) -> int:
        return self.table[x][y]

    # -- order ------------------------------------------------------------
    @cached_property
    def _up(self) -> tuple[int, ...]:
        # bitmask of {y : x <= y}, i.e. the row image of x
        masks = []
        for x in range(self.n):
            m = 0
            for y in self.table[x]:
                m |= 1 << y
            masks.append(m)
        return tuple(masks)

    @cached_property
    def _down(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for x in range(self.n):
            up = self._up[x]
            for y in range(self.n):
                if up >> y & 1:
                    masks[y] |= 1 << x
        return tuple(masks)

    def leq(self, x, y) -> bool:
        return bool(self._up[x] >> y & 1)

    @cached_property
    def leq_table(self) -> tuple[tuple[bool, ...], ...]:
        return tuple(tuple(self.leq(x, y) for y in range(self.n)) for x in range(self.n))

    def _bound(self, mask: int, masks: tuple[int, ...]):
        # the element u of ``mask`` whose cone contains the whole mask
        found = None
        m = mask
        while m:
            low = m & -m
            u = low.bit_length() - 1
            m ^= low
            if masks[u] & mask == mask:
                if found is not None:
                    return None
                found = u
        return found

    @cached_property
    def _join_table(self) -> tuple[tuple[int | None, ...], ...]:
        rows = []
        for x in range(self.n):
            rows.append(tuple(self._bound(self._up[x] & self._up[y], self._up)
                              for y in range(self.n)))
        return tuple(rows)

    @cached_property
    def _meet_table(self) -> tuple[tuple[int | None, ...], ...]:
        rows = []
        for x in range(self.n):
            rows.append(tuple(self._bound(self._down[x] & self._down[y], self._down)
                              for y in range(self.n)))
        return tuple(rows)

    def join(self, x, y) -> int:
        j = self._join_table[x][y]
        if j is None:
            raise NotALattice(f"no least upper bound for ({x},{y})", witness=[x, y])
        return j

    def meet(self, x, y) -> int:
        m = self._meet_table[x][y]
        if m is None:
            raise NotALattice(f"no greatest lower bound for ({x},{y})", witness=[x, y])
        return m

    # -- idempotents --------------------------------------------------------
    @cached_property
    def idempotents(self) -> tuple[int, ...]:
        return tuple(a for a in range(self.n) if self.table[a][a] == a)

    @cached_property
    def top(self):
        full = (1 << self.n) - 1
        for t in range(self.n):
            if self._down[t] == full:
                return t
        return None

    def idempotent_above(self, x) -> int:
        ups = [a for a in self.idempotents if self.leq(x, a)]
        if not ups:
            raise NotIdempotent(f"no idempotent above {x}", witness=[x])
        for a in ups:
            if all(self.leq(a, b) for b in ups):
                return a
        return ups[0]

    def common_idempotent(self, x, y):
        t = self.top
        if t is not None and self.table[t][t] == t:
            return t
        for a in self.idempotents:
            if self.leq(x, a) and self.leq(y, a):
                return a
        raise NotIdempotent(f"no idempotent above {x} and {y}", witness=[x, y])

    def lam(self, a, x) -> int:
        key = (a, x)
        if key in self._lam:
            return self._lam[key]
        if self.table[a][a] != a:
            raise NotIdempotent(f"{a} is not idempotent", witness=[a])
        if not self.leq(x, a):
            raise NotBelow(f"{x} is not below {a}", witness=[x, a])
        cands = [z for z in range(self.n) if self.leq(z, a) and self.table[z][x] == a]
        for z in cands:
            if all(self.leq(z, w) for w in cands):
                self._lam[key] = z
                return z
        raise NoMinimum(f"no least z <= {a} with z⊕{x} = {a}", witness=[a, x])

    # -- serialization --------------------------------------------------------
    def to_json(self, x):
        return x

    def label(self, x) -> str:
        return self.labels[x]

    def from_json(self, obj) -> int:
        if isinstance(obj, bool):
            raise MalformedTable(f"not an element: {obj!r}")
        if isinstance(obj, int):
            if 0 <= obj < self.n:
                return obj
        elif isinstance(obj, str):
            if obj in self.labels:
                return self.labels.index(obj)
            if obj.isdigit() and int(obj) < self.n:
                return int(obj)
        raise MalformedTable(f"unknown element {obj!r}", witness=[obj])

    def mutate(self, x: int, y: int, value: int) -> "FiniteEMV":
        """Copy of the table with the single entry ``(x, y)`` replaced."""
        rows = [list(r) for r in self.table]
        rows[x][y] = value
        return FiniteEMV(rows, self.labels, name=f"{self.name}[{x},{y}:={value}]")

    def restrict(self, elems: Iterable[int]) -> tuple["FiniteEMV", tuple[int, ...]]:
        """Sub-table on ``elems`` (must contain 0 and be ⊕-closed).

        Returns the new algebra and the embedding (new index -> old index).
        """
        emb = tuple(sorted(set(elems)))
        if not emb or emb[0] != 0:
            raise MalformedTable("subcarrier must contain 0")
        pos = {e: i for i, e in enumerate(emb)}
        try:
            rows = [[pos[self.table[x][y]] for y in emb] for x in emb]
        except KeyError as exc:
            raise MalformedTable("subcarrier not closed under ⊕") from exc
        return FiniteEMV(rows, [self.labels[e] for e in emb], name=f"sub({self.name})"), emb


def chain(k: int) -> FiniteEMV:
    """The (k+1)-element Łukasiewicz chain Γ(ℤ, k)."""
    if k < 1:
        raise MalformedTable(f"chain height must be >= 1, got {k}")
    return FiniteEMV([[min(i + j, k) for j in range(k + 1)] for i in range(k + 1)],
                     name=f"chain({k})")


def boolean(m: int) -> FiniteEMV:
    """The Boolean algebra of subsets of an m-set; index = bitmask."""
    if m < 0:
        raise MalformedTable(f"boolean size must be >= 0, got {m}")
    n = 1 << m
    labels = ["{" + ",".join(str(i) for i in range(m) if b >> i & 1) + "}" for b in range(n)]
    return FiniteEMV([[a | b for b in range(n)] for a in range(n)], labels,
                     name=f"boolean({m})")


def product(factors: Sequence[FiniteEMV]) -> FiniteEMV:
    """Direct product; elements ordered lexicographically by coordinates."""
    if not factors:
        raise MalformedTable("empty product")
    for f in factors:
        if not isinstance(f, FiniteEMV):
            raise Unsupported("products of symbolic families are not supported")
    tuples = list(itertools.product(*(range(f.n) for f in factors)))
    if len(tuples) > max_carrier():
        raise CarrierTooLarge(f"carrier size {len(tuples)} exceeds EMVKIT_MAX_CARRIER")
    pos = {t: i for i, t in enumerate(tuples)}
    rows = [[pos[tuple(f.table[a][b] for f, a, b in zip(factors, s, t))] for t in tuples]
            for s in tuples]
    labels = ["(" + ",".join(f.labels[c] for f, c in zip(factors, t)) + ")" for t in tuples]
    name = "product(" + ",".join(f.name for f in factors) + ")"
    return FiniteEMV(rows, labels, name=name)


# ---------------------------------------------------------------------------
# symbolic families


class FinSubsets(EMVAlgebra):
    """Finite subsets of ℕ: ``⊕ = ∪``, every element idempotent, no top."""

    zero = frozenset()
    name = "finsubsets"

    def oplus(self, x, y):
        return x | y

    def leq(self, x, y):
        return x <= y

    def join(self, x, y):
        return x | y

    def meet(self, x, y):
        return x & y

    def is_idempotent(self, a):
        return True

    def idempotent_above(self, x):
        return x

    def idempotent_below(self, x):
        return x

    def lam(self, a, x):
        if not x <= a:
            raise NotBelow(f"{sorted(x)} is not below {sorted(a)}")
        return a - x

    def odot(self, x, y):
        return x & y

    def enumerate(self, bound: int) -> list[frozenset]:
        """All subsets of {1, ..., bound}."""
        base = range(1, bound + 1)
        return [frozenset(c) for r in range(bound + 1) for c in itertools.combinations(base, r)]

    def to_json(self, x):
        return sorted(x)

    def from_json(self, obj):
        if not isinstance(obj, list) or not all(isinstance(i, int) and i >= 0 for i in obj):
            raise MalformedTable(f"finite subset must be a list of naturals: {obj!r}")
        return frozenset(obj)

    def label(self, x):
        return "{" + ",".join(str(i) for i in sorted(x)) + "}"

    def __repr__(self):
        return "FinSubsets()"


def fmap(values: dict[int, int] | Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Canonical finitely supported map: sorted pairs, zero levels dropped."""
    items = values.items() if isinstance(values, dict) else values
    return tuple(sorted((i, v) for i, v in items if v))


class FinSupportProduct(EMVAlgebra):
    """Finitely supported maps ℕ → {0..k} with coordinatewise truncated sum."""

    zero = ()

    def __init__(self, k: int):
        if k < 1:
            raise MalformedTable(f"chain height must be >= 1, got {k}")
        self.k = k
        self.name = f"finsupport({k})"

    def _merge(self, x, y, fn):
        dx, dy = dict(x), dict(y)
        return fmap({i: fn(dx.get(i, 0), dy.get(i, 0)) for i in dx.keys() | dy.keys()})

    def oplus(self, x, y):
        return self._merge(x, y, lambda a, b: min(a + b, self.k))

    def odot(self, x, y):
        return self._merge(x, y, lambda a, b: max(a + b - self.k, 0))

    def join(self, x, y):
        return self._merge(x, y, max)

    def meet(self, x, y):
        return self._merge(x, y, min)

    def leq(self, x, y):
        dy = dict(y)
        return all(v <= dy.get(i, 0) for i, v in x)

    def is_idempotent(self, a):
        return all(v == self.k for _, v in a)

    def idempotent_above(self, x):
        return tuple((i, self.k) for i, _ in x)

    def idempotent_below(self, x):
        return tuple((i, v) for i, v in x if v == self.k)

    def lam(self, a, x):
        if not self.is_idempotent(a):
            raise NotIdempotent("not idempotent", witness=[dict(a)])
        if not self.leq(x, a):
            raise NotBelow("not below", witness=[dict(x), dict(a)])
        return self._merge(a, x, lambda p, q: p - q)

    def enumerate(self, bound: int) -> list:
        """Maps supported in {1..bound} with at most two nonzero coordinates."""
        out = [()]
        levels = range(1, self.k + 1)
        for i in range(1, bound + 1):
            out.extend(((i, v),) for v in levels)
        for i, j in itertools.combinations(range(1, bound + 1), 2):
            out.extend(((i, v), (j, w)) for v in levels for w in levels)
        return out

    def to_json(self, x):
        return {str(i): v for i, v in x}

    def from_json(self, obj):
        if not isinstance(obj, dict):
            raise MalformedTable(f"map element must be an object: {obj!r}")
        try:
            pairs = {int(i): int(v) for i, v in obj.items()}
        except (TypeError, ValueError) as exc:
            raise MalformedTable(f"bad map element {obj!r}") from exc
        if any(i < 0 or not 0 <= v <= self.k for i, v in pairs.items()):
            raise MalformedTable(f"map element out of range: {obj!r}")
        return fmap(pairs)

    def label(self, x):
        return "{" + ",".join(f"{i}:{v}" for i, v in x) + "}"

    def __repr__(self):
        return f"FinSupportProduct({self.k})"


class ChangLex(EMVAlgebra):
    """Chang's algebra Γ(ℤ ×lex ℤ, (1,0)).

    ``(0, m)`` encodes the infinitesimal (0, m) and ``(1, m)`` encodes the
    co-infinitesimal (1, -m); both with ``m >= 0``.  The top is ``(1, 0)``.
    """

    zero = (0, 0)
    top = (1, 0)
    name = "changlex"

    def oplus(self, x, y):
        (b1, m1), (b2, m2) = sorted((x, y))
        if b2 == 0:
            return (0, m1 + m2)
        if b1 == 0:
            return (1, max(m2 - m1, 0))
        return self.top

    def leq(self, x, y):
        if x[0] != y[0]:
            return x[0] < y[0]
        return x[1] <= y[1] if x[0] == 0 else x[1] >= y[1]

    def join(self, x, y):
        return y if self.leq(x, y) else x

    def meet(self, x, y):
        return x if self.leq(x, y) else y

    def is_idempotent(self, a):
        return a in (self.zero, self.top)

    def idempotent_above(self, x):
        return self.zero if x == self.zero else self.top

    def negate(self, x):
        return (1 - x[0], x[1])

    def lam(self, a, x):
        if not self.is_idempotent(a):
            raise NotIdempotent("not idempotent", witness=[list(a)])
        if not self.leq(x, a):
            raise NotBelow("not below", witness=[list(x), list(a)])
        return self.zero if a == self.zero else self.negate(x)

    def enumerate(self, bound: int) -> list:
        return [(b, m) for b in (0, 1) for m in range(bound + 1)]

    def is_infinitesimal(self, x) -> bool:
        return x[0] == 0

    def to_json(self, x):
        return {"b": x[0], "m": x[1]}

    def from_json(self, obj):
        try:
            b, m = int(obj["b"]), int(obj["m"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedTable(f"lex element must be {{'b':..,'m':..}}: {obj!r}") from exc
        if b not in (0, 1) or m < 0:
            raise MalformedTable(f"lex element out of range: {obj!r}")
        return (b, m)

    def label(self, x):
        return f"({x[0]},{'-' if x[0] and x[1] else ''}{x[1]})"

    def __repr__(self):
        return "ChangLex()"


@dataclass(frozen=True, order=True)
class ReprElement:
    """Element of the representing MV-algebra: ``x`` or its complement λ_1(x)."""

    complement: bool
    x: Any = field(compare=True)

    def __repr__(self):
        return f"{'C' if self.complement else 'D'}({self.x!r})"


class Representing(EMVAlgebra):
    """The MV-algebra N in which a top-free algebra M sits as a maximal ideal.

    Elements are ``Direct(x)`` (``complement=False``) and ``Complement(x)``
    (``complement=True``, standing for λ_1(x)).
    """

    def __init__(self, inner: EMVAlgebra):
        if inner.top is not None:
            raise HasTop(f"{inner!r} already has a top element")
        if not hasattr(inner, "idempotent_below"):
            raise Unsupported(f"no representing algebra for {inner!r}")
        self.inner = inner
        self.zero = ReprElement(False, inner.zero)
        self.top = ReprElement(True, inner.zero)
        self.name = f"representing({inner.name})"

    def direct(self, x) -> ReprElement:
        return ReprElement(False, x)

    def complement(self, x) -> ReprElement:
        return ReprElement(True, x)

    def negate(self, p: ReprElement) -> ReprElement:
        return ReprElement(not p.complement, p.x)

    def oplus(self, p, q):
        M = self.inner
        if not p.complement and not q.complement:
            return self.direct(M.oplus(p.x, q.x))
        if p.complement and q.complement:
            return self.complement(M.odot(p.x, q.x))
        if p.complement:
            p, q = q, p
        x, y = p.x, q.x
        a = M.idempotent_above(M.join(x, y))
        return self.complement(M.odot(y, M.lam(a, x)))

    def odot(self, p, q):
        return self.negate(self.oplus(self.negate(p), self.negate(q)))

    def leq(self, p, q):
        return self.oplus(self.negate(p), q) == self.top

    def join(self, p, q):
        return self.oplus(p, self.negate(self.oplus(p, self.negate(q))))

    def meet(self, p, q):
        return self.odot(p, self.oplus(self.negate(p), q))

    def is_idempotent(self, a):
        return self.inner.is_idempotent(a.x)

    def idempotent_above(self, p):
        if p.complement:
            return self.complement(self.inner.idempotent_below(p.x))
        return self.direct(self.inner.idempotent_above(p.x))

    def lam(self, a, p):
        if not self.is_idempotent(a):
            raise NotIdempotent(f"{a!r} is not idempotent")
        if not self.leq(p, a):
            raise NotBelow(f"{p!r} is not below {a!r}")
        return self.odot(a, self.negate(p))

    def enumerate(self, bound: int) -> list[ReprElement]:
        base = self.inner.enumerate(bound)
        return [self.direct(x) for x in base] + [self.complement(x) for x in base]

    def to_json(self, p):
        return {"complement" if p.complement else "direct": self.inner.to_json(p.x)}

    def from_json(self, obj):
        if not isinstance(obj, dict) or len(obj) != 1:
            raise MalformedTable(f"representing element must be {{direct|complement: x}}: {obj!r}")
        (tag, val), = obj.items()
        if tag not in ("direct", "complement"):
            raise MalformedTable(f"unknown tag {tag!r}")
        return ReprElement(tag == "complement", self.inner.from_json(val))

    def label(self, p):
        return ("~" if p.complement else "") + self.inner.label(p.x)

    def __repr__(self):
        return f"Representing({self.inner!r})"


# ---------------------------------------------------------------------------
# builder


def build(spec: dict) -> EMVAlgebra:
    """Construct a carrier from an algebra-spec dictionary (the JSON schema)."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise MalformedTable(f"algebra spec must be an object with 'kind': {spec!r}")
    kind = spec["kind"]
    if kind == "table":
        oplus = spec.get("oplus")
        if not isinstance(oplus, list) or not all(isinstance(r, list) for r in oplus):
            raise MalformedTable("'oplus' must be a list of lists")
        return FiniteEMV(oplus, spec.get("labels"))
    if kind == "chain":
        return chain(_int_param(spec, "k"))
    if kind == "boolean":
        return boolean(_int_param(spec, "m"))
    if kind == "product":
        factors = [build(f) for f in spec.get("factors", [])]
        return product(factors)
    if kind == "finsubsets":
        return FinSubsets()
    if kind == "finsupport":
        return FinSupportProduct(_int_param(spec, "k"))
    if kind == "changlex":
        return ChangLex()
    if kind == "representing":
        return Representing(build(spec.get("inner", {})))
    raise MalformedTable(f"unknown algebra kind {kind!r}")


def _int_param(spec, key):
    val = spec.get(key)
    if not isinstance(val, int) or isinstance(val, bool):
        raise MalformedTable(f"'{key}' must be an integer in {spec!r}")
    return val


# ---------------------------------------------------------------------------
# derived operations as free functions


class NaturalOrder:
    """The order ``x <= y iff ∃z: x ⊕ z = y`` with its lattice operations."""

    def __init__(self, M: EMVAlgebra):
        self.M = M

    def leq(self, x, y) -> bool:
        return self.M.leq(x, y)

    def join(self, x, y):
        return self.M.join(x, y)

    def meet(self, x, y):
        return self.M.meet(x, y)

    def tables(self):
        """``(leq, join, meet)`` tables of a finite carrier."""
        M = self.M
        return M.leq_table, tuple(tuple(M.join(x, y) for y in M.elements) for x in M.elements), \
            tuple(tuple(M.meet(x, y) for y in M.elements) for x in M.elements)


def natural_order(M: EMVAlgebra) -> NaturalOrder:
    """Natural order of ``M``; for finite carriers the lattice is validated.

    Raises :class:`NotALattice` or :class:`NotDistributive` with a witness.
    """
    if M.finite:
        # antisymmetry failures surface as missing joins
        for x in M.elements:
            for y in M.elements:
                M.join(x, y)
                M.meet(x, y)
        for x, y, z in itertools.product(M.elements, repeat=3):
            if M.meet(x, M.join(y, z)) != M.join(M.meet(x, y), M.meet(x, z)):
                raise NotDistributive("distributive law fails", witness=[x, y, z])
    return NaturalOrder(M)


def lam(M: EMVAlgebra, a, x):
    """Local complement ``λ_a(x)``: the least ``z <= a`` with ``z ⊕ x = a``."""
    return M.lam(a, x)


def odot(M: EMVAlgebra, x, y):
    return M.odot(x, y)


def partial_add(M: EMVAlgebra, x, y):
    return M.partial_add(x, y)


def idempotents(M: EMVAlgebra):
    """Idempotent list (finite) or the membership test (symbolic)."""
    if M.finite:
        return list(M.idempotents)
    return M.is_idempotent


def idempotent_atoms(M: FiniteEMV) -> list[int]:
    """Minimal nonzero idempotents."""
    nz = [a for a in M.idempotents if a != 0]
    return [a for a in nz if not any(b != a and M.leq(b, a) for b in nz)]


# ---------------------------------------------------------------------------
# axiom checker


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str


@dataclass
class AxiomReport:
    violations: list[Violation] = field(default_factory=list)
    checked_counts: dict[str, int] = field(default_factory=dict)
    budget: int | None = None
    sampled: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms_violated(self) -> set[str]:
        return {v.axiom for v in self.violations}


class _Checker:
    def __init__(self, M, elems, cap, rng):
        self.M = M
        self.elems = elems
        self.cap = cap
        self.rng = rng
        self.report = AxiomReport()

    def tuples(self, k: int, pool=None):
        pool = self.elems if pool is None else pool
        total = len(pool) ** k
        if self.cap is None or total <= self.cap:
            return itertools.product(pool, repeat=k)
        self.report.sampled = True
        return (tuple(self.rng.choice(pool) for _ in range(k)) for _ in range(self.cap))

    def check(self, axiom: str, witness: tuple, pred: Callable[[], bool | str]):
        counts = self.report.checked_counts
        counts[axiom] = counts.get(axiom, 0) + 1
        try:
            res = pred()
        except EMVError as exc:
            self.report.violations.append(Violation(axiom, witness, f"{exc.code}: {exc.message}"))
            return False
        if res is True:
            return True
        detail = res if isinstance(res, str) else "fails"
        self.report.violations.append(Violation(axiom, witness, detail))
        return False


def verify_axioms(M: EMVAlgebra, budget: int | None = None, *, max_instances: int | None = None,
                  seed: int = 0) -> AxiomReport:
    """Check the EMV-algebra axioms and report every violation with a witness.

    Finite carriers are checked exhaustively.  Symbolic carriers are checked
    on ``M.enumerate(budget)``; when an axiom has more than ``max_instances``
    instances (default 20000 for symbolic carriers) a seeded random sample of
    that size is drawn instead and the report is marked ``sampled``.
    """
    if M.finite:
        elems = list(M.elements)
        cap = max_instances
    else:
        if budget is None:
            raise Unsupported("symbolic carriers need a sampling budget")
        elems = M.enumerate(budget)
        cap = 20000 if max_instances is None else max_instances
    ck = _Checker(M, elems, cap, random.Random(seed))
    ck.report.budget = budget
    z = M.zero

    # (i) commutative monoid
    for x in elems:
        ck.check("monoid.neutral", (x,), lambda: M.oplus(x, z) == x)
    for x, y in ck.tuples(2):
        ck.check("monoid.commutative", (x, y), lambda: M.oplus(x, y) == M.oplus(y, x))
    for x, y, w in ck.tuples(3):
        ck.check("monoid.associative", (x, y, w),
                 lambda: M.oplus(M.oplus(x, y), w) == M.oplus(x, M.oplus(y, w)))

    # (ii) natural order is a distributive lattice with bottom 0
    for x in elems:
        ck.check("order.bottom", (x,), lambda: M.leq(z, x))
    for x, y in ck.tuples(2):
        ck.check("order.antisymmetric", (x, y),
                 lambda: x == y or not (M.leq(x, y) and M.leq(y, x)))

    def is_join(x, y, zz):
        j = M.join(x, y)
        return M.leq(x, j) and M.leq(y, j) and (not (M.leq(x, zz) and M.leq(y, zz))
                                                or M.leq(j, zz))

    def is_meet(x, y, zz):
        m = M.meet(x, y)
        return M.leq(m, x) and M.leq(m, y) and (not (M.leq(zz, x) and M.leq(zz, y))
                                                or M.leq(zz, m))

    lattice_ok = True
    if M.finite:
        for x, y in ck.tuples(2):
            lattice_ok &= ck.check("lattice.join", (x, y), lambda: M.join(x, y) is not None)
            lattice_ok &= ck.check("lattice.meet", (x, y), lambda: M.meet(x, y) is not None)
    else:
        for x, y, w in ck.tuples(3):
            lattice_ok &= ck.check("lattice.join", (x, y, w), lambda: is_join(x, y, w))
            lattice_ok &= ck.check("lattice.meet", (x, y, w), lambda: is_meet(x, y, w))
    if lattice_ok:
        for x, y, w in ck.tuples(3):
            ck.check("lattice.distributive", (x, y, w),
                     lambda: M.meet(x, M.join(y, w)) == M.join(M.meet(x, y), M.meet(x, w)))

    # (iii) every idempotent interval is an MV-algebra under λ_a
    idem = [a for a in elems if M.is_idempotent(a)]
    below = {a: [x for x in elems if M.leq(x, a)] for a in idem}
    for a in idem:
        for x in below[a]:
            ck.check("mv.absorbing", (a, x), lambda: M.oplus(x, a) == a)
            ck.check("mv.complement", (a, x), lambda: M.oplus(M.lam(a, x), x) == a)
            ck.check("mv.involution", (a, x),
                     lambda: (lambda v: True if v == x else
                              f"λ_a(λ_a(x)) = {M.label(v)} ≠ {M.label(x)}")(
                         M.lam(a, M.lam(a, x))))

    def interval_pairs():
        total = sum(len(below[a]) ** 2 for a in idem)
        if cap is None or total <= cap:
            for a in idem:
                for x, y in itertools.product(below[a], repeat=2):
                    yield a, x, y
        else:
            ck.report.sampled = True
            for _ in range(cap):
                a = ck.rng.choice(idem)
                yield a, ck.rng.choice(below[a]), ck.rng.choice(below[a])

    for a, x, y in interval_pairs():
        ck.check("mv.closed", (a, x, y), lambda: M.leq(M.oplus(x, y), a))
        ck.check("mv.chang", (a, x, y),
                 lambda: M.oplus(x, M.lam(a, M.oplus(x, M.lam(a, y))))
                 == M.oplus(y, M.lam(a, M.oplus(y, M.lam(a, x)))))

    # (iv) every element sits below an idempotent
    for x in elems:
        if M.finite:
            ck.check("cover", (x,), lambda: any(M.leq(x, a) for a in idem))
        else:
            ck.check("cover", (x,),
                     lambda: (lambda a: M.is_idempotent(a) and M.leq(x, a))(M.idempotent_above(x)))
    return ck.report
