"""Exact rational linear programming.

Dense two-phase simplex over :class:`fractions.Fraction` with Bland's
anti-cycling rule.  Infeasibility is reported with a row-multiplier
certificate ``y``: for every ``x`` in the variable box,
``(yᵀA) x < yᵀ b``, so no ``x`` can satisfy ``A x = b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import DimensionMismatch, DisagreementBug, EMVError, Infeasible, Unbounded

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value) -> Fraction:
    """Parse an exact rational from ``int``, ``Fraction`` or a ``"p/q"`` string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise EMVError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise EMVError(f"not a rational: {value!r}") from exc
    raise EMVError(f"not an exact rational (floats are rejected): {value!r}")


def rat_str(value: Fraction) -> str:
    return str(Fraction(value))


class LinSystem:
    """Equality constraints ``Σ a_j v_j = b`` over bounded variables.

    Variables are keyed by arbitrary hashables and kept in declaration order;
    rows are kept in insertion order, so pivoting is deterministic.
    """

    def __init__(self):
        self.variables: list[Hashable] = []
        self.lower: list[Fraction | None] = []
        self.upper: list[Fraction | None] = []
        self.rows: list[tuple[dict[int, Fraction], Fraction]] = []
        self._index: dict[Hashable, int] = {}

    def add_var(self, key: Hashable, lower=0, upper=None) -> Hashable:
        if key in self._index:
            raise EMVError(f"variable {key!r} declared twice")
        self._index[key] = len(self.variables)
        self.variables.append(key)
        self.lower.append(None if lower is None else rat(lower))
        self.upper.append(None if upper is None else rat(upper))
        return key

    def index(self, key) -> int:
        try:
            return self._index[key]
        except KeyError:
            raise EMVError(f"undeclared variable {key!r}") from None

    def add_row(self, coeffs: Mapping[Hashable, object], rhs=0) -> int:
        row: dict[int, Fraction] = {}
        for key, c in coeffs.items():
            j = self.index(key)
            row[j] = row.get(j, ZERO) + rat(c)
        self.rows.append(({j: c for j, c in row.items() if c}, rat(rhs)))
        return len(self.rows) - 1

    def __len__(self):
        return len(self.rows)

    def residuals(self, values: Mapping[Hashable, Fraction]) -> list[Fraction]:
        x = [values[k] for k in self.variables]
        return [sum((c * x[j] for j, c in row.items()), ZERO) - b for row, b in self.rows]

    def satisfied_by(self, values: Mapping[Hashable, Fraction]) -> bool:
        if any(self.residuals(values)):
            return False
        for k, lo, hi in zip(self.variables, self.lower, self.upper):
            v = values[k]
            if (lo is not None and v < lo) or (hi is not None and v > hi):
                return False
        return True


@dataclass(frozen=True)
class Solution:
    assignment: dict
    value: Fraction | None = None

    def __getitem__(self, key):
        return self.assignment[key]


def check_certificate(sys: LinSystem, certificate: Mapping[int, Fraction]) -> bool:
    """True iff the row multipliers prove ``sys`` infeasible."""
    if any(lo is not None and hi is not None and lo > hi for lo, hi in zip(sys.lower, sys.upper)):
        return True
    g = [ZERO] * len(sys.variables)
    yb = ZERO
    for i, y in certificate.items():
        row, b = sys.rows[i]
        yb += y * b
        for j, c in row.items():
            g[j] += y * c
    sup = ZERO
    for gj, lo, hi in zip(g, sys.lower, sys.upper):
        if gj > 0:
            if hi is None:
                return False
            sup += gj * hi
        elif gj < 0:
            if lo is None:
                return False
            sup += gj * lo
    return sup < yb


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.T = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r: int, c: int, obj: list[Fraction] | None = None, objval=None):
        T, rhs = self.T, self.rhs
        piv = T[r][c]
        row = T[r] = [v / piv for v in T[r]]
        rhs[r] = rhs[r] / piv
        for i in range(len(T)):
            if i != r:
                f = T[i][c]
                if f:
                    Ti = T[i]
                    T[i] = [a - f * b for a, b in zip(Ti, row)]
                    rhs[i] -= f * rhs[r]
        self.basis[r] = c
        if obj is not None:
            f = obj[c]
            if f:
                for j in range(len(obj)):
                    obj[j] -= f * row[j]
                objval[0] -= f * rhs[r]

    def minimize(self, obj: list[Fraction], objval: list[Fraction], allowed: int):
        """Bland-rule simplex on reduced costs ``obj`` over columns ``< allowed``."""
        while True:
            enter = next((j for j in range(allowed) if obj[j] < 0), None)
            if enter is None:
                return
            best = None
            for i, row in enumerate(self.T):
                a = row[enter]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise Unbounded("objective is unbounded on the feasible region",
                                witness=[enter])
            self.pivot(best[1], enter, obj, objval)


def solve(sys: LinSystem, objective: Mapping[Hashable, object] | None = None,
          sense: str = "max") -> Solution:
    """Find a feasible point, optionally optimizing a linear objective.

    Raises :class:`Infeasible` (with a checkable certificate) or
    :class:`Unbounded`.
    """
    if sense not in ("max", "min"):
        raise EMVError(f"sense must be 'max' or 'min', got {sense!r}")
    nvar = len(sys.variables)
    for lo, hi in zip(sys.lower, sys.upper):
        if lo is not None and hi is not None and lo > hi:
            raise Infeasible("empty variable box", certificate={})

    # standard form: v_j = offset_j + Σ sign * x_col, all x_col >= 0
    cols: list[list[tuple[int, int]]] = []
    offset: list[Fraction] = []
    ncol = 0
    bound_rows: list[tuple[int, Fraction]] = []
    for j in range(nvar):
        lo, hi = sys.lower[j], sys.upper[j]
        if lo is not None:
            cols.append([(ncol, 1)])
            offset.append(lo)
            if hi is not None:
                bound_rows.append((ncol, hi - lo))
            ncol += 1
        elif hi is not None:
            cols.append([(ncol, -1)])
            offset.append(hi)
            ncol += 1
        else:
            cols.append([(ncol, 1), (ncol + 1, -1)])
            offset.append(ZERO)
            ncol += 2
    nslack = len(bound_rows)
    ntot = ncol + nslack

    A: list[list[Fraction]] = []
    b: list[Fraction] = []
    for row, rhs in sys.rows:
        r = [ZERO] * ntot
        shift = ZERO
        for j, c in row.items():
            shift += c * offset[j]
            for col, sgn in cols[j]:
                r[col] += c * sgn
        A.append(r)
        b.append(rhs - shift)
    for s, (col, width) in enumerate(bound_rows):
        r = [ZERO] * ntot
        r[col] = ONE
        r[ncol + s] = ONE
        A.append(r)
        b.append(width)
    m = len(A)
    sign = [1] * m
    for i in range(m):
        if b[i] < 0:
            sign[i] = -1
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]

    # phase I with one artificial per row
    rows = [A[i] + [ONE if k == i else ZERO for k in range(m)] for i in range(m)]
    tab = _Tableau(rows, list(b), [ntot + i for i in range(m)])
    obj = [ZERO] * (ntot + m)
    for i in range(m):
        for j in range(ntot):
            obj[j] -= rows[i][j]
    objval = [-sum(b, ZERO)]
    tab.minimize(obj, objval, ntot)
    if -objval[0] > 0:
        y = [sum((tab.T[r][ntot + i] for r in range(m) if tab.basis[r] >= ntot), ZERO)
             for i in range(m)]
        cert = {i: y[i] * sign[i] for i in range(len(sys.rows)) if y[i]}
        if not check_certificate(sys, cert):
            raise DisagreementBug("phase-I certificate failed its own check")
        raise Infeasible("system has no solution", certificate=cert)

    # drive remaining artificials out of the basis; drop redundant rows
    r = 0
    while r < len(tab.T):
        if tab.basis[r] >= ntot:
            c = next((j for j in range(ntot) if tab.T[r][j] != 0), None)
            if c is None:
                del tab.T[r], tab.rhs[r], tab.basis[r]
                continue
            tab.pivot(r, c)
        r += 1
    tab.T = [row[:ntot] for row in tab.T]

    value = None
    if objective is not None:
        cvec = [ZERO] * ntot
        const = ZERO
        flip = -1 if sense == "max" else 1
        for key, c in objective.items():
            j = sys.index(key)
            c = rat(c)
            const += c * offset[j]
            for col, sgn in cols[j]:
                cvec[col] += flip * c * sgn
        red = list(cvec)
        oval = [ZERO]
        for i, bcol in enumerate(tab.basis):
            f = cvec[bcol]
            if f:
                for j in range(ntot):
                    red[j] -= f * tab.T[i][j]
                oval[0] -= f * tab.rhs[i]
        tab.minimize(red, oval, ntot)
        value = const + (-oval[0]) * flip

    xs = [ZERO] * ntot
    for i, bcol in enumerate(tab.basis):
        xs[bcol] = tab.rhs[i]
    assignment = {}
    for j, key in enumerate(sys.variables):
        assignment[key] = offset[j] + sum((sgn * xs[col] for col, sgn in cols[j]), ZERO)
    if not sys.satisfied_by(assignment):
        raise DisagreementBug("simplex returned a point violating the system")
    return Solution(assignment, value)


# ---------------------------------------------------------------------------
# geometry


def rank(rows: Iterable[Sequence[Fraction]]) -> int:
    """Exact rank by Gaussian elimination."""
    M = [[rat(v) for v in r] for r in rows]
    if not M:
        return 0
    width = len(M[0])
    rk = 0
    for c in range(width):
        p = next((i for i in range(rk, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[rk], M[p] = M[p], M[rk]
        piv = M[rk]
        for i in range(rk + 1, len(M)):
            f = M[i][c] / piv[c]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], piv)]
        rk += 1
        if rk == len(M):
            break
    return rk


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull (rank of differences from the first point)."""
    if not points:
        raise DimensionMismatch("no points given")
    dim = len(points[0])
    if any(len(p) != dim for p in points):
        raise DimensionMismatch("points differ in dimension")
    p0 = [rat(v) for v in points[0]]
    return rank([[rat(v) - w for v, w in zip(p, p0)] for p in points[1:]])


def vertex_test(point, sys: LinSystem) -> bool:
    """True iff ``point`` is feasible and its active constraints have full rank."""
    if isinstance(point, Mapping):
        values = {k: rat(point[k]) for k in sys.variables}
    else:
        if len(point) != len(sys.variables):
            raise DimensionMismatch("point dimension does not match the system")
        values = {k: rat(v) for k, v in zip(sys.variables, point)}
    if not sys.satisfied_by(values):
        return False
    n = len(sys.variables)
    active = []
    for row, _ in sys.rows:
        active.append([row.get(j, ZERO) for j in range(n)])
    for j, key in enumerate(sys.variables):
        v = values[key]
        if v == sys.lower[j] or v == sys.upper[j]:
            active.append([ONE if i == j else ZERO for i in range(n)])
    return rank(active) == n


def geometry(points: Sequence[Sequence]):
    """``(affine_rank(points), vertex_test)`` bundle."""
    return affine_rank(points), vertex_test
