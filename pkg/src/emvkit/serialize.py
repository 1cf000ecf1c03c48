"""JSON forms of elements, states, measures and reports."""

from __future__ import annotations

import dataclasses
import enum
import json
from fractions import Fraction
from typing import Any

from .algebra import EMVAlgebra, FiniteEMV, ReprElement
from .errors import DimensionMismatch, MalformedTable
from .ratlp import rat, rat_str
from .states import SymbolicState, Tail


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedTable(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def plain(obj: Any, M: EMVAlgebra | None = None) -> Any:
    """Best-effort conversion of library values to JSON-ready data."""
    if isinstance(obj, Fraction):
        return rat_str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str, float)):
        return obj
    if isinstance(obj, enum.Enum):
        return str(obj)
    if isinstance(obj, ReprElement):
        return M.to_json(obj) if M is not None else {
            "complement" if obj.complement else "direct": plain(obj.x)}
    if isinstance(obj, frozenset):
        return sorted((plain(x, M) for x in obj), key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(obj, dict):
        return {str(k): plain(v, M) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(x, M) for x in obj]
    if dataclasses.is_dataclass(obj):
        return {f.name: plain(getattr(obj, f.name), M) for f in dataclasses.fields(obj)}
    return repr(obj)


def element_set(M: EMVAlgebra, xs) -> list:
    """Sorted JSON list of elements (labels on finite carriers)."""
    if isinstance(M, FiniteEMV):
        return [M.label(x) for x in sorted(xs)]
    return sorted((M.to_json(x) for x in xs), key=lambda v: json.dumps(v, sort_keys=True))


def vector_to_json(M: FiniteEMV, values) -> dict:
    return {M.label(x): rat_str(values[x]) for x in M.elements}


def values_from_json(M: FiniteEMV, obj, *, partial: bool = False) -> dict[int, Fraction]:
    """Parse ``{"values": {...}}`` (or a bare mapping/list) into ``{index: Fraction}``."""
    if isinstance(obj, dict) and "values" in obj:
        obj = obj["values"]
    if isinstance(obj, list):
        if len(obj) != M.n:
            raise DimensionMismatch(f"expected {M.n} values, got {len(obj)}")
        return {x: rat(v) for x, v in enumerate(obj)}
    if not isinstance(obj, dict):
        raise MalformedTable("values must be an object keyed by element")
    out = {M.from_json(k): rat(v) for k, v in obj.items()}
    if not partial and len(out) != M.n:
        raise DimensionMismatch(f"expected values on all {M.n} elements, got {len(out)}")
    return out


def symbolic_from_json(obj) -> SymbolicState:
    if not isinstance(obj, dict):
        raise MalformedTable("symbolic state must be an object")
    base = tuple((int(n), rat(w)) for n, w in obj.get("base", []))
    tail = obj.get("tail")
    if tail is not None:
        tail = Tail(int(tail["n0"]), rat(tail["c"]), rat(tail["q"]))
    return SymbolicState(base, tail, rat(obj.get("inf", 0)))


def symbolic_to_json(s: SymbolicState) -> dict:
    return {
        "base": [[n, rat_str(w)] for n, w in s.base],
        "tail": None if s.tail is None else
        {"n0": s.tail.n0, "c": rat_str(s.tail.c), "q": rat_str(s.tail.q)},
        "inf": rat_str(s.inf),
    }


def state_from_json(M: EMVAlgebra, obj):
    """A dense tuple on finite carriers, a :class:`SymbolicState` otherwise."""
    if isinstance(M, FiniteEMV):
        vals = values_from_json(M, obj)
        return tuple(vals[x] for x in M.elements)
    return symbolic_from_json(obj)
