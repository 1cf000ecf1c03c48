"""Exact computations with states on EMV-algebras."""

from __future__ import annotations

from .algebra import (
    EMVAlgebra,
    FiniteEMV,
    FinSubsets,
    FinSupportProduct,
    ChangLex,
    Representing,
    build,
    chain,
    boolean,
    product,
    verify_axioms,
)
from .errors import EMVError

__version__ = "0.1.0"

__all__ = [
    "EMVAlgebra",
    "FiniteEMV",
    "FinSubsets",
    "FinSupportProduct",
    "ChangLex",
    "Representing",
    "build",
    "chain",
    "boolean",
    "product",
    "verify_axioms",
    "EMVError",
    "__version__",
]
