"""Exception hierarchy.

Every error carries a short machine-readable ``code`` (the class name) and an
optional ``witness`` holding the offending elements, so the CLI can report
failures as data.
"""

from __future__ import annotations


class EMVError(Exception):
    """Base class for all emvkit errors."""

    exit_code = 2

    def __init__(self, message: str = "", witness=None):
        super().__init__(message)
        self.message = message
        self.witness = witness

    @property
    def code(self) -> str:
        return type(self).__name__


# algebra-core
class MalformedTable(EMVError):
    pass


class Unsupported(EMVError):
    pass


class NotALattice(EMVError):
    pass


class NotDistributive(EMVError):
    pass


class NotIdempotent(EMVError):
    pass


class NotBelow(EMVError):
    pass


class NoMinimum(EMVError):
    pass


class CarrierTooLarge(EMVError):
    pass


# structure
class ZeroAlgebra(EMVError):
    pass


class ImproperIdeal(EMVError):
    pass


class RdpViolation(EMVError):
    pass


class NoBooleanCover(EMVError):
    pass


class HypothesisFailure(EMVError):
    pass


class HasTop(EMVError):
    pass


class DisagreementBug(EMVError):
    """Two routes that must agree did not; always an implementation bug."""

    exit_code = 1


# ratlp
class DimensionMismatch(EMVError):
    pass


class Infeasible(EMVError):
    """Linear system has no solution; ``certificate`` maps row index -> multiplier."""

    def __init__(self, message: str = "", certificate=None):
        super().__init__(message, witness=certificate)
        self.certificate = certificate


class Unbounded(EMVError):
    pass


# states / measures
class NotAState(EMVError):
    pass


class NotAdditive(EMVError):
    pass


class NotSubadditive(EMVError):
    pass


class DecompositionInfeasible(EMVError):
    exit_code = 1


class MassExceedsOne(EMVError):
    pass


class NotSubalgebra(EMVError):
    pass


class NotAStateOnSub(EMVError):
    pass


class NotFiniteSupport(EMVError):
    pass


class UnsupportedCarrier(EMVError):
    pass
