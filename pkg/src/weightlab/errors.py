"""Exception types shared across the package."""

from __future__ import annotations


class WeightlabError(Exception):
    """Base class for all package-specific errors."""


class DslSyntaxError(WeightlabError):
    """Raised when a group-spec string does not parse."""


class CapExceeded(WeightlabError):
    """Raised when a construction would exceed a configured size cap."""


class BudgetExceeded(WeightlabError):
    """Raised when an enumeration exceeds a configured work budget."""


class NotASubgroup(WeightlabError):
    """Raised when an element set fails the subgroup axioms."""


class NotPIntegral(WeightlabError):
    """Raised when reducing a cyclotomic whose denominators are divisible by p."""


class NotClassConstant(WeightlabError):
    """Raised when a group-algebra element is not constant on conjugacy classes."""


class DecompositionFailure(WeightlabError):
    """Raised when an internal exact computation fails a cross-check."""


class UnsupportedPointStructure(WeightlabError):
    """Raised when a local point set would need a block with more than one simple."""

    def __init__(self, message: str, *, group_key: str = "", detail: str = ""):
        super().__init__(message)
        self.group_key = group_key
        self.detail = detail


class InvolutionFailure(WeightlabError):
    """Raised when the chain-pairing map fails one of its defining checks."""


class PNotInStabilizer(WeightlabError):
    """Raised when a subgroup argument is not contained in the expected stabilizer."""


class PTrivial(WeightlabError):
    """Raised when an operation requires a nontrivial p-subgroup."""


class DimensionMismatch(WeightlabError):
    """Raised on incompatible matrix or vector shapes."""
