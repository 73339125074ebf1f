"""Exception hierarchy.

Two families: `DomainError` for inputs outside the mathematical domain of an
operation, and `NumericalFailure` for solver or branch-tracking breakdowns.
The CLI maps them to exit codes 3 and 4.
"""


class SymConeError(Exception):
    """Base class for all library errors."""


class DomainError(SymConeError, ValueError):
    """Input lies outside the domain of the operation."""


class NumericalFailure(SymConeError, ArithmeticError):
    """A numerical procedure did not reach its accuracy target."""


# domain errors
class InvalidSize(DomainError):
    pass


class AlgebraMismatch(DomainError):
    pass


class NotIdempotent(DomainError):
    pass


class SingularElement(DomainError):
    pass


class NotInterior(DomainError):
    pass


class BadExponent(DomainError):
    pass


class SingularAction(DomainError):
    pass


class NotFactorizable(DomainError):
    pass


class NotInSemigroup(DomainError):
    pass


class BadFrame(DomainError):
    pass


class NotOnBoundary(DomainError):
    pass


class SingularArgument(DomainError):
    pass


class NotTransversalToMinusE(DomainError):
    pass


class NotImplementedForKind(DomainError):
    pass


class NotInQc(DomainError):
    pass


class NotPairwiseTransversal(DomainError):
    pass


class SizeMismatch(DomainError):
    pass


class OnSingularSet(DomainError):
    pass


class NotInvertible(DomainError):
    pass


class SingularDifference(DomainError):
    pass


class NotStrict(DomainError):
    pass


class NotInTube(DomainError):
    pass


class BadBound(DomainError):
    pass


# numerical failures
class NoConvergence(NumericalFailure):
    pass


class BranchTrackingFailure(NumericalFailure):
    pass


class FactorizationFailure(NumericalFailure):
    pass


class AmbiguousRank(NumericalFailure):
    pass


class NormalizationFailure(NumericalFailure):
    pass


class BranchMismatch(NumericalFailure):
    pass
