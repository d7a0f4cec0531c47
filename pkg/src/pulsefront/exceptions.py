"""Exception and warning types.

Two families: ``ValidationError`` for bad inputs (CLI exit code 2) and
``NumericalError`` for failures of a numerical contract (CLI exit code 3).
"""


class PulsefrontError(Exception):
    """Base class for all package errors."""


class ValidationError(PulsefrontError, ValueError):
    """Inputs violate a documented precondition."""


class NumericalError(PulsefrontError, RuntimeError):
    """A numerical routine could not deliver its contract."""


class InvalidProfile(ValidationError):
    pass


class NonPositiveProfile(ValidationError):
    pass


class InvalidPatchGeometry(ValidationError):
    pass


class NonPositiveMeanGrowth(ValidationError):
    pass


class NotMeanZero(ValidationError):
    pass


class IdenticallyZeroGrowth(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class MissingColumn(ValidationError):
    pass


class InsufficientTrace(ValidationError):
    pass


class PerronFailure(NumericalError):
    """The discrete operator lost the structure that guarantees a positive
    principal eigenvector (usually: grid too coarse for ``lambda * L``)."""


class NonConvergence(NumericalError):
    pass


class BracketFailure(NumericalError):
    pass


class NoRootAboveM(NumericalError):
    pass


class BlowUp(NumericalError):
    pass


class FrontExited(NumericalError):
    pass


class RegimeWarning(UserWarning):
    """Patch geometry outside ``l > 3 L0 / 4``; closed-form guarantees lapse."""
