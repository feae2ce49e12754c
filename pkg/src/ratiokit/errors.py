"""Exception hierarchy shared by every ratiokit module."""


class RatioKitError(Exception):
    """Base class for all library errors."""


class DomainViolation(RatioKitError, ValueError):
    """A parameter lies outside the region where the average is defined.

    ``index`` is the 1-based position of the offending entry when one exists.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ShapeError(RatioKitError, ValueError):
    pass


class CapacityError(RatioKitError):
    pass


class SingularInput(RatioKitError, ArithmeticError):
    pass


class ExtrapolationUnstable(RatioKitError, ArithmeticError):
    pass


class NumericalFailure(RatioKitError, ArithmeticError):
    pass


class SingularSample(NumericalFailure):
    pass


class TruncationTooCoarse(RatioKitError):
    pass


class GeneratorMismatch(RatioKitError, ValueError):
    pass


class ParityError(RatioKitError, ValueError):
    pass


class SingularBlock(RatioKitError, ArithmeticError):
    pass


class FormMismatch(RatioKitError, ArithmeticError):
    pass


class SpectrumOnCircle(RatioKitError, ValueError):
    pass


class BranchError(RatioKitError, ValueError):
    pass


class DivisionByZeroJet(RatioKitError, ZeroDivisionError):
    pass


class SingularPoint(RatioKitError, ValueError):
    pass


class BlockViolation(RatioKitError, ValueError):
    pass


class AliasWarning(UserWarning):
    pass
