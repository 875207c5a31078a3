"""Exception types shared across the package."""


class RsymError(ValueError):
    """Base class for input and precondition errors."""


class ParseError(RsymError):
    pass


class InvalidMatrix(RsymError):
    pass


class ScalarInput(RsymError):
    pass


class NotHyperbolic(RsymError):
    pass


class NotNormalized(RsymError):
    pass


class NotPrimitive(RsymError):
    pass


class NotCoprime(RsymError):
    pass


class PreconditionViolated(RsymError):
    pass


class DegenerateLeadingCoefficient(RsymError):
    pass


class ZeroArgument(RsymError):
    pass


class NonPositiveImaginaryPart(RsymError):
    pass


class DomainTooLow(RsymError):
    pass


class TruncationTooSmall(RsymError):
    pass


class PoleProximity(RsymError):
    pass
