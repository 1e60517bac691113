"""Exception hierarchy shared by all modules."""


class LmopucError(Exception):
    """Base class for every error raised by this package."""


class ParityMismatch(LmopucError, ValueError):
    pass


class Unsupported(LmopucError):
    """Requested quantity is not defined for this kind of source."""


class TruncationExceeded(LmopucError, IndexError):
    pass


class OverlappingArcs(LmopucError, ValueError):
    pass


class ArcOrderError(LmopucError, ValueError):
    pass


class AtomOnCut(LmopucError, ValueError):
    pass


class ChebyshevSampleFailure(LmopucError):
    pass


class SupportOutOfRange(LmopucError, ValueError):
    pass


class Singular(LmopucError, ArithmeticError):
    pass


class DimensionMismatch(LmopucError, ValueError):
    pass


class NotNormal(LmopucError, ArithmeticError):
    pass


class NotLaurentNormal(NotNormal):
    pass


class NoTypeIAtZero(LmopucError, ValueError):
    pass


class TooLarge(LmopucError, ValueError):
    pass


class UnorderedInput(LmopucError, ValueError):
    pass


class OrderViolation(LmopucError):
    def __init__(self, message, side=None, exponent=None, value=None):
        super().__init__(message)
        self.side = side
        self.exponent = exponent
        self.value = value


class DegenerateSpan(LmopucError, ArithmeticError):
    pass


class InconsistentRelation(LmopucError, ArithmeticError):
    pass


class NearSingularPrefactor(LmopucError, ArithmeticError):
    pass


class ConfigError(LmopucError, ValueError):
    pass
