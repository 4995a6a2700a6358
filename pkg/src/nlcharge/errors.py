"""Exception hierarchy shared by all modules."""


class NLChargeError(Exception):
    """Base class for every error raised by :mod:`nlcharge`."""


class NumericError(NLChargeError, ArithmeticError):
    """A series or special function could not be evaluated."""


class NonConvergence(NumericError):
    """A series did not reach its tail tolerance within ``max_terms``."""


class BesselOverflow(NumericError, OverflowError):
    """The ascending Bessel series left the double-precision range."""


class OutOfRadius(NumericError, ValueError):
    """|xi| lies outside the guarded convergence disk of the model."""


class InvalidParameter(NLChargeError, ValueError):
    pass


class InvalidSpectrum(InvalidParameter):
    pass


class UnknownModel(NLChargeError, KeyError):
    pass


class UnknownMeasure(NLChargeError, KeyError):
    pass


class ParityMismatch(NLChargeError, ValueError):
    """Even/odd states are not eigenstates of the single pair operator."""


class UndefinedMeasure(NLChargeError, ZeroDivisionError):
    """A ratio measure has a vanishing denominator for this state."""


class UndefinedAtVacuum(UndefinedMeasure):
    pass


class UndefinedDenominator(UndefinedMeasure):
    pass
