"""Exception hierarchy shared by every module."""


class DLCurveError(Exception):
    """Base class; ``module``/``op`` identify where a failure originated."""

    module = "dlcurve"

    def __init__(self, message="", *, op=None):
        super().__init__(message)
        self.op = op


class InvalidInput(DLCurveError, ValueError):
    pass


class InvalidPrime(InvalidInput):
    module = "ffield"


class NoEmbedding(InvalidInput):
    module = "ffield"


class FieldMismatch(InvalidInput):
    module = "ffield"


class FieldTooLarge(DLCurveError):
    """A resource cap (field size or scan size) would be exceeded."""

    module = "ffield"


class DomainError(DLCurveError, ArithmeticError):
    module = "curve"


class CountInconsistent(DLCurveError):
    module = "zeta"


class InvalidLPolynomial(DLCurveError):
    module = "zeta"


class PrecisionError(DLCurveError):
    module = "localring"


class SupportNotFound(DLCurveError):
    module = "localring"
