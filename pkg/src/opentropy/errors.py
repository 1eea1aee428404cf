"""Exception types raised across the package."""


class OpentropyError(ValueError):
    """Base class for all errors raised by opentropy."""


class DimensionMismatch(OpentropyError):
    pass


class NotHermitian(OpentropyError):
    pass


class NotUnitary(OpentropyError):
    pass


class NotAState(OpentropyError):
    pass


class NotTracePreserving(OpentropyError):
    """Kraus operators fail the identity resolution.

    The largest entrywise deviation of ``sum K^dag K`` from the identity is
    kept in :attr:`deviation`.
    """

    def __init__(self, deviation: float):
        self.deviation = float(deviation)
        super().__init__(f"sum of K^dag K deviates from identity by {self.deviation:.3e}")


class InvalidL(OpentropyError):
    pass


class InvalidParameter(OpentropyError):
    pass


class UnknownName(OpentropyError):
    pass


class Unsupported(OpentropyError):
    pass
