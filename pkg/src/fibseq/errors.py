"""Exception types shared across the package."""


class FibseqError(Exception):
    """Base class for all package errors."""


class ExactOnlyError(FibseqError, TypeError):
    """An exact-only routine received floating-point scalars."""


class DimMismatch(FibseqError, ValueError):
    pass


class NonHermitian(FibseqError, ValueError):
    pass


class UnknownName(FibseqError, KeyError):
    pass


class DimTooSmall(FibseqError, ValueError):
    pass


class EmptyWindow(FibseqError, ValueError):
    pass


class OutOfRange(FibseqError, IndexError):
    pass


class ZeroScalar(FibseqError, ValueError):
    pass


class ZeroFirstVector(FibseqError, ValueError):
    pass


class WindowTooShort(FibseqError, ValueError):
    pass


class NotIndependent(FibseqError, ValueError):
    pass


class NotInjective(FibseqError, ValueError):
    pass


class BasisMismatch(FibseqError, ValueError):
    pass


class NoBreakpoint(FibseqError, ValueError):
    pass


class NTooSmall(FibseqError, ValueError):
    pass


class PolicyError(FibseqError, ValueError):
    """An extension policy cannot be honoured on this window."""


class NoRepresentation(FibseqError):
    """The window admits no Fibonacci representation.

    ``witness`` holds coefficients c (over the constraint indices n = 1..N-2)
    with sum c_n (f_n + f_{n+1}) = 0 but sum c_n f_{n+2} != 0.
    """

    def __init__(self, witness, image):
        self.witness = witness
        self.image = image
        super().__init__("no Fibonacci representation exists; witness " + str(list(witness)))
