"""Exception hierarchy shared by all solvers."""

from __future__ import annotations


class CatenaryError(Exception):
    """Base class for every error raised by this package."""


class DegenerateSpan(CatenaryError, ValueError):
    """Both anchors share an x-coordinate (vertical hanging is unsupported)."""


class NotSagging(CatenaryError, ValueError):
    """Cable length does not exceed the anchor chord."""

    def __init__(self, length: float, chord: float):
        self.length = length
        self.chord = chord
        super().__init__(
            f"cable length {length!r} must exceed the chord length {chord!r}"
        )


class HeightMismatch(CatenaryError, ValueError):
    pass


class OutOfRange(CatenaryError, ValueError):
    pass


class InelasticShapeHasNoStretch(CatenaryError, ValueError):
    """Stretch and spring tension are undefined when gamma is zero."""


class TooFewSegments(CatenaryError, ValueError):
    pass


class InelasticNotSupported(CatenaryError, ValueError):
    """The discrete chain needs a positive compliance density."""


class ZeroLengthSegment(CatenaryError, ValueError):
    pass


class NoSignChange(CatenaryError, ValueError):
    pass


class SolverError(CatenaryError, ArithmeticError):
    """An iterative solve failed. ``trace`` holds the iteration log, if any."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace


class MaxIterationsExceeded(SolverError):
    pass


class DerivativeVanished(SolverError):
    pass


class SingularJacobian(SolverError):
    pass


class Overflow(SolverError):
    """A sinh/cosh argument exceeded the double-precision safe range."""
