"""Error types for slowentropy."""

from typing import Any


class SlowEntropyError(Exception):
    """Base exception for all slowentropy errors."""


class DimensionMismatchError(SlowEntropyError, ValueError):
    """Raised when matrix shapes are incompatible."""

    def __init__(self, operation: str, left: tuple[int, int], right: tuple[int, int]):
        self.left = left
        self.right = right
        super().__init__(
            f"{operation}: dimension mismatch {left[0]}x{left[1]} vs {right[0]}x{right[1]}"
        )


class NotBracketClosedError(SlowEntropyError):
    """Raised when [u, b_i] leaves the span of the basis."""

    def __init__(self, index: int | None = None):
        self.index = index
        message = "not bracket-closed"
        if index is not None:
            message = f"{message}: [u, b_{index}] is outside the span of the basis"
        super().__init__(message)


class DependentBasisError(SlowEntropyError):
    """Raised when a supposed basis is linearly dependent."""

    def __init__(self, size: int, rank: int):
        self.size = size
        self.rank = rank
        super().__init__(f"dependent basis: {size} elements span rank {rank}")


class NotQuasiUnipotentError(SlowEntropyError):
    """Raised when ad_U has an eigenvalue off the imaginary axis."""

    def __init__(self, eigenvalue: complex, tol: float):
        self.eigenvalue = eigenvalue
        self.tol = tol
        super().__init__(
            f"not quasi-unipotent: eigenvalue {eigenvalue.real:.6g}"
            f"{eigenvalue.imag:+.6g}i has |Re| >= {tol:g}"
        )


class SpectralClusteringError(SlowEntropyError):
    """Raised when eigenvalue clusters are too close to separate."""

    def __init__(self, first: float, second: float, tol: float):
        self.first = first
        self.second = second
        super().__init__(
            f"spectral clustering unstable, adjust tol "
            f"(clusters at {first:.12g} and {second:.12g}, tol={tol:g})"
        )


class InvalidTripleError(SlowEntropyError):
    """Raised when a triple fails its bracket relations or spectrum test."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"triple invalid for this algebra: {reason}")


class NoRationalTripleError(SlowEntropyError):
    """Raised when the Jacobson-Morozov linear systems have no rational solution."""

    def __init__(self, stage: str):
        self.stage = stage
        super().__init__(f"no rational sl(2)-triple found ({stage})")


class BlockSequenceError(SlowEntropyError, ValueError):
    """Raised for malformed block sequences or Jordan length lists."""


class LogChartError(SlowEntropyError):
    """Raised when a matrix logarithm would leave its convergence domain."""

    def __init__(self, distance: float):
        self.distance = distance
        super().__init__(
            f"displacement too large for log chart (|g - I| = {distance:.3g} >= 1)"
        )


class ZeroAcceptanceError(SlowEntropyError):
    """Raised when a Monte Carlo run accepts no samples at some grid point."""

    def __init__(self, where: str, samples: int):
        self.where = where
        self.samples = samples
        super().__init__(
            f"zero acceptances at {where} with {samples} samples: "
            f"increase samples or epsilon"
        )


class NoSeparationError(SlowEntropyError):
    """Raised when a displacement never reaches the separation radius."""

    def __init__(self, eta: float):
        self.eta = eta
        super().__init__(f"no separation: |X_t| never reaches eta={eta:g}")


class DegenerateFitError(SlowEntropyError):
    """Raised when a log-log fit cannot be formed."""

    def __init__(self, reason: str, data: dict[str, Any] | None = None):
        self.data = data
        super().__init__(f"degenerate fit: {reason}")


class CodeLengthError(SlowEntropyError, ValueError):
    """Raised when two orbit codes of different lengths are compared."""

    def __init__(self, left: int, right: int):
        super().__init__(f"code length mismatch: {left} != {right}")


class SlopeAssertionError(SlowEntropyError):
    """Raised when a fitted exponent misses its asserted target."""

    def __init__(self, fitted: float, target: float, tolerance: float):
        self.fitted = fitted
        self.target = target
        self.tolerance = tolerance
        super().__init__(
            f"fitted slope {fitted:.4f} outside {target:.4f} +/- {tolerance:.4f}"
        )


class InvalidParameterError(SlowEntropyError, ValueError):
    """Raised when a numeric parameter is outside its admissible range."""


class UnsupportedRepresentationError(SlowEntropyError, ValueError):
    """Raised for representation specs outside the supported family."""
