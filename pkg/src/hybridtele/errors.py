"""Exception types shared across the package."""


class HybridTeleError(Exception):
    """Base class for package-specific errors."""


class TailTooLarge(HybridTeleError):
    """A truncated state keeps non-negligible weight near its cutoff."""


class CutoffMismatch(HybridTeleError):
    """Operation requires modes or operands with identical cutoffs."""


class TruncationLeakage(HybridTeleError):
    """A unitary pushed significant weight into the truncation edge."""


class ShapeMismatch(HybridTeleError):
    """Operands live on incompatible mode structures."""


class ModeNotSingleRail(HybridTeleError):
    """A mode expected to hold a single-rail qubit has weight above n = 1."""


class DegenerateBasis(HybridTeleError):
    """The coherent-qubit basis collapsed (t*alpha -> 0 with a = -b)."""


class BasisMismatch(HybridTeleError):
    """Coherent-basis operands built on different basis amplitudes."""


class BackendOverflow(HybridTeleError):
    """Numeric backend requested outside its validated amplitude range."""


class NonConvergent(HybridTeleError):
    """Quadrature failed its node-doubling convergence certificate."""


class UnsupportedDirection(HybridTeleError):
    """No closed form or numeric oracle exists for the requested direction."""
