"""Exception types shared across the package."""


class BlowUpError(RuntimeError):
    """A time step produced non-finite values or an exploding norm."""

    def __init__(self, message, step=None, time=None, norm=None):
        super().__init__(message)
        self.step = step
        self.time = time
        self.norm = norm


class CFLViolationError(ValueError):
    """A step size violates the stability restriction h*omega_j < 2."""

    def __init__(self, message, mode=None, h=None, omega=None):
        super().__init__(message)
        self.mode = mode
        self.h = h
        self.omega = omega


class ReferenceUnconvergedError(RuntimeError):
    """Self-verification of a reference solution failed.

    Carries both computed states so the caller can inspect them.
    """

    def __init__(self, message, coarse=None, fine=None, discrepancy=None, tol=None):
        super().__init__(message)
        self.coarse = coarse
        self.fine = fine
        self.discrepancy = discrepancy
        self.tol = tol


class IncompleteGridError(ValueError):
    """An error table is missing (K, h) combinations needed for an envelope."""


class FitUndefinedError(ValueError):
    """Fewer than three usable points were available for an order fit."""


class ConfigError(ValueError):
    """An experiment or CLI configuration failed validation."""
