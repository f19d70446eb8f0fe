"""Exceptions shared across the package."""


class TriknotError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(TriknotError):
    """Invalid input: point outside the upper half plane, bad (p, q), etc."""


class ConvergenceError(TriknotError):
    """An iterative solver or series failed to reach its tolerance."""


class BranchError(TriknotError):
    """Branch bookkeeping broke down: lift rounding residual too large,
    or an analytic continuation path passed through a zero of the radicand."""
