"""Exceptions shared across the package."""


class PalmDegeneracyError(Exception):
    """Anchor Gram matrix is numerically singular and no stable fallback applies."""


class DimensionMismatchError(Exception):
    """Anchor tuples of different lengths; the conditioned ensembles are mutually singular."""


class ConvergenceFailureError(Exception):
    """An adaptive series or tail product failed to meet its stopping rule."""


class AnchorCollisionError(Exception):
    """A sample point coincides with a denominator anchor within tolerance."""


class RejectionBudgetError(Exception):
    """The rejection sampler exhausted its trial budget for one point."""


class BudgetExceededError(Exception):
    """An exact enumeration would exceed the configured combinatorial budget."""
