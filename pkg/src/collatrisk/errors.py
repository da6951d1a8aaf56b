"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: validation problems exit 2, domain
infeasibility (already-defaulted firm, unbracketed root) exits 3, and a
failed Monte Carlo agreement check exits 4.
"""


class CollatriskError(Exception):
    """Base class for all package errors."""


class ValidationError(CollatriskError, ValueError):
    """An input violates a documented invariant or precondition."""


class DefaultedFirmError(CollatriskError):
    """Firm value is at or below the effective barrier at inception."""


class NumericalRangeError(CollatriskError):
    """A probability left [0, 1] by more than floating-point noise."""


class NoBracketError(CollatriskError):
    """Root-finder bracket endpoints do not straddle the target."""


class MaxIterationsError(CollatriskError):
    """Root-finder hit its iteration cap before converging."""
