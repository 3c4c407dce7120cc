"""Exception types shared by every evaluator."""


class ZetaSeriesError(Exception):
    """Base class for all library errors."""


class DomainError(ZetaSeriesError):
    """Argument outside the half-plane / interval an operation is defined on."""


class ConvergenceError(ZetaSeriesError):
    """Requested accuracy could not be reached within the term budget."""


class PoleError(ZetaSeriesError):
    """Evaluation point is inside the exclusion radius of a pole."""


class BoundaryError(ZetaSeriesError):
    """|z| on the convergence circle but no summability method was given."""


class RadiusError(ZetaSeriesError):
    """|z| outside the convergence radius of a power series."""


class CapacityError(ZetaSeriesError):
    """Sieve limit exceeds the configured memory budget."""


class NotAPoleError(ZetaSeriesError):
    """No pole exists at the requested index (its coefficient is zero)."""


class CharacterRangeError(ZetaSeriesError):
    """Character index outside the order of the unit group."""
