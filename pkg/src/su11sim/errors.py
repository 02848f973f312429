"""Exception types raised by the simulator."""


class DomainError(ValueError):
    """A parameter is outside its physical domain (e.g. transmission > 1)."""


class UndefinedVisibilityError(ValueError):
    """Visibility is undefined: zero total flux or vanishing interference term."""


class StationaryPointError(ValueError):
    """Phase working point sits on an interference extremum (zero slope)."""


class TruncationError(RuntimeError):
    """Fock-space cutoff exhausted: tail population too large even at max cutoff."""
