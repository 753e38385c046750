"""Exception types shared across the package."""


class ParameterDomainError(ValueError):
    """Family or operation parameters outside their valid range."""


class UnsupportedFamilyError(ValueError):
    """Operation not available for this domain family."""


class SymbolDomainError(ValueError):
    """Symbol is not a valid function on the target boundary manifold."""


class BasisMismatchError(ValueError):
    """Operator algebra attempted across different graded bases."""


class InsufficientDataError(ValueError):
    """Not enough samples / spectral values for the requested fit."""


class InternalConsistencyError(RuntimeError):
    """A closed-form identity failed; signals formula misuse, not bad input."""
