"""Exception types shared across the package."""


class VnEigError(Exception):
    """Base class for all package-specific errors."""


class InvalidArgumentError(VnEigError, ValueError):
    """An argument violates a documented precondition; message names the field."""


class LatticeMismatchError(InvalidArgumentError):
    """Lattice cell count does not factor the grid point count."""


class SingularPotentialError(VnEigError, ValueError):
    """Potential evaluated at (or assembled over) a singular point."""


class EmptyBasisError(VnEigError, ValueError):
    """A pruning cut removed every basis function."""


class IllConditionedOverlapError(VnEigError, ArithmeticError):
    """Overlap matrix too ill-conditioned to invert reliably."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class NumericalFailureError(VnEigError, ArithmeticError):
    """An eigensolver or factorization failed beyond recovery."""


class EmptySubspaceError(NumericalFailureError):
    """Spectral regularization discarded every overlap mode."""


class ConfigError(VnEigError, ValueError):
    """Experiment configuration file is malformed or inconsistent."""


class AccuracyGateError(VnEigError):
    """Computed levels missed the requested accuracy gate."""
