"""Exception and warning types shared across the package."""


class ArealabError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(ArealabError, ValueError):
    """A builder or operation received an out-of-contract parameter."""


class RegionError(ArealabError, IndexError):
    """A region refers to vertices outside its host lattice, or overlaps."""


class NumericalFailure(ArealabError, ArithmeticError):
    """An iterative numerical kernel failed to converge."""


class NotPositiveDefiniteError(ArealabError, ArithmeticError):
    """A matrix required to be positive (semi-)definite is not."""


class CriticalityError(ArealabError, ArithmeticError):
    """A coupling matrix sits at or beyond its positivity/criticality edge."""


class ConditioningError(ArealabError, ArithmeticError):
    """A principal submatrix is too ill-conditioned for the requested result."""


class AccuracyError(ArealabError, ArithmeticError):
    """A quadrature refinement check failed to reach the target accuracy."""


class LemmaScopeError(ArealabError, ValueError):
    """Requested asymptotics outside the proven parameter range."""


class InvalidStateError(ArealabError, ValueError):
    """A state object violates its defining invariants."""


class InvalidTableauError(ArealabError, ValueError):
    """Stabilizer generators are dependent or fail to commute."""


class InvalidPartitionError(ArealabError, ValueError):
    """Regions of a multi-region partition overlap."""


class FitError(ArealabError, ValueError):
    """Scaling-fit input window is degenerate."""


class SizeError(ArealabError, ValueError):
    """Problem size exceeds a hard cap of the dense reference engine."""


class UnsupportedModelError(ArealabError, ValueError):
    """Operation requires structure (e.g. translation invariance) the input lacks."""


class ConfigError(ArealabError, ValueError):
    """Experiment configuration failed schema validation."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class ConditioningWarning(UserWarning):
    """A computation ran close to a criticality/conditioning edge."""
