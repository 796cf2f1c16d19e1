"""Exception types shared across the package."""


class PovmkitError(Exception):
    """Base class for all library-specific errors."""


class DimensionMismatchError(PovmkitError, ValueError):
    """Operands have incompatible shapes or are not square matrices."""


class ValidationError(PovmkitError, ValueError):
    """A value failed its construction-time invariants."""


class IncompleteMeasureError(PovmkitError, ValueError):
    """The measure does not span operator space, so state inversion is impossible."""


class InfeasibleProbabilitiesError(PovmkitError, ValueError):
    """The given probabilities admit no valid density operator under the measure."""


class UnsupportedMeasureError(PovmkitError, ValueError):
    """The operation is defined only for maximal (all rank-one) PVMs."""


class NoSignalingError(PovmkitError, ValueError):
    """Bivariate marginals are mutually inconsistent, so the joint-distribution question is ill-posed."""


class InternalConsistencyError(PovmkitError, RuntimeError):
    """Two independent computations of the same quantity disagreed beyond tolerance."""
