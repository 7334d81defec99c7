"""Exception and warning types shared across the package."""


class CavsqueezeError(ValueError):
    """Base class for all package-specific errors."""


class DimensionMismatchError(CavsqueezeError):
    """Operands live on incompatible Hilbert spaces."""


class StateValidationError(CavsqueezeError):
    """A state failed its norm, Hermiticity, trace or positivity checks."""


class StepSizeError(CavsqueezeError):
    """Requested integrator step violates the stability bound."""


class NormDriftError(CavsqueezeError):
    """Integrated state norm or trace drifted beyond tolerance."""


class InfiniteSqueezingError(CavsqueezeError):
    """Effective couplings of equal magnitude admit no normalizable target."""


class UnphysicalBathError(CavsqueezeError):
    """Bath correlation parameters violate |M|^2 <= N(N+1) or a rate is negative."""


class TruncationLossError(CavsqueezeError):
    """Requested state leaks too much population past the Fock cutoff."""


class DesignError(CavsqueezeError):
    """No drive configuration realizes the requested target."""


class ConfigError(CavsqueezeError):
    """A run configuration file could not be parsed or validated."""


class TruncationWarning(UserWarning):
    """The Fock cutoff is likely too small for the requested object."""


class AdvisoryWarning(UserWarning):
    """A configuration is valid but outside the regime the approximations
    were derived for; strict runs escalate these to errors."""
