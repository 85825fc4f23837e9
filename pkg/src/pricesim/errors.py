"""Exception and warning types shared across the package."""


class PricesimError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(PricesimError):
    """Vector/matrix shapes do not line up."""


class NotADistribution(PricesimError):
    """Operation requires a distributional noise family (the periodic
    process is deterministic and has no CDF/PDF)."""


class UnboundedSteepness(PricesimError):
    """The log-concavity constants are undefined for this family: the
    first-derivative ratio diverges (uniform) or the family is not
    log-concave (Cauchy)."""


class ZeroDensity(PricesimError):
    """The virtual valuation is evaluated where the density vanishes."""


class BracketingFailure(PricesimError):
    """Root bracketing found no sign change within the expansion bounds."""


class DegenerateCovariance(PricesimError):
    """The empirical covariance diagonal is identically zero, so the
    regularization level is undefined."""


class NonFiniteObjective(PricesimError):
    """The penalized likelihood evaluated to a non-finite value despite
    probability clamping."""


class DimensionTooLarge(PricesimError):
    """Support enumeration for the restricted eigenvalue is combinatorial
    and is only allowed for small dimensions."""


class ConfigInvalid(PricesimError):
    """Experiment configuration failed schema validation."""


class UnknownCheck(PricesimError):
    """Verification check name is not in the registry."""


class ProbabilityUnderflow(UserWarning):
    """A sale probability fell below the clamping floor; the value was
    clamped rather than propagated as -inf."""
