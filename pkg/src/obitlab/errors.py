"""Exception hierarchy.

Every domain error derives from ``ObitLabError`` and from ``ValueError`` so
callers that only know the stdlib still catch them.
"""


class ObitLabError(ValueError):
    pass


class NormalizationError(ObitLabError):
    """Amplitudes do not have unit norm within the required tolerance."""


class ZeroVectorError(ObitLabError):
    pass


class DimensionMismatchError(ObitLabError):
    pass


class KindMismatchError(ObitLabError):
    """Real and complex objects were mixed."""


class NonHermitianError(ObitLabError):
    pass


class StepError(ObitLabError):
    """Integrator step too large for the stability guard."""


class SizeError(ObitLabError):
    """Transform length is not a power of two."""


class RangeError(ObitLabError):
    pass
