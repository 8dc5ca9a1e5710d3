"""Exception taxonomy for the gauge-curve engine.

Every failure raised by the engine derives from GeometryError so callers
can catch one type at the service boundary.  ConfigError marks bad user
input (unknown keys, malformed specs, inadmissible parameters) as opposed
to a numerical breakdown at a specific point of a curve.
"""


class GeometryError(Exception):
    """Base class for all engine errors."""


class ConfigError(GeometryError):
    """Malformed or inconsistent user configuration."""


class SingularSystem(GeometryError):
    """Linear system determinant below the degeneracy floor."""


class NonMonotoneGrid(GeometryError):
    """Grid values must be strictly increasing."""


class NoSignChange(GeometryError):
    """Root bracket endpoints do not straddle a sign change."""


class MaxIterations(GeometryError):
    """Iteration budget exhausted before reaching tolerance."""


class RootBracketFailure(GeometryError):
    """Could not construct a valid bracket for a root solve."""


class SolverDivergence(GeometryError):
    """Newton/fallback iteration failed to converge."""


class DegenerateDirection(GeometryError):
    """Direction data too close to zero or linearly dependent."""


class DegenerateCurvature(GeometryError):
    """First and second derivatives nearly parallel; frame undefined."""


class OutOfRange(GeometryError):
    """Requested parameter lies outside the usable sample range."""


class InsufficientPoints(GeometryError):
    """Too few samples for the requested fit or grid operation."""


class ResidualTooLarge(GeometryError):
    """A consistency residual exceeded its tolerance."""


class ZeroDenominator(GeometryError):
    """A derived quantity required dividing by a near-zero value."""


class TooFewSamples(GeometryError):
    """Classification needs more invariant samples."""


class OriginNotInterior(GeometryError):
    """Translated unit ball no longer contains the origin."""
