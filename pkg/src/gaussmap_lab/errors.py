"""Exception types shared across the package."""


class GaussmapError(Exception):
    """Base class for all errors raised by this package."""


class ZeroDenominator(GaussmapError):
    """A rational map was constructed with an identically zero denominator."""


class ConvergenceFailure(GaussmapError):
    """An iterative numeric routine failed to reach its tolerance."""


class NotAPole(GaussmapError):
    """A residue was requested at a regular point."""


class ContourTooLarge(GaussmapError):
    """Another pole lies inside (or too close to) the requested contour."""


class TolTooCoarse(GaussmapError):
    """Two candidate values are too close to separate at the given tolerance."""


class Degenerate(GaussmapError):
    """Geometric input is degenerate (repeated points, singular matrix)."""


class NotOmitted(GaussmapError):
    """A value claimed to be omitted is attained inside the domain."""

    def __init__(self, value, witness):
        super().__init__(f"value {value!r} attained at interior point {witness!r}")
        self.value = value
        self.witness = witness


class InvalidParams(GaussmapError):
    """Family parameters violate the family's validity predicate."""


class Unsupported(GaussmapError):
    """The requested operation is not available for this family."""


class ConfigError(GaussmapError):
    """A solver or grid configuration is malformed."""


class MetricSingular(GaussmapError):
    """Pointwise geometry requested at a degenerate point of the metric."""


class StructuralViolation(GaussmapError):
    """A canonical map failed one of its structural checks."""


class PeriodFailure(GaussmapError):
    """Mesh generation requested for data that fails the period condition."""


class PathThroughPole(GaussmapError):
    """An integration path passes too close to a pole of the integrand."""
