"""Exception hierarchy for the toolkit."""


class CurvedCCError(Exception):
    """Base class for all toolkit errors."""


class ManifoldError(CurvedCCError):
    """A point violates the ambient manifold constraint q.q = sigma."""


class ChartDomainError(CurvedCCError):
    """Angle coordinates outside the valid chart domain."""


class SingularConfigurationError(CurvedCCError):
    """A pair of bodies is at (or numerically at) a singular separation."""


class DegenerateGradientError(CurvedCCError):
    """grad I vanishes: the configuration sits on the fixed locus of the
    rotation, so no multiplier can be extracted (special-configuration
    candidate)."""


class ConvergenceError(CurvedCCError):
    """An iterative solver failed to converge within its iteration budget."""


class NoSolutionError(CurvedCCError):
    """The solver established that no admissible solution exists for the
    requested regime (e.g. the iterates exit the chart)."""


class ConfigError(CurvedCCError):
    """Invalid configuration file or experiment description."""

    def __init__(self, message, *, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
