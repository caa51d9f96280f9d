"""Exception types shared across the package."""


class BerryheatError(Exception):
    """Base class for all berryheat errors."""


class InvalidModelError(BerryheatError):
    """Network definition or a conductance sample violates the model invariants."""


class ConfigError(BerryheatError):
    """Scenario configuration could not be parsed or validated."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class ExceptionalPointError(BerryheatError):
    """Eigenvalues coalesced or turned complex; the simple real spectrum is lost.

    The adiabatic expansion requires a complete biorthogonal basis, which
    does not exist at an exceptional point.
    """

    def __init__(self, message, time=None):
        self.time = time
        super().__init__(message if time is None else f"{message} (at t = {time:g} s)")


class GridTooCoarseError(BerryheatError):
    """Eigenvalue branch matching between neighbouring grid points is ambiguous.

    Raised when two candidate matchings are within tolerance of each other;
    refine the time grid until branches are unambiguous.
    """

    def __init__(self, message, time=None):
        self.time = time
        super().__init__(message if time is None else f"{message} (at t = {time:g} s)")


class GaugeError(BerryheatError):
    """Requested eigenvector gauge cannot be applied or broke along a trajectory."""


class ParametrizationError(BerryheatError):
    """The two-body (x, y) chart is singular for the requested branch."""


class OpenPathError(BerryheatError):
    """A closed parameter-space path was required but an open one was given."""


class InstabilityError(BerryheatError):
    """Time integration produced a non-finite state; reduce the step size."""

    def __init__(self, message, time=None):
        self.time = time
        super().__init__(message if time is None else f"{message} (at t = {time:g} s)")
