"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the physical domain (non-positive density, pressure, ...)."""


class RangeError(ValueError):
    """Argument outside a tabulated or otherwise bounded range."""


class ApplicabilityError(ValueError):
    """Law, invariant set or scheme requested for an (n, gamma, S) case it does not cover."""


class SingularConstraintError(ValueError):
    """A differential constraint cannot be inverted at the given sample."""


class StepFailure(RuntimeError):
    """A time step could not be completed; ``report`` carries solver diagnostics."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ConfigError(ValueError):
    """Invalid run configuration; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
