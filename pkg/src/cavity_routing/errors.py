"""Exception hierarchy shared by the simulator modules."""


class CavityRoutingError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(CavityRoutingError, ValueError):
    """Invalid network configuration or unparsable config file.

    ``line`` carries the 1-based source line when the error came from a file.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegenerateQubit(CavityRoutingError, ValueError):
    """The coherent-state qubit has (numerically) zero norm."""


class NoTransferPeak(CavityRoutingError):
    """The target receiver never reaches the population floor."""


class DimensionGuard(CavityRoutingError):
    """A truncated Fock space exceeds the configured dimension limit."""


class ExcessiveTruncation(CavityRoutingError):
    """Too much coherent-state weight lies above the Fock cutoff."""


class IntegrationError(CavityRoutingError):
    """Fock-space evolution failed to preserve the norm."""
