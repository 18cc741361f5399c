"""Exception types shared across the package."""


class MicromacroError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(MicromacroError):
    """Operator or state dimensions are invalid or inconsistent."""


class InvalidOperatorError(MicromacroError):
    """Operator or density matrix violates a structural requirement."""


class ZeroStateError(MicromacroError):
    """An operation produced or received an identically zero state vector."""


class ImpossibleOutcomeError(MicromacroError):
    """A conditioning outcome has (numerically) zero probability."""


class NormalizationError(MicromacroError):
    """Operation requires a normalized state and did not get one."""


class LeakageError(MicromacroError):
    """Micro mode carries population outside the {|0>, |1>} subspace."""


class ConvergenceError(MicromacroError):
    """A truncated or iterative computation missed its tolerance."""


class ConfigError(MicromacroError):
    """Parameter out of range or invalid run configuration."""
