"""Truncated Fock-space simulator for heralded micro-macro entangled states.

Library layout:

- ``fock``       : states, operators, reductions, entanglement measures
- ``states``     : constructors for every input state family
- ``quadrature`` : position-representation machinery and macroscopicity
- ``protocols``  : the generation schemes, balancing and teleportation
- ``cli``        : command-line sweeps emitting CSV/JSON
"""

from .errors import (
    ConfigError,
    ConvergenceError,
    DimensionError,
    ImpossibleOutcomeError,
    InvalidOperatorError,
    LeakageError,
    MicromacroError,
    NormalizationError,
    ZeroStateError,
)
from .policy import DEFAULT_POLICY, NumericPolicy, load_policy

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DEFAULT_POLICY",
    "DimensionError",
    "ImpossibleOutcomeError",
    "InvalidOperatorError",
    "LeakageError",
    "MicromacroError",
    "NormalizationError",
    "NumericPolicy",
    "ZeroStateError",
    "load_policy",
]

__version__ = "0.1.0"
