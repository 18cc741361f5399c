"""Central numeric policy: every tolerance and size default in one record."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

from .errors import ConfigError

_INT_FIELDS = {"quad_max_refine", "default_dim", "max_dim", "grid_points"}


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerances and truncation defaults used throughout the package.

    tail_tol        -- mass allowed in the top four Fock levels of a
                       "converged" state
    hermiticity_tol -- max |M - M^dag| entry for density matrices
    psd_tol         -- most negative eigenvalue tolerated in a density matrix
    unitarity_tol   -- ||U^dag U - I||_max on the populated subspace
    norm_tol        -- |norm - 1| allowed where a normalized state is required
    micro_leak_tol  -- micro-mode population allowed outside {|0>, |1>}
    zero_tol        -- squared norm below which an outcome is impossible
    quad_abstol     -- absolute tolerance of adaptive quadrature integrals
    quad_max_refine -- panel-doubling rounds before giving up
    default_dim     -- starting Fock truncation for adaptive constructors
    max_dim         -- adaptive growth cap (ConvergenceError beyond)
    grid_points     -- target number of quadrature nodes on the default grid
    """

    tail_tol: float = 1e-10
    hermiticity_tol: float = 1e-10
    psd_tol: float = 1e-10
    unitarity_tol: float = 1e-8
    norm_tol: float = 1e-9
    micro_leak_tol: float = 1e-10
    zero_tol: float = 1e-15
    quad_abstol: float = 1e-9
    quad_max_refine: int = 5
    default_dim: int = 128
    max_dim: int = 4096
    grid_points: int = 2048


DEFAULT_POLICY = NumericPolicy()


def load_policy(path: str, base: NumericPolicy = DEFAULT_POLICY) -> NumericPolicy:
    """Read ``key=value`` overrides from a file (# starts a comment)."""
    known = {f.name for f in fields(NumericPolicy)}
    overrides: dict = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
                key, value = (part.strip() for part in line.split("=", 1))
                if key not in known:
                    raise ConfigError(f"{path}:{lineno}: unknown policy key {key!r}")
                try:
                    overrides[key] = int(value) if key in _INT_FIELDS else float(value)
                except ValueError as exc:
                    raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read numeric policy file {path}: {exc}") from exc
    return replace(base, **overrides)
