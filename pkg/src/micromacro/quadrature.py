"""Position-representation machinery.

Harmonic-oscillator eigenfunctions, quadrature probability densities,
half-line discrimination probabilities and the two macroscopicity measures
(mean phase-space distance and homodyne discrimination rate).

Convention: x = (a + a^dag)/sqrt(2), so the vacuum has variance 1/2 and one
shot-noise unit is the vacuum standard deviation 1/sqrt(2).  With r > 0 the
squeezer anti-squeezes x (variance e^{2r}/2), which is what separates the
macroscopic wavepackets along the measured quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DimensionError
from .fock import ModeState, mean_photon, require_normalized
from .policy import DEFAULT_POLICY, NumericPolicy
from .states import displace

_NODES_PER_PANEL = 64


def hermite_psi(n: int, x):
    """n-th oscillator eigenfunction via the stable upward recurrence.

    psi_0(x) = pi^{-1/4} e^{-x^2/2};
    psi_{n+1} = (sqrt(2) x psi_n - sqrt(n) psi_{n-1}) / sqrt(n+1).
    """
    if n < 0:
        raise DimensionError("oscillator index must be >= 0")
    xs = np.asarray(x, dtype=float)
    prev = np.zeros_like(xs)
    cur = math.pi ** -0.25 * np.exp(-xs ** 2 / 2.0)
    for k in range(n):
        prev, cur = cur, (math.sqrt(2.0) * xs * cur - math.sqrt(k) * prev) / math.sqrt(k + 1.0)
    if np.isscalar(x):
        return float(cur)
    return cur


def _basis_matrix(d: int, x: np.ndarray) -> np.ndarray:
    """Matrix B[n, j] = psi_n(x_j), filled by the same recurrence."""
    basis = np.zeros((d, x.size))
    basis[0] = math.pi ** -0.25 * np.exp(-x ** 2 / 2.0)
    if d > 1:
        basis[1] = math.sqrt(2.0) * x * basis[0]
    for k in range(1, d - 1):
        basis[k + 1] = (math.sqrt(2.0) * x * basis[k] - math.sqrt(k) * basis[k - 1]) / math.sqrt(k + 1.0)
    return basis


@dataclass(frozen=True, eq=False)
class QuadGrid:
    """Composite Gauss-Legendre grid on [-L, L], split exactly at x = 0.

    Built only through the cached constructor so identical parameters give
    the identical (shareable, immutable) instance.
    """

    points: np.ndarray
    weights: np.ndarray
    x_min: float
    x_max: float
    n_panels: int

    @staticmethod
    @lru_cache(maxsize=64)
    def symmetric(half_width: float, n_points: int = DEFAULT_POLICY.grid_points) -> "QuadGrid":
        if half_width <= 0:
            raise DimensionError("grid half-width must be positive")
        n_panels = max(2, 2 * math.ceil(n_points / (2 * _NODES_PER_PANEL)))
        nodes, wts = np.polynomial.legendre.leggauss(_NODES_PER_PANEL)
        edges = np.linspace(-half_width, half_width, n_panels + 1)
        xs, ws = [], []
        for lo, hi in zip(edges[:-1], edges[1:]):
            xs.append(0.5 * (hi - lo) * nodes + 0.5 * (hi + lo))
            ws.append(0.5 * (hi - lo) * wts)
        points = np.concatenate(xs)
        weights = np.concatenate(ws)
        points.setflags(write=False)
        weights.setflags(write=False)
        return QuadGrid(points, weights, -half_width, half_width, n_panels)

    def refined(self) -> "QuadGrid":
        # widen as well as subdivide: panel doubling alone cannot see the
        # probability mass sitting beyond the grid boundary
        return QuadGrid.symmetric(1.25 * self.x_max, 2 * self.points.size)

    @lru_cache(maxsize=32)
    def basis(self, d: int) -> np.ndarray:
        mat = _basis_matrix(d, self.points)
        mat.setflags(write=False)
        return mat


def default_grid(*mode_states: ModeState,
                 policy: NumericPolicy = DEFAULT_POLICY) -> QuadGrid:
    """Grid wide enough for the given states: L = 4 max sqrt(2<n> + 1).

    L is rounded up to an integer so that sweeps over nearby parameters
    share one cached grid.
    """
    if not mode_states:
        raise DimensionError("need at least one state to size the grid")
    n_top = max(mean_photon(s, policy) for s in mode_states)
    half_width = max(8.0, math.ceil(4.0 * math.sqrt(2.0 * n_top + 1.0)))
    return QuadGrid.symmetric(half_width, policy.grid_points)


def wavefunction(state: ModeState, grid) -> np.ndarray:
    """psi(x) = sum_n c_n psi_n(x) on a QuadGrid or a raw point array."""
    if not state.converged:
        raise ConvergenceError("state tail is above tolerance; wavefunction would be unreliable")
    if isinstance(grid, QuadGrid):
        return state.amplitudes @ grid.basis(state.d)
    pts = np.asarray(grid, dtype=float)
    return state.amplitudes @ _basis_matrix(state.d, pts)


def density(state: ModeState, grid) -> np.ndarray:
    """Quadrature probability density |psi(x)|^2."""
    psi = wavefunction(state, grid)
    return np.abs(psi) ** 2


def mean_x(state: ModeState, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """<x> from the tridiagonal x matrix (algebraic, no grid)."""
    require_normalized(state, policy)
    amp = state.amplitudes
    if state.d == 1:
        return 0.0
    n = np.arange(state.d - 1)
    cross = np.real(np.conj(amp[:-1]) * amp[1:]) * np.sqrt(n + 1.0)
    return float(2.0 * np.sum(cross) / math.sqrt(2.0))


def phase_space_distance(a: ModeState, b: ModeState,
                         policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """D = |<x>_a - <x>_b| / sqrt(2)."""
    return abs(mean_x(a, policy) - mean_x(b, policy)) / math.sqrt(2.0)


def _halfline_once(state: ModeState, positive: bool, grid: QuadGrid) -> float:
    dens = density(state, grid)
    mask = grid.points > 0.0 if positive else grid.points < 0.0
    return float(np.sum((dens * grid.weights)[mask]))


def halfline_prob(state: ModeState, sign: str = "+",
                  grid: QuadGrid | None = None,
                  policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Probability mass on x > 0 (sign '+') or x < 0 (sign '-').

    Integrates adaptively, doubling the panel count until two refinements
    agree to ``quad_abstol``.
    """
    if sign not in ("+", "-"):
        raise DimensionError(f"sign must be '+' or '-', got {sign!r}")
    require_normalized(state, policy)
    if grid is None:
        grid = default_grid(state, policy=policy)
    positive = sign == "+"
    value = _halfline_once(state, positive, grid)
    for _ in range(policy.quad_max_refine):
        finer = grid.refined()
        refined_value = _halfline_once(state, positive, finer)
        if abs(refined_value - value) < policy.quad_abstol:
            return refined_value
        grid, value = finer, refined_value
    raise ConvergenceError("half-line integral did not reach the requested tolerance")


def _oriented(plus: ModeState, minus: ModeState, policy: NumericPolicy):
    """The state with the larger <x> takes the x>0 projector (ties keep order)."""
    if mean_x(minus, policy) > mean_x(plus, policy):
        return minus, plus
    return plus, minus


def discrimination_rate(plus: ModeState, minus: ModeState,
                        grid: QuadGrid | None = None,
                        policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Dichotomic homodyne success rate P = (P(+|+) + P(-|-)) / 2."""
    hi, lo = _oriented(plus, minus, policy)
    if grid is None:
        grid = default_grid(hi, lo, policy=policy)
    p_hi = halfline_prob(hi, "+", grid, policy)
    p_lo = halfline_prob(lo, "-", grid, policy)
    return 0.5 * (p_hi + p_lo)


@dataclass(frozen=True)
class MacroMeasures:
    """Distance / discrimination summary; ``snu`` is exactly 2 D."""

    distance: float
    rate: float

    @property
    def snu(self) -> float:
        return 2.0 * self.distance


def macro_measures(plus: ModeState, minus: ModeState,
                   grid: QuadGrid | None = None,
                   policy: NumericPolicy = DEFAULT_POLICY) -> MacroMeasures:
    return MacroMeasures(
        distance=phase_space_distance(plus, minus, policy),
        rate=discrimination_rate(plus, minus, grid, policy),
    )


def displaced_photon_discrimination(plus: ModeState, minus: ModeState,
                                    policy: NumericPolicy = DEFAULT_POLICY):
    """Translate the homodyne measure into photon numbers.

    Both states are displaced by the amplitude D/2 with the sign chosen so
    the low-mean state moves toward the vacuum; returns the resulting mean
    photon numbers and the displacement magnitude.
    """
    hi, lo = _oriented(plus, minus, policy)
    dist = phase_space_distance(hi, lo, policy)
    beta = dist / 2.0
    if beta == 0.0:
        n_hi = mean_photon(hi, policy)
        n_lo = mean_photon(lo, policy)
        return n_hi, n_lo, 0.0
    x_lo = mean_x(lo, policy)
    shift = beta if x_lo <= 0.0 else -beta
    moved_hi = displace(shift, base=hi, policy=policy)
    moved_lo = displace(shift, base=lo, policy=policy)
    return mean_photon(moved_hi, policy), mean_photon(moved_lo, policy), beta
