"""Wavefunctions, densities, half-line probabilities and macroscopicity."""

import math

import numpy as np
import pytest
from scipy.special import erf

from micromacro import fock, protocols, quadrature, states
from micromacro.errors import ConvergenceError
from micromacro.quadrature import QuadGrid, default_grid

BALANCED_RATE = (1.0 + math.sqrt(2.0 / math.pi)) / 2.0   # closed-form Gaussian integral


# ---------------------------------------------------------------------------
# oscillator eigenfunctions
# ---------------------------------------------------------------------------


def test_ground_state_value_at_origin():
    assert abs(quadrature.hermite_psi(0, 0.0) - math.pi ** -0.25) < 1e-12


def test_first_excited_is_odd():
    assert quadrature.hermite_psi(1, 0.0) == 0.0
    xs = np.linspace(-3, 3, 7)
    assert np.abs(quadrature.hermite_psi(1, xs) + quadrature.hermite_psi(1, -xs)).max() < 1e-12


@pytest.mark.parametrize("n", (0, 1, 5, 20, 40, 60))
def test_eigenfunction_normalization(n):
    grid = QuadGrid.symmetric(44.0, 2048)
    vals = quadrature.hermite_psi(n, grid.points)
    assert abs(np.sum(vals ** 2 * grid.weights) - 1.0) < 1e-8


def test_grid_resolves_vacuum():
    grid = default_grid(states.vacuum(16))
    gauss = np.exp(-grid.points ** 2) / math.sqrt(math.pi)   # N(0, 1/2) density
    assert abs(np.sum(gauss * grid.weights) - 1.0) < 1e-8


# ---------------------------------------------------------------------------
# wavefunctions and densities
# ---------------------------------------------------------------------------


def _grid_moments(state, grid):
    dens = quadrature.density(state, grid)
    mean = float(np.sum(grid.points * dens * grid.weights))
    second = float(np.sum(grid.points ** 2 * dens * grid.weights))
    return mean, second - mean ** 2


def test_vacuum_density_is_gaussian():
    state = states.vacuum(16)
    grid = default_grid(state)
    mean, var = _grid_moments(state, grid)
    assert abs(mean) < 1e-12
    assert abs(var - 0.5) < 1e-10


def test_squeezing_antisqueezes_x():
    # sign convention: r > 0 must enlarge the x variance to e^{2r}/2
    r = 0.45
    state = states.squeezed_vacuum(r)
    grid = default_grid(state)
    _, var = _grid_moments(state, grid)
    assert abs(var - math.exp(2 * r) / 2.0) < 1e-8


def test_coherent_density_moments():
    alpha = 0.9
    state = states.coherent(alpha)
    grid = default_grid(state)
    mean, var = _grid_moments(state, grid)
    assert abs(mean - math.sqrt(2.0) * alpha) < 1e-9
    assert abs(var - 0.5) < 1e-9


def test_density_integrates_to_one():
    for state in (states.vacuum(16), states.coherent(1.5),
                  states.squeezed_vacuum(1.0), states.cat(1.2, "odd")):
        total = (quadrature.halfline_prob(state, "+")
                 + quadrature.halfline_prob(state, "-"))
        assert abs(total - 1.0) < 1e-8


def test_wavefunction_refuses_unconverged_state():
    ragged = fock.ModeState(np.ones(8) / math.sqrt(8.0))
    with pytest.raises(ConvergenceError):
        quadrature.wavefunction(ragged, default_grid(states.vacuum(16)))


# ---------------------------------------------------------------------------
# mean x and distance
# ---------------------------------------------------------------------------


def test_mean_x_vacuum_and_squeezed_are_centred():
    assert quadrature.mean_x(states.vacuum(8)) == 0.0
    assert abs(quadrature.mean_x(states.squeezed_vacuum(0.8))) < 1e-12


def test_mean_x_coherent_matches_grid_integral():
    state = states.coherent(1.0)
    algebraic = quadrature.mean_x(state)
    assert abs(algebraic - math.sqrt(2.0)) < 1e-10
    grid = default_grid(state)
    by_grid, _ = _grid_moments(state, grid)
    assert abs(algebraic - by_grid) < 1e-7


def test_distance_identical_states():
    state = states.squeezed_vacuum(0.5)
    assert quadrature.phase_space_distance(state, state) == 0.0


def test_distance_opposite_coherent_states():
    alpha = 1.0
    plus = states.coherent(alpha)
    minus = states.coherent(-alpha)
    assert abs(quadrature.phase_space_distance(plus, minus) - 2.0 * alpha) < 1e-9


def test_distance_symmetric_and_displacement_invariant():
    a = states.coherent(0.4)
    b = states.squeezed_fock(0.3, 1)
    d_ab = quadrature.phase_space_distance(a, b)
    assert d_ab >= 0.0
    assert abs(d_ab - quadrature.phase_space_distance(b, a)) < 1e-12
    shift = 0.6
    a_moved = states.displace(shift, base=a)
    b_moved = states.displace(shift, base=b)
    assert abs(quadrature.phase_space_distance(a_moved, b_moved) - d_ab) < 1e-9


# ---------------------------------------------------------------------------
# half-line probabilities
# ---------------------------------------------------------------------------


def test_halfline_vacuum_split():
    assert abs(quadrature.halfline_prob(states.vacuum(16), "+") - 0.5) < 1e-9


def test_halfline_coherent_erf_formula():
    alpha = 0.8
    value = quadrature.halfline_prob(states.coherent(alpha), "+")
    assert abs(value - 0.5 * (1.0 + erf(math.sqrt(2.0) * alpha))) < 1e-8


@pytest.mark.parametrize("r", (0.2, 0.8, 1.4))
def test_halfline_squeezed_symmetry(r):
    assert abs(quadrature.halfline_prob(states.squeezed_vacuum(r), "+") - 0.5) < 1e-9


def test_halfline_signs_sum_to_one():
    state = states.cat(0.9, "even")
    plus = quadrature.halfline_prob(state, "+")
    minus = quadrature.halfline_prob(state, "-")
    assert abs(plus + minus - 1.0) < 1e-9


# ---------------------------------------------------------------------------
# discrimination rate
# ---------------------------------------------------------------------------


def test_discrimination_same_state_is_coin_flip():
    state = states.squeezed_vacuum(0.4)
    assert abs(quadrature.discrimination_rate(state, state) - 0.5) < 1e-9


def test_discrimination_coherent_pair_erf():
    alpha = 1.0
    plus = states.coherent(alpha)
    minus = states.coherent(-alpha)
    expected = 1.0 - (1.0 - erf(math.sqrt(2.0) * alpha)) / 2.0
    assert abs(quadrature.discrimination_rate(plus, minus) - expected) < 1e-8


def test_discrimination_orientation_is_label_free():
    plus = states.coherent(0.7)
    minus = states.coherent(-0.7)
    forward = quadrature.discrimination_rate(plus, minus)
    swapped = quadrature.discrimination_rate(minus, plus)
    assert abs(forward - swapped) < 1e-12


def test_balanced_pair_rate_constant_in_squeezing():
    # dilation invariance: the balanced pair is S(r) applied to (|0> +- |1>)/sqrt(2)
    values = []
    for r in np.arange(0.0, 1.51, 0.3):
        plus, minus = protocols.balanced_macro_pair(0, float(r))
        values.append(quadrature.discrimination_rate(plus, minus))
    assert max(abs(v - BALANCED_RATE) for v in values) < 1e-4
    assert max(values) - min(values) < 1e-6


def test_macro_measures_record():
    plus = states.coherent(1.0)
    minus = states.coherent(-1.0)
    measures = quadrature.macro_measures(plus, minus)
    assert measures.snu == 2.0 * measures.distance
    assert 0.0 <= measures.rate <= 1.0


# ---------------------------------------------------------------------------
# displaced photon-number discrimination
# ---------------------------------------------------------------------------


def test_displaced_vacuum_pair_is_trivial():
    vac = states.vacuum(16)
    n_hi, n_lo, beta = quadrature.displaced_photon_discrimination(vac, vac)
    assert (n_hi, n_lo, beta) == (0.0, 0.0, 0.0)


def test_displaced_coherent_pair():
    # oracle: displaced coherent-state algebra, |-alpha> -> |0>, |alpha> -> |2 alpha>
    alpha = 1.1
    plus = states.coherent(alpha)
    minus = states.coherent(-alpha)
    n_hi, n_lo, beta = quadrature.displaced_photon_discrimination(plus, minus)
    assert abs(beta - alpha) < 1e-9
    assert abs(n_lo) < 1e-8
    assert abs(n_hi - 4.0 * alpha ** 2) < 1e-8
