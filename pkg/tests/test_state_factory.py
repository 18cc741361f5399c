"""State constructors against their closed-form oracles."""

import math

import numpy as np
import pytest

from micromacro import fock, states
from micromacro.errors import ConfigError, DimensionError, ZeroStateError


# ---------------------------------------------------------------------------
# dB conversion
# ---------------------------------------------------------------------------


def test_db_r_roundtrip():
    for db in (0.0, 1.0, 5.0, 12.0):
        assert abs(states.r_to_db(states.db_to_r(db)) - db) < 1e-12


def test_squeeze_param_consistency():
    param = states.SqueezeParam(0.75)
    assert abs(param.db - 20.0 * 0.75 * math.log10(math.e)) < 1e-12
    assert abs(states.SqueezeParam.from_db(param.db).r - 0.75) < 1e-12
    with pytest.raises(ConfigError):
        states.SqueezeParam(-0.1)


# ---------------------------------------------------------------------------
# squeezed vacuum
# ---------------------------------------------------------------------------


def test_squeezed_vacuum_r0_is_vacuum():
    sv = states.squeezed_vacuum(0.0, 16)
    assert np.allclose(sv.amplitudes, states.fock(0, 16).amplitudes)


def test_squeezed_vacuum_parity_selection():
    sv = states.squeezed_vacuum(0.6)
    assert np.abs(sv.amplitudes[1::2]).max() < 1e-14


def test_squeezed_vacuum_closed_form_coefficients():
    # oracle: c_{2k} = sqrt((2k)!) tanh^k r / (2^k k! sqrt(cosh r))
    r = 0.5
    sv = states.squeezed_vacuum(r)
    for k in range(7):
        expected = (math.sqrt(math.factorial(2 * k)) * math.tanh(r) ** k
                    / (2 ** k * math.factorial(k) * math.sqrt(math.cosh(r))))
        assert abs(sv.amplitudes[2 * k].real - expected) < 1e-9
        assert abs(sv.amplitudes[2 * k].imag) < 1e-12


def test_squeezed_vacuum_normalized_and_converged():
    for r in (0.0, 0.5, 1.0, 1.5):
        sv = states.squeezed_vacuum(r)
        assert abs(fock.norm(sv) - 1.0) < 1e-12
        assert sv.converged


# ---------------------------------------------------------------------------
# squeezed Fock states
# ---------------------------------------------------------------------------


def test_squeezed_fock_r0_identity():
    assert np.allclose(states.squeezed_fock(0.0, 3, 16).amplitudes,
                       states.fock(3, 16).amplitudes)


def test_squeezed_branches_orthogonal():
    r = 0.5756462732485114
    plus = states.squeezed_vacuum(r, 128)
    minus = states.squeezed_fock(r, 1, 128)
    assert abs(fock.inner(plus, minus)) < 1e-12


def test_squeezed_fock_mean_photon():
    r = 0.5756462732485114
    expected = 1.0 + 3.0 * math.sinh(r) ** 2
    assert abs(fock.mean_photon(states.squeezed_fock(r, 1)) - expected) < 1e-6


def test_squeezed_fock_odd_parity():
    sf = states.squeezed_fock(0.7, 1)
    assert np.abs(sf.amplitudes[0::2]).max() < 1e-14


# ---------------------------------------------------------------------------
# displacement
# ---------------------------------------------------------------------------


def test_displaced_vacuum_poisson_mean():
    state = states.displace(1.0)
    assert abs(fock.mean_photon(state) - 1.0) < 1e-9


def test_displace_zero_is_identity():
    base = states.squeezed_vacuum(0.4, 64)
    out = states.displace(0.0, base=base, d=64)
    assert np.abs(out.amplitudes - base.amplitudes).max() < 1e-12


def test_displace_inverse():
    base = states.squeezed_vacuum(0.3, 64)
    there = states.displace(0.8, base=base)
    back = states.displace(-0.8, base=there)
    assert np.abs(back.amplitudes[:64] - base.amplitudes).max() < 1e-9


# ---------------------------------------------------------------------------
# cats
# ---------------------------------------------------------------------------


def test_even_cat_at_zero_amplitude_is_vacuum():
    cat0 = states.cat(0.0, "even", 16)
    assert np.allclose(cat0.amplitudes, states.fock(0, 16).amplitudes)


def test_odd_cat_at_zero_amplitude_raises():
    with pytest.raises(ZeroStateError):
        states.cat(0.0, "odd")


def test_cat_parities_orthogonal():
    even = states.cat(1.1, "even", 64)
    odd = states.cat(1.1, "odd", 64)
    assert abs(fock.inner(even, odd)) < 1e-12


def test_even_cat_support_matches_coherent_expansion():
    # oracle: direct coherent-state expansion alpha^n e^{-alpha^2/2}/sqrt(n!)
    alpha = 1.2
    even = states.cat(alpha, "even", 64)
    assert np.abs(even.amplitudes[1::2]).max() < 1e-10
    n = np.arange(64)
    coh = np.exp(-alpha**2 / 2) * alpha ** n / np.sqrt(
        np.array([math.factorial(int(k)) for k in n], dtype=float))
    expected = coh + coh * (-1.0) ** n
    expected /= np.linalg.norm(expected)
    assert np.abs(even.amplitudes - expected).max() < 1e-10


def test_cat_param_normalization_invariant():
    for alpha in (0.3, 1.0, 2.2):
        for parity, sign in (("even", 1.0), ("odd", -1.0)):
            param = states.CatParam(alpha, parity)
            inv_sq = 2.0 + sign * 2.0 * math.exp(-2.0 * alpha**2)
            assert abs(param.norm_const ** -2 - inv_sq) < 1e-12


# ---------------------------------------------------------------------------
# photon-subtracted squeezed states
# ---------------------------------------------------------------------------


def test_single_subtraction_is_squeezed_photon():
    r = 0.8
    sub, _ = states.photon_subtracted_squeezed(1, r)
    target = states.squeezed_fock(r, 1, sub.d)
    assert abs(abs(fock.inner(sub, target)) - 1.0) < 1e-9
    order = states.SubtractionOrder(1, r)
    assert abs(order.inv_norm - math.sinh(r)) < 1e-12   # P_1(x) = x


def test_double_subtraction_legendre_norm():
    r = 0.6
    _, check = states.photon_subtracted_squeezed(2, r)
    s = math.sinh(r)
    # P_2(x) = (3 x^2 - 1)/2 gives 1/N_2^2 = sinh^2 r (3 sinh^2 r + 1)
    expected = math.sqrt(s**2 * (3 * s**2 + 1))
    order = states.SubtractionOrder(2, r)
    assert abs(order.inv_norm - expected) < 1e-12
    assert check < 1e-8


def test_zero_subtraction_is_squeezed_vacuum():
    sub, check = states.photon_subtracted_squeezed(0, 0.5)
    sv = states.squeezed_vacuum(0.5, sub.d)
    assert np.abs(sub.amplitudes - sv.amplitudes).max() < 1e-12
    assert check < 1e-12


@pytest.mark.parametrize("r", (0.3, 0.6, 1.2))
@pytest.mark.parametrize("m", (0, 1, 2, 3, 4))
def test_subtraction_norm_checks(m, r):
    _, check = states.photon_subtracted_squeezed(m, r)
    assert check < 1e-8


def test_subtraction_from_vacuum_raises():
    with pytest.raises(ZeroStateError):
        states.photon_subtracted_squeezed(1, 0.0)


def test_subtraction_branches_match_manual_application():
    r, m, d = 0.7, 2, 128
    u, v = states.subtraction_branches(m, r, d=d)
    assert u.size == d - m   # structurally zero top rows are dropped
    base = states.squeezed_vacuum(r, d)
    amat = fock.ladder(d).matrix
    manual = base.amplitudes.copy()
    for _ in range(m):
        manual = amat @ manual
    assert np.abs(u - manual[: d - m]).max() < 1e-12
    assert np.abs(v - (amat @ manual)[: d - m]).max() < 1e-12


# ---------------------------------------------------------------------------
# two-mode squeezed vacuum
# ---------------------------------------------------------------------------


def test_tmsv_zero_is_double_vacuum():
    state = states.tmsv(0.0, 8)
    expected = np.zeros((8, 8))
    expected[0, 0] = 1.0
    assert np.allclose(state.coeffs, expected)


def test_tmsv_entropy_closed_form():
    # oracle: geometric Schmidt spectrum p_n = (1 - l^2) l^{2n}
    lam = 0.5
    state = states.tmsv(lam)
    n = np.arange(500)
    probs = (1 - lam**2) * lam ** (2 * n)
    expected = float(-np.sum(probs * np.log2(probs)))
    assert abs(fock.schmidt_entropy(state) - expected) < 1e-8


def test_tmsv_reduced_state_is_thermal():
    lam = 0.4
    state = states.tmsv(lam)
    rho = fock.partial_trace(state, keep=0)
    off_diag = rho.matrix - np.diag(np.diag(rho.matrix))
    assert np.abs(off_diag).max() < 1e-14
    n = np.arange(rho.d)
    assert np.abs(np.diag(rho.matrix).real - (1 - lam**2) * lam ** (2 * n)).max() < 1e-12


def test_tmsv_rejects_unit_lambda():
    with pytest.raises(ConfigError):
        states.tmsv(1.0)


# ---------------------------------------------------------------------------
# beamsplitter
# ---------------------------------------------------------------------------


def test_beamsplitter_splits_single_photon():
    for t in (0.3, 0.5, 0.9):
        bs = states.beamsplitter(t, 4, 4)
        out = fock.apply(bs, fock.tensor(states.fock(1, 4), states.fock(0, 4)))
        assert abs(out.coeffs[1, 0] - math.sqrt(t)) < 1e-12
        assert abs(out.coeffs[0, 1] - math.sqrt(1 - t)) < 1e-12


def test_beamsplitter_full_transmission_is_identity():
    bs = states.beamsplitter(1.0, 4, 4)
    assert np.abs(bs.matrix - np.eye(16)).max() < 1e-12


def test_beamsplitter_hong_ou_mandel():
    # oracle: direct two-photon matrix elements, (|2,0> - |0,2>)/sqrt(2)
    bs = states.beamsplitter(0.5, 4, 4)
    out = fock.apply(bs, fock.tensor(states.fock(1, 4), states.fock(1, 4)))
    coeffs = fock.canonical_phase(out.coeffs)
    assert abs(abs(coeffs[2, 0]) - 1 / math.sqrt(2)) < 1e-12
    assert abs(abs(coeffs[0, 2]) - 1 / math.sqrt(2)) < 1e-12
    assert abs(coeffs[1, 1]) < 1e-12
    assert abs(coeffs[2, 0] + coeffs[0, 2]) < 1e-12   # opposite signs


def test_beamsplitter_conserves_photon_number():
    rng = np.random.RandomState(11)
    coeffs = rng.randn(6, 6) + 1j * rng.randn(6, 6)
    coeffs[4:, :] = 0.0   # keep away from the truncation edge
    coeffs[:, 4:] = 0.0
    coeffs /= np.linalg.norm(coeffs)
    joint = fock.TwoModeState(coeffs)
    before = fock.mean_photon(joint)
    mixed = fock.apply(states.beamsplitter(0.37, 6, 6), joint)
    assert abs(fock.mean_photon(mixed) - before) < 1e-10


def test_beamsplitter_rejects_bad_transmission():
    with pytest.raises(ConfigError):
        states.beamsplitter(1.2, 4, 4)
    with pytest.raises(ConfigError):
        states.beamsplitter(-0.1, 4, 4)
