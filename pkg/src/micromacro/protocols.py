"""End-to-end generation schemes for heralded micro-macro entangled states.

Covers the squeezed path-entangled photon source, remote heralded
preparation through lossy channels, joint photon subtraction with its
multi-photon variant, the coherent-cat variant, component balancing,
entanglement evaluation and the qubit-to-qumode teleportation map.

Mode convention for every ``MicroMacroState``: mode A is the microscopic
qubit-like mode (population confined to {|0>, |1>}), mode B the macroscopic
qumode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigError,
    ImpossibleOutcomeError,
    LeakageError,
    NormalizationError,
    ZeroStateError,
)
from .fock import (
    DensityOperator,
    ModeState,
    TwoModeState,
    apply,
    canonical_phase,
    ladder,
    mean_photon,
    norm,
    schmidt_entropy,
    tensor,
)
from .policy import DEFAULT_POLICY, NumericPolicy
from .states import (
    beamsplitter,
    cat,
    fock,
    squeeze_operator,
    squeezed_fock,
    squeezed_vacuum,
    subtraction_branches,
    tmsv,
)

_MICRO_DIM = 4   # head-room above the qubit subspace so leakage is checkable


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MicroMacroState:
    """Normalized joint state of the micro qubit (mode A) and the qumode (B).

    ``herald_weight`` is the squared norm of the pre-normalization output of
    the conditioning that produced the state.  For true conditional
    measurements it is a probability; for the ideal weak-tap subtraction
    limit it is a relative success measure and may exceed 1.
    """

    joint: TwoModeState
    herald_weight: float = 1.0
    policy: NumericPolicy = DEFAULT_POLICY

    def __post_init__(self):
        pol = self.policy
        total = norm(self.joint)
        if abs(total - 1.0) > pol.norm_tol:
            raise NormalizationError(f"joint norm is {total}, expected 1")
        leak = micro_leakage(self.joint)
        if leak > pol.micro_leak_tol:
            raise LeakageError(f"micro mode leaks {leak:.3e} above |1>")
        if not (self.herald_weight > 0.0 and math.isfinite(self.herald_weight)):
            raise ZeroStateError(f"herald weight must be positive, got {self.herald_weight}")

    @property
    def macro_dim(self) -> int:
        return self.joint.dims[1]

    def branch(self, micro_level: int) -> np.ndarray:
        """Unnormalized macro vector paired with micro |micro_level>."""
        return np.array(self.joint.coeffs[micro_level])


@dataclass(frozen=True, eq=False)
class HeraldOutcome:
    """A conditioned output together with its probability and click pattern."""

    state: object
    probability: float
    pattern: str


@dataclass(frozen=True, eq=False)
class TeleportResult:
    """Macro-mode output of the implemented Bell projection.

    Only the (|00> + |11>)/sqrt(2) projection returns a corrected state; the
    other outcomes are reported as labels with their probabilities.
    """

    state: ModeState
    probability: float
    outcome: str
    outcome_probabilities: dict


@dataclass(frozen=True)
class ProtocolParams:
    """Validated parameter record for the generation schemes."""

    r: float = 0.0
    m: int = 0
    transmission: float = 0.5
    alpha: float = 0.0
    lambda_a: float = 0.0
    lambda_b: float = 0.0
    eta_a: float = 1.0
    eta_b: float = 1.0
    truncation: int | None = None

    def __post_init__(self):
        if self.r < 0:
            raise ConfigError(f"squeezing must be >= 0, got {self.r}")
        if self.m < 0:
            raise ConfigError(f"subtraction order must be >= 0, got {self.m}")
        if not 0.0 <= self.transmission <= 1.0:
            raise ConfigError(f"transmission must lie in [0, 1], got {self.transmission}")
        if self.alpha < 0:
            raise ConfigError(f"cat amplitude must be >= 0, got {self.alpha}")
        for name, lam in (("lambda_a", self.lambda_a), ("lambda_b", self.lambda_b)):
            if not 0.0 <= lam < 1.0:
                raise ConfigError(f"{name} must lie in [0, 1), got {lam}")
        for name, eta in (("eta_a", self.eta_a), ("eta_b", self.eta_b)):
            if not 0.0 < eta <= 1.0:
                raise ConfigError(f"{name} must lie in (0, 1], got {eta}")
        if self.truncation is not None and self.truncation < 2:
            raise ConfigError("truncation must be >= 2")


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def micro_leakage(joint: TwoModeState) -> float:
    """Population of mode A outside the {|0>, |1>} subspace."""
    return float(np.sum(np.abs(joint.coeffs[2:, :]) ** 2))


def _micro_macro(coeffs: np.ndarray, weight: float,
                 policy: NumericPolicy) -> MicroMacroState:
    total = np.linalg.norm(coeffs)
    if total ** 2 <= policy.zero_tol:
        raise ZeroStateError("protocol output is the zero state")
    joint = TwoModeState(canonical_phase(coeffs / total))
    return MicroMacroState(joint, herald_weight=weight, policy=policy)


def swap_micro_levels(state: MicroMacroState) -> MicroMacroState:
    """Bit flip |0> <-> |1> on the micro mode (used to align labelings)."""
    coeffs = np.array(state.joint.coeffs)
    coeffs[[0, 1]] = coeffs[[1, 0]]
    return _micro_macro(coeffs, state.herald_weight, state.policy)


def overlap(a, b) -> float:
    """|<a|b>| between normalized states of matching type (phase-insensitive)."""
    va = a.coeffs.reshape(-1) if isinstance(a, TwoModeState) else a.amplitudes
    vb = b.coeffs.reshape(-1) if isinstance(b, TwoModeState) else b.amplitudes
    return float(abs(np.vdot(va, vb)))


# ---------------------------------------------------------------------------
# generation schemes
# ---------------------------------------------------------------------------


def split_and_squeeze(r: float, d: int | None = None,
                      policy: NumericPolicy = DEFAULT_POLICY) -> MicroMacroState:
    """Single photon, balanced beamsplitter, then a squeezer on the kept arm.

    Output equals (|1> S(r)|0> + |0> S(r)|1>) / sqrt(2) up to canonical
    phase; the macro branches are orthogonal, so the state carries exactly
    one ebit.
    """
    d_macro = squeezed_fock(r, 1, d, policy).d   # adaptive sizing off the wider branch
    photon = tensor(fock(1, _MICRO_DIM), fock(0, d_macro))
    split = apply(beamsplitter(0.5, _MICRO_DIM, d_macro), photon)
    squeezed = apply(squeeze_operator(r, d_macro), split, mode=1)
    return _micro_macro(np.array(squeezed.coeffs), 1.0, policy)


def joint_subtract(input_state: ModeState, transmission: float,
                   policy: NumericPolicy = DEFAULT_POLICY) -> HeraldOutcome:
    """Joint single-photon subtraction sqrt(T) a_A + sqrt(1-T) a_B.

    Acts on |1>_A (x) input_B in the low-reflectivity tap limit.  The
    herald weight is the squared norm of the unnormalized two-branch result,
    T + (1-T) <n>_input for a normalized input.
    """
    if not 0.0 <= transmission <= 1.0:
        raise ConfigError(f"transmission must lie in [0, 1], got {transmission}")
    amp = input_state.amplitudes
    lowered = ladder(input_state.d).matrix @ amp
    coeffs = np.zeros((_MICRO_DIM, input_state.d), dtype=complex)
    coeffs[0] = math.sqrt(transmission) * amp
    coeffs[1] = math.sqrt(1.0 - transmission) * lowered
    weight = float(np.sum(np.abs(coeffs) ** 2))
    if weight <= policy.zero_tol:
        raise ZeroStateError("joint subtraction produced the zero state")
    state = _micro_macro(coeffs, weight, policy)
    return HeraldOutcome(state=state, probability=weight, pattern="tap:1")


def t_balanced(input_state: ModeState, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Tap transmission <n>/(1 + <n>) that balances the two macro branches."""
    nbar = mean_photon(input_state, policy)
    return nbar / (1.0 + nbar)


def equivalent_transmission(r: float) -> float:
    """Transmission sinh^2 r / (1 + sinh^2 r) that maps the joint-subtraction
    scheme onto the split-and-squeeze scheme (up to a micro bit flip)."""
    s2 = math.sinh(r) ** 2
    return s2 / (1.0 + s2)


def macro_components(state: MicroMacroState,
                     policy: NumericPolicy = DEFAULT_POLICY):
    """Conditional macro states on the micro outcomes (|0> +- |1>)/sqrt(2).

    Returns (plus, minus, (w_plus, w_minus)); the weights are the outcome
    probabilities and sum to one for a normalized joint state.
    """
    leak = micro_leakage(state.joint)
    if leak > policy.micro_leak_tol:
        raise LeakageError(f"micro mode leaks {leak:.3e} above |1>")
    f0, f1 = state.branch(0), state.branch(1)
    branches = []
    weights = []
    for sign in (1.0, -1.0):
        vec = (f0 + sign * f1) / math.sqrt(2.0)
        w = float(np.sum(np.abs(vec) ** 2))
        if w <= policy.zero_tol:
            raise ZeroStateError("macro component has zero weight")
        branches.append(ModeState(canonical_phase(vec / math.sqrt(w))))
        weights.append(w)
    return branches[0], branches[1], (weights[0], weights[1])


def macro_pair(m: int, r: float, transmission: float, d: int | None = None,
               policy: NumericPolicy = DEFAULT_POLICY):
    """Direct constructor of the macroscopic superposition components.

    plus/minus are the normalized (sqrt(T) a^m +- sqrt(1-T) a^{m+1}) S(r)|0>;
    they agree with joint_subtract on the m-subtracted input followed by
    macro_components.
    """
    if not 0.0 <= transmission <= 1.0:
        raise ConfigError(f"transmission must lie in [0, 1], got {transmission}")
    u, v = subtraction_branches(m, r, d, policy)
    out = []
    for sign in (1.0, -1.0):
        vec = math.sqrt(transmission) * u + sign * math.sqrt(1.0 - transmission) * v
        nrm = np.linalg.norm(vec)
        if nrm ** 2 <= policy.zero_tol:
            raise ZeroStateError(f"macro component vanished (m={m}, r={r}, T={transmission})")
        out.append(ModeState(canonical_phase(vec / nrm)))
    return out[0], out[1]


def balanced_macro_pair(m: int, r: float, d: int | None = None,
                        policy: NumericPolicy = DEFAULT_POLICY):
    """Equal-weight macroscopic pair (u_hat +- v_hat)/sqrt(2).

    Identical to macro_pair at T = t_balanced of the m-subtracted input for
    r > 0.  For m = 0 the second branch is S(r)|1> exactly (a S(r)|0> is
    proportional to it), which extends the pair continuously to r = 0 where
    the balanced transmission itself degenerates to zero.
    """
    if m == 0:
        # S(r)|1> is the wider branch; let it set the shared dimension
        v_state = squeezed_fock(r, 1, d, policy)
        u_state = squeezed_vacuum(r, v_state.d, policy)
    else:
        if r <= 0.0:
            raise ZeroStateError("cannot photon-subtract at r = 0")
        u_raw, v_raw = subtraction_branches(m, r, d, policy)
        nu, nv = np.linalg.norm(u_raw), np.linalg.norm(v_raw)
        if nu ** 2 <= policy.zero_tol or nv ** 2 <= policy.zero_tol:
            raise ZeroStateError("balanced pair branch vanished")
        u_state = ModeState(canonical_phase(u_raw / nu))
        v_state = ModeState(canonical_phase(v_raw / nv))
    out = []
    for sign in (1.0, -1.0):
        vec = (u_state.amplitudes + sign * v_state.amplitudes) / math.sqrt(2.0)
        nrm = np.linalg.norm(vec)
        if nrm ** 2 <= policy.zero_tol:
            raise ZeroStateError("balanced macro component vanished")
        out.append(ModeState(canonical_phase(vec / nrm)))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# remote heralded preparation through loss
# ---------------------------------------------------------------------------


def _op_on_mode(op: np.ndarray, mode: int, dims: tuple[int, ...]) -> np.ndarray:
    full = np.array([[1.0 + 0.0j]])
    for i, dd in enumerate(dims):
        full = np.kron(full, op if i == mode else np.eye(dd))
    return full


def _loss_kraus(eta: float, d: int) -> list[np.ndarray]:
    """Pure-loss channel (beamsplitter to a vacuum ancilla, ancilla traced)."""
    amat = ladder(d).matrix
    attenuate = np.diag(np.sqrt(eta) ** np.arange(d)).astype(complex)
    ops = []
    for k in range(d):
        coeff = math.sqrt((1.0 - eta) ** k / math.factorial(k))
        ops.append(coeff * attenuate @ np.linalg.matrix_power(amat, k))
    return ops


def remote_heralded_photon(lambda_a: float, lambda_b: float,
                           eta_a: float = 1.0, eta_b: float = 1.0,
                           dim_per_mode: int = 4,
                           policy: NumericPolicy = DEFAULT_POLICY) -> HeraldOutcome:
    """Heralded delocalized single photon from two TMSV sources and loss.

    One arm of each source travels through a pure-loss channel to a central
    balanced beamsplitter; a single click on the far output port (pattern
    |0>|1> on the two detector modes) heralds the symmetric superposition
    (|0,1> + |1,0>)/sqrt(2) of the kept modes.  Returns the conditioned
    two-mode density operator and the herald probability.
    """
    params = ProtocolParams(lambda_a=lambda_a, lambda_b=lambda_b, eta_a=eta_a, eta_b=eta_b)
    d = int(dim_per_mode)
    if d < 2:
        raise ConfigError("per-mode dimension must be >= 2")
    dims = (d, d, d, d)   # A_keep, A_send, B_send, B_keep

    psi = np.einsum("ij,kl->ijkl", tmsv(params.lambda_a, d).coeffs,
                    tmsv(params.lambda_b, d).coeffs).reshape(-1)
    rho = np.outer(psi, psi.conj())

    for mode, eta in ((1, params.eta_a), (2, params.eta_b)):
        if eta >= 1.0:
            continue
        mixed = np.zeros_like(rho)
        for kraus in _loss_kraus(eta, d):
            full = _op_on_mode(kraus, mode, dims)
            mixed += full @ rho @ full.conj().T
        rho = mixed

    mixer = beamsplitter(0.5, d, d).matrix
    full_mixer = np.kron(np.eye(d), np.kron(mixer, np.eye(d)))
    rho = full_mixer @ rho @ full_mixer.conj().T

    blocks = rho.reshape(dims + dims)
    conditioned = blocks[:, 0, 1, :, :, 0, 1, :].reshape(d * d, d * d)
    prob = float(np.real(np.trace(conditioned)))
    if prob < policy.zero_tol:
        raise ImpossibleOutcomeError(f"herald probability {prob:.3e} is numerically zero")
    out = DensityOperator(conditioned, (d, d), weight=1.0, policy=policy)
    return HeraldOutcome(state=out, probability=prob, pattern="detectors:(0,1)")


# ---------------------------------------------------------------------------
# coherent-cat variant
# ---------------------------------------------------------------------------


def cat_pointer_transmission(alpha: float) -> float:
    """Transmission alpha^2/(1 + alpha^2) that makes the coherent rewrite exact.

    At this value the output is proportional to
    (|0> + |1>)|alpha> + (|0> - |1>)|-alpha>, so the macro components on the
    (|0> +- |1>) micro outcomes are exactly the coherent states |+-alpha>.
    The branch-weight-balancing value t_balanced(even cat) approaches it
    from below as alpha grows.
    """
    return alpha ** 2 / (1.0 + alpha ** 2)


def coherent_cat_scheme(alpha: float, transmission: float | None = None,
                        d: int | None = None,
                        policy: NumericPolicy = DEFAULT_POLICY) -> MicroMacroState:
    """Joint subtraction from |1>_A and an even cat on mode B.

    Output: sqrt(T)|0>|cat+> + sqrt(1-T) alpha (N+/N-) |1>|cat->.  When
    ``transmission`` is omitted the pointer-balancing value
    alpha^2/(1 + alpha^2) is used.
    """
    if alpha <= 0:
        raise ConfigError(f"cat amplitude must be positive, got {alpha}")
    if transmission is None:
        transmission = cat_pointer_transmission(alpha)
    if not 0.0 <= transmission <= 1.0:
        raise ConfigError(f"transmission must lie in [0, 1], got {transmission}")
    plus_cat = cat(alpha, "even", d, policy)
    amp = plus_cat.amplitudes
    coeffs = np.zeros((_MICRO_DIM, plus_cat.d), dtype=complex)
    coeffs[0] = math.sqrt(transmission) * amp
    coeffs[1] = math.sqrt(1.0 - transmission) * (ladder(plus_cat.d).matrix @ amp)
    weight = float(np.sum(np.abs(coeffs) ** 2))
    if weight <= policy.zero_tol:
        raise ZeroStateError("coherent-cat scheme produced the zero state")
    return _micro_macro(coeffs, weight, policy)


# ---------------------------------------------------------------------------
# micro-mode maps
# ---------------------------------------------------------------------------


def hadamard_micro(state: MicroMacroState,
                   policy: NumericPolicy = DEFAULT_POLICY) -> MicroMacroState:
    """Ideal Hadamard on the micro qubit: |0> -> (|0>+|1>)/sqrt(2), |1> -> (|0>-|1>)/sqrt(2)."""
    leak = micro_leakage(state.joint)
    if leak > policy.micro_leak_tol:
        raise LeakageError(f"micro mode leaks {leak:.3e} above |1>")
    coeffs = np.array(state.joint.coeffs)
    f0, f1 = coeffs[0].copy(), coeffs[1].copy()
    coeffs[0] = (f0 + f1) / math.sqrt(2.0)
    coeffs[1] = (f0 - f1) / math.sqrt(2.0)
    return _micro_macro(coeffs, state.herald_weight, policy)


def teleport(c0: complex, c1: complex, resource: MicroMacroState,
             policy: NumericPolicy = DEFAULT_POLICY) -> TeleportResult:
    """Map the qubit c0|0> + c1|1> onto the macro qumode of ``resource``.

    The signal and the resource's micro mode are projected onto the Bell
    state (|00> + |11>)/sqrt(2); the macro mode then carries
    c0|phi_0> + c1|phi_1> built from the resource's macro branches.  The
    remaining Bell outcomes are reported with their probabilities only,
    since their correcting unitaries on arbitrary macro states are not
    linear-optics accessible.
    """
    weight = abs(c0) ** 2 + abs(c1) ** 2
    if abs(weight - 1.0) > policy.norm_tol:
        raise ConfigError(f"|c0|^2 + |c1|^2 must be 1, got {weight}")
    f0, f1 = resource.branch(0), resource.branch(1)
    projected = {
        "bell-00+11": (c0 * f0 + c1 * f1) / math.sqrt(2.0),
        "bell-00-11": (c0 * f0 - c1 * f1) / math.sqrt(2.0),
        "bell-01+10": (c0 * f1 + c1 * f0) / math.sqrt(2.0),
        "bell-01-10": (c0 * f1 - c1 * f0) / math.sqrt(2.0),
    }
    probabilities = {k: float(np.sum(np.abs(v) ** 2)) for k, v in projected.items()}
    main = projected["bell-00+11"]
    prob = probabilities["bell-00+11"]
    if prob < policy.zero_tol:
        raise ImpossibleOutcomeError("the implemented Bell outcome has zero probability")
    out = ModeState(canonical_phase(main / math.sqrt(prob)))
    return TeleportResult(state=out, probability=prob, outcome="bell-00+11",
                          outcome_probabilities=probabilities)


def entanglement_of(state: MicroMacroState,
                    policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Schmidt entropy of the joint state, in bits."""
    return schmidt_entropy(state.joint, policy)
