"""Truncated Fock-space linear algebra.

States, operators, matrix exponentials, tensor composition, reductions and
entanglement measures. All values are immutable after construction and every
operation is a pure function of its inputs, so anything here can be shared
and called concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    DimensionError,
    ImpossibleOutcomeError,
    InvalidOperatorError,
    NormalizationError,
    ZeroStateError,
)
from .policy import DEFAULT_POLICY, NumericPolicy

_TAIL_LEVELS = 4          # top Fock levels inspected by the convergence flag
_PHASE_FLOOR = 1e-12      # relative amplitude below which phase is not anchored


def _frozen_array(values, shape_hint=None) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128, copy=True)
    if shape_hint is not None and arr.ndim != shape_hint:
        raise DimensionError(f"expected a {shape_hint}-d array, got shape {arr.shape}")
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise ValueError("state/operator entries must be finite")
    arr.setflags(write=False)
    return arr


def canonical_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate a global phase so the first significant amplitude is real positive.

    Matrix exponentials introduce benign global phases; all equality tests in
    the package compare states in this canonical form.
    """
    flat = vec.reshape(-1)
    mags = np.abs(flat)
    top = mags.max(initial=0.0)
    if top == 0.0:
        return vec
    idx = int(np.argmax(mags > _PHASE_FLOOR * top))
    pivot = flat[idx]
    if abs(pivot) == 0.0:
        return vec
    return vec * (abs(pivot) / pivot)


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModeState:
    """Complex amplitudes over a truncated single-mode Fock basis (index = n).

    Sub-normalized states are first class: heralded outputs keep their norm
    as a success weight and normalization is always explicit.  ``converged``
    records whether the top four Fock levels hold less than ``tail_tol`` of
    the state's mass.
    """

    amplitudes: np.ndarray
    converged: bool = field(init=False)

    def __post_init__(self):
        amps = _frozen_array(np.asarray(self.amplitudes).reshape(-1))
        if amps.size < 1:
            raise DimensionError("a state needs at least one Fock level")
        object.__setattr__(self, "amplitudes", amps)
        tail = float(np.sum(np.abs(amps[max(amps.size - _TAIL_LEVELS, 0):]) ** 2))
        object.__setattr__(self, "converged", tail < DEFAULT_POLICY.tail_tol)

    @property
    def d(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Coefficient matrix c[j, k] for |j>_A |k>_B."""

    coeffs: np.ndarray
    converged: bool = field(init=False)

    def __post_init__(self):
        c = _frozen_array(self.coeffs, shape_hint=2)
        object.__setattr__(self, "coeffs", c)
        ta = float(np.sum(np.abs(c[max(c.shape[0] - _TAIL_LEVELS, 0):, :]) ** 2))
        tb = float(np.sum(np.abs(c[:, max(c.shape[1] - _TAIL_LEVELS, 0):]) ** 2))
        object.__setattr__(self, "converged", max(ta, tb) < DEFAULT_POLICY.tail_tol)

    @property
    def dims(self) -> tuple[int, int]:
        return self.coeffs.shape


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian positive matrix, stored normalized to unit trace.

    ``weight`` keeps the pre-normalization trace (the herald probability of
    the conditioning that produced the operator).  ``dims`` lists the Fock
    dimension of each tensor factor the flat index runs over.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]
    weight: float = 1.0
    policy: NumericPolicy = DEFAULT_POLICY

    def __post_init__(self):
        mat = _frozen_array(self.matrix, shape_hint=2)
        dims = tuple(int(d) for d in self.dims)
        if mat.shape[0] != mat.shape[1]:
            raise DimensionError("density matrix must be square")
        if int(np.prod(dims)) != mat.shape[0]:
            raise DimensionError(f"dims {dims} do not match matrix size {mat.shape[0]}")
        pol = self.policy
        scale = max(1.0, float(np.abs(mat).max()))
        if np.abs(mat - mat.conj().T).max() > pol.hermiticity_tol * scale:
            raise InvalidOperatorError("density matrix is not Hermitian")
        tr = float(np.real(np.trace(mat)))
        if tr <= 0.0:
            raise ZeroStateError("density matrix has non-positive trace")
        eigs = np.linalg.eigvalsh(mat)
        if eigs.min() < -pol.psd_tol * tr:
            raise InvalidOperatorError(f"density matrix has negative eigenvalue {eigs.min():.3e}")
        w = self.weight * tr
        if w > 1.0 + pol.psd_tol:
            raise InvalidOperatorError(f"trace weight {w} exceeds 1")
        object.__setattr__(self, "matrix", _frozen_array(mat / tr, shape_hint=2))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "weight", min(w, 1.0))

    @property
    def d(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class MatrixOperator:
    """Dense complex matrix acting on one tensor factor (or on a flattened pair)."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        mat = _frozen_array(self.matrix, shape_hint=2)
        dims = tuple(int(d) for d in self.dims)
        if mat.shape[0] != mat.shape[1]:
            raise DimensionError("operator matrix must be square")
        if int(np.prod(dims)) != mat.shape[0]:
            raise DimensionError(f"dims {dims} do not match matrix size {mat.shape[0]}")
        object.__setattr__(self, "dims", dims)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "MatrixOperator":
        return MatrixOperator(self.matrix.conj().T, self.dims)


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


def ladder(d: int) -> MatrixOperator:
    """Annihilation operator: <n-1| a |n> = sqrt(n)."""
    if d < 2:
        raise DimensionError("ladder operator needs dimension >= 2")
    return MatrixOperator(np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1), (d,))


def number_operator(d: int) -> MatrixOperator:
    """Photon number operator diag(0, 1, ..., d-1)."""
    if d < 1:
        raise DimensionError("number operator needs dimension >= 1")
    return MatrixOperator(np.diag(np.arange(d, dtype=float)), (d,))


def expm_generator(gen: MatrixOperator) -> MatrixOperator:
    """Matrix exponential of a generator on the truncated space.

    For an anti-Hermitian generator the result is unitary up to truncation
    leakage at the top of the basis.
    """
    if not (np.all(np.isfinite(gen.matrix.real)) and np.all(np.isfinite(gen.matrix.imag))):
        raise InvalidOperatorError("generator has non-finite entries")
    return MatrixOperator(scipy.linalg.expm(gen.matrix), gen.dims)


def apply(op: MatrixOperator, state, mode: int = 0):
    """Act with ``op`` on the selected tensor factor. No implicit renormalization."""
    if isinstance(state, ModeState):
        if mode != 0:
            raise DimensionError(f"single-mode state has no mode {mode}")
        if op.dims != (state.d,):
            raise DimensionError(f"operator dims {op.dims} vs state dim {state.d}")
        return ModeState(op.matrix @ state.amplitudes)
    if isinstance(state, TwoModeState):
        da, db = state.dims
        if len(op.dims) == 2:
            if op.dims != (da, db):
                raise DimensionError(f"operator dims {op.dims} vs state dims {state.dims}")
            flat = op.matrix @ state.coeffs.reshape(-1)
            return TwoModeState(flat.reshape(da, db))
        if mode == 0:
            if op.dims != (da,):
                raise DimensionError(f"operator dims {op.dims} vs mode-A dim {da}")
            return TwoModeState(op.matrix @ state.coeffs)
        if mode == 1:
            if op.dims != (db,):
                raise DimensionError(f"operator dims {op.dims} vs mode-B dim {db}")
            return TwoModeState(state.coeffs @ op.matrix.T)
        raise DimensionError(f"two-mode state has no mode {mode}")
    raise DimensionError(f"cannot apply operator to {type(state).__name__}")


# ---------------------------------------------------------------------------
# composition / reduction
# ---------------------------------------------------------------------------


def tensor(a: ModeState, b: ModeState) -> TwoModeState:
    """Product state c[j, k] = a_j b_k."""
    return TwoModeState(np.outer(a.amplitudes, b.amplitudes))


def partial_trace(state, keep) -> DensityOperator:
    """Reduced density operator over the kept mode(s); trace weight preserved."""
    if isinstance(keep, int):
        keep = (keep,)
    keep = tuple(sorted(set(int(k) for k in keep)))
    if not keep:
        raise DimensionError("keep-set must not be empty")

    if isinstance(state, TwoModeState):
        c = state.coeffs
        w = float(np.sum(np.abs(c) ** 2))
        if w <= 0.0:
            raise ZeroStateError("cannot reduce a zero state")
        if keep == (0,):
            return DensityOperator(c @ c.conj().T, (state.dims[0],), weight=min(w, 1.0) / w)
        if keep == (1,):
            return DensityOperator(c.T @ c.conj(), (state.dims[1],), weight=min(w, 1.0) / w)
        if keep == (0, 1):
            flat = c.reshape(-1)
            return DensityOperator(np.outer(flat, flat.conj()), state.dims, weight=min(w, 1.0) / w)
        raise DimensionError(f"two-mode state has no modes {keep}")

    if isinstance(state, DensityOperator):
        dims = state.dims
        if any(k < 0 or k >= len(dims) for k in keep):
            raise DimensionError(f"keep-set {keep} out of range for dims {dims}")
        n = len(dims)
        tensor_form = state.matrix.reshape(dims + dims)
        drop = [k for k in range(n) if k not in keep]
        for offset, k in enumerate(drop):
            ax = k - offset
            tensor_form = np.trace(tensor_form, axis1=ax, axis2=ax + n - offset)
            n -= 1
        size = int(np.prod([dims[k] for k in keep]))
        reduced = tensor_form.reshape(size, size)
        return DensityOperator(reduced, tuple(dims[k] for k in keep), weight=state.weight)

    raise DimensionError(f"cannot trace a {type(state).__name__}")


def to_density(state, policy: NumericPolicy = DEFAULT_POLICY) -> DensityOperator:
    """|psi><psi| with the squared norm kept as trace weight."""
    if isinstance(state, ModeState):
        flat, dims = state.amplitudes, (state.d,)
    elif isinstance(state, TwoModeState):
        flat, dims = state.coeffs.reshape(-1), state.dims
    else:
        raise DimensionError(f"cannot densify a {type(state).__name__}")
    w = float(np.sum(np.abs(flat) ** 2))
    if w <= policy.zero_tol:
        raise ZeroStateError("cannot densify a zero state")
    return DensityOperator(np.outer(flat, flat.conj()), dims, weight=min(w, 1.0) / w, policy=policy)


# ---------------------------------------------------------------------------
# inner products and norms
# ---------------------------------------------------------------------------


def _flat(state) -> np.ndarray:
    if isinstance(state, ModeState):
        return state.amplitudes
    if isinstance(state, TwoModeState):
        return state.coeffs.reshape(-1)
    raise DimensionError(f"no amplitude vector on {type(state).__name__}")


def inner(a, b) -> complex:
    """Hermitian inner product <a|b>."""
    va, vb = _flat(a), _flat(b)
    if va.size != vb.size:
        raise DimensionError(f"dimension mismatch {va.size} vs {vb.size}")
    return complex(np.vdot(va, vb))


def norm(state) -> float:
    return float(np.linalg.norm(_flat(state)))


def scale(state, factor: complex):
    """Scalar multiple of a state (same type)."""
    if isinstance(state, ModeState):
        return ModeState(state.amplitudes * factor)
    if isinstance(state, TwoModeState):
        return TwoModeState(state.coeffs * factor)
    raise DimensionError(f"cannot scale a {type(state).__name__}")


def normalize(state, policy: NumericPolicy = DEFAULT_POLICY):
    """Unit-norm copy plus the original norm (the herald weight)."""
    w = norm(state)
    if w * w <= policy.zero_tol:
        raise ZeroStateError("cannot normalize a zero state")
    return scale(state, 1.0 / w), w


def require_normalized(state, policy: NumericPolicy = DEFAULT_POLICY):
    n = norm(state)
    if abs(n - 1.0) > policy.norm_tol:
        raise NormalizationError(f"state norm is {n}, expected 1")
    return state


# ---------------------------------------------------------------------------
# observables and entanglement
# ---------------------------------------------------------------------------


def mean_photon(state, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """<n>, summed over modes for a two-mode state. Requires a normalized input."""
    require_normalized(state, policy)
    if isinstance(state, ModeState):
        n = np.arange(state.d)
        return float(np.sum(n * np.abs(state.amplitudes) ** 2))
    if isinstance(state, TwoModeState):
        da, db = state.dims
        weights = np.add.outer(np.arange(da), np.arange(db))
        return float(np.sum(weights * np.abs(state.coeffs) ** 2))
    raise DimensionError(f"no photon number on {type(state).__name__}")


def schmidt_entropy(state: TwoModeState, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Von Neumann entropy (bits) of either reduced state of a pure bipartite state."""
    require_normalized(state, policy)
    svals = np.linalg.svd(state.coeffs, compute_uv=False)
    probs = svals ** 2
    probs = probs[probs > 1e-18]
    return float(-np.sum(probs * np.log2(probs)))


def log_negativity(rho: DensityOperator, transpose_mode: int = 1) -> float:
    """log2 of the trace norm of the partial transpose across the bipartition."""
    if len(rho.dims) != 2:
        raise DimensionError("log-negativity needs a two-mode density operator")
    if transpose_mode not in (0, 1):
        raise DimensionError(f"no mode {transpose_mode} to transpose")
    da, db = rho.dims
    blocks = rho.matrix.reshape(da, db, da, db)
    if transpose_mode == 1:
        pt = blocks.transpose(0, 3, 2, 1).reshape(da * db, da * db)
    else:
        pt = blocks.transpose(2, 1, 0, 3).reshape(da * db, da * db)
    eigs = np.linalg.eigvalsh(pt)
    return float(np.log2(np.sum(np.abs(eigs))))


def pure_state_fidelity(rho: DensityOperator, target) -> float:
    """<psi|rho|psi> against a normalized pure target state."""
    vec = _flat(target)
    if vec.size != rho.d:
        raise DimensionError(f"target dim {vec.size} vs density dim {rho.d}")
    require_normalized(target)
    val = float(np.real(vec.conj() @ rho.matrix @ vec))
    return min(max(val, 0.0), 1.0)


def purity(rho: DensityOperator) -> float:
    return float(np.real(np.trace(rho.matrix @ rho.matrix)))


def herald_or_raise(weight: float, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Guard for conditioning outcomes: zero-probability outcomes are errors."""
    if weight < policy.zero_tol:
        raise ImpossibleOutcomeError(f"outcome probability {weight:.3e} is numerically zero")
    return weight
