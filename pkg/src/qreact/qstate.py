"""Qubit density matrices, detector projectors and joint outcome probabilities.

Outcome convention: bit 1 means the detector projector ``(I + n.sigma) / 2``
fired, with ``n = (sin t cos p, sin t sin p, cos t)``. At ``t = 0`` this is
the projector onto ``|0>``.
"""
from __future__ import annotations

import json
import string
from dataclasses import dataclass
from pathlib import Path

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
NEGATIVE_PROB_TOL = 1e-10
MAX_QUBITS = 6

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class InvalidStateError(ValueError):
    """Matrix is not a valid density matrix (or probability table)."""


def _num_qubits(dim: int) -> int:
    d = int(round(np.log2(dim))) if dim > 0 else -1
    if d < 1 or 2**d != dim:
        raise InvalidStateError(f"dimension {dim} is not a power of two >= 2")
    return d


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator on ``d`` qubits."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidStateError(f"expected a square matrix, got shape {m.shape}")
        d = _num_qubits(m.shape[0])
        if d > MAX_QUBITS:
            raise InvalidStateError(f"{d} qubits exceeds the dense limit of {MAX_QUBITS}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise InvalidStateError("matrix is not Hermitian")
        if abs(np.trace(m) - 1) > TRACE_TOL:
            raise InvalidStateError(f"trace is {np.trace(m).real:.3g}, expected 1")
        if np.linalg.eigvalsh(m).min() < -PSD_TOL:
            raise InvalidStateError("matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim_qubits(self) -> int:
        return _num_qubits(self.matrix.shape[0])

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


@dataclass(frozen=True, eq=False)
class PureStateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).ravel()
        _num_qubits(v.size)
        if abs(np.linalg.norm(v) - 1) > 1e-12:
            raise InvalidStateError("state vector is not normalized")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @property
    def dim_qubits(self) -> int:
        return _num_qubits(self.amplitudes.size)

    def density_matrix(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


def ket(*terms: str) -> PureStateVector:
    """Equal superposition of computational basis strings, e.g. ``ket("000", "111")``."""
    d = len(terms[0])
    v = np.zeros(2**d, dtype=complex)
    for bits in terms:
        v[int(bits, 2)] += 1
    return PureStateVector(v / np.linalg.norm(v))


SINGLET = PureStateVector(np.array([0, 1, -1, 0]) / np.sqrt(2))
GHZ3 = ket("000", "111")
W3 = ket("001", "010", "100")
GHZ4 = ket("0000", "1111")
PRODUCT_ZERO = ket("00")

PURE_FAMILIES = {
    "singlet": SINGLET,
    "ghz3": GHZ3,
    "w3": W3,
    "ghz4": GHZ4,
    "product_zero": PRODUCT_ZERO,
}

# lambda |psi><psi| + (1 - lambda) I / 2^d
MIXTURE_FAMILIES = {
    "werner2": SINGLET,
    "werner3_ghz": GHZ3,
    "werner3_w": W3,
    "werner4_ghz": GHZ4,
}

STATE_FAMILIES = tuple(MIXTURE_FAMILIES) + tuple(PURE_FAMILIES)


def maximally_mixed(d: int) -> DensityMatrix:
    return DensityMatrix(np.eye(2**d, dtype=complex) / 2**d)


def make_state(name: str, lam: float = 1.0) -> DensityMatrix:
    """Build a named state.

    Mixture families return ``lam |psi><psi| + (1 - lam) I / 2^d``; for the
    pure families ``lam`` is ignored.

    Parameters
    ----------
    name : str
        One of :data:`STATE_FAMILIES`.
    lam : float
        Mixing weight in ``[0, 1]``.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    if name in PURE_FAMILIES:
        return PURE_FAMILIES[name].density_matrix()
    if name not in MIXTURE_FAMILIES:
        raise ValueError(f"unknown state family {name!r}; choose from {STATE_FAMILIES}")
    psi = MIXTURE_FAMILIES[name].amplitudes
    n = psi.size
    return DensityMatrix(lam * np.outer(psi, psi.conj()) + (1 - lam) / n * np.eye(n))


def partial_trace(rho, keep) -> np.ndarray:
    """Reduced density matrix on the qubits in ``keep`` (in ascending order)."""
    m = np.asarray(rho)
    d = _num_qubits(m.shape[0])
    keep = sorted(set(keep))
    if not keep or keep[0] < 0 or keep[-1] >= d:
        raise ValueError(f"invalid qubit subset {keep} for {d} qubits")
    letters = string.ascii_letters
    row = list(letters[:d])
    col = list(letters[d : 2 * d])
    for k in range(d):
        if k not in keep:
            col[k] = row[k]
    out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    t = np.einsum("".join(row) + "".join(col) + "->" + out, m.reshape((2,) * (2 * d)))
    dk = 2 ** len(keep)
    return t.reshape(dk, dk)


def apply_local_unitary(rho: DensityMatrix, unitary, qubit: int) -> DensityMatrix:
    """Conjugate ``rho`` by ``unitary`` acting on a single qubit."""
    d = rho.dim_qubits
    ops = [I2] * d
    ops[qubit] = np.asarray(unitary, dtype=complex)
    full = ops[0]
    for op in ops[1:]:
        full = np.kron(full, op)
    m = full @ rho.matrix @ full.conj().T
    return DensityMatrix((m + m.conj().T) / 2)


def _check_angles(theta, phi):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(theta < 0) or np.any(theta > np.pi):
        raise ValueError("theta must lie in [0, pi]")
    if np.any(phi < 0) or np.any(phi >= 2 * np.pi):
        raise ValueError("phi must lie in [0, 2 pi)")
    return theta, phi


def detector_projectors(theta, phi) -> np.ndarray:
    """Both outcome projectors for arrays of detector angles.

    Returns an array of shape ``theta.shape + (2, 2, 2)`` indexed as
    ``[..., outcome, row, col]``.
    """
    theta, phi = _check_angles(theta, phi)
    st = np.sin(theta)[..., None, None]
    fired = 0.5 * (
        I2
        + np.cos(theta)[..., None, None] * SIGMA_Z
        + st * np.sin(phi)[..., None, None] * SIGMA_Y
        + st * np.cos(phi)[..., None, None] * SIGMA_X
    )
    return np.stack([I2 - fired, fired], axis=-3)


def build_projector(theta: float, phi: float, outcome: int) -> np.ndarray:
    if outcome not in (0, 1):
        raise ValueError("outcome must be 0 or 1")
    return detector_projectors(theta, phi)[outcome]


@dataclass(frozen=True)
class MeasurementSetting:
    """Per-qubit detector angles ``((theta_1, phi_1), ..., (theta_d, phi_d))``."""

    angles: tuple

    def __post_init__(self):
        angles = tuple((float(t), float(p)) for t, p in self.angles)
        if not angles:
            raise ValueError("empty measurement setting")
        _check_angles([a[0] for a in angles], [a[1] for a in angles])
        object.__setattr__(self, "angles", angles)

    def __len__(self):
        return len(self.angles)

    def as_array(self) -> np.ndarray:
        return np.array(self.angles, dtype=float)


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Probability table of shape ``(s,) * num_vars``."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.ndim < 1 or len(set(p.shape)) != 1:
            raise InvalidStateError(f"probability table must be a hypercube, got {p.shape}")
        if np.any(p < 0) or abs(p.sum() - 1) > 1e-10:
            raise InvalidStateError("probabilities must be non-negative and sum to 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def num_vars(self) -> int:
        return self.probs.ndim

    @property
    def outcomes_per_var(self) -> int:
        return self.probs.shape[0]


def clamp_probabilities(p: np.ndarray, num_vars: int) -> np.ndarray:
    """Zero out round-off negatives and renormalize over the last ``num_vars`` axes."""
    p = np.array(np.real(p), dtype=float)
    if np.any(p < -NEGATIVE_PROB_TOL):
        raise InvalidStateError(f"probability {p.min():.3g} is below -{NEGATIVE_PROB_TOL}")
    np.maximum(p, 0.0, out=p)
    axes = tuple(range(p.ndim - num_vars, p.ndim))
    return p / p.sum(axis=axes, keepdims=True)


def joint_probabilities(rho, angles) -> np.ndarray:
    """Outcome tables for a batch of settings.

    Parameters
    ----------
    rho : DensityMatrix or array_like
        State on ``d`` qubits.
    angles : array_like, shape (n, d, 2)
        ``angles[i, k] = (theta, phi)`` of detector ``k`` in setting ``i``.

    Returns
    -------
    ndarray, shape (n, 2, ..., 2)
        ``p[i, a_1, ..., a_d] = Re Tr(rho  prod_k P_k^{a_k})``, clamped.
    """
    m = np.asarray(rho, dtype=complex)
    d = _num_qubits(m.shape[0])
    angles = np.asarray(angles, dtype=float)
    if angles.ndim != 3 or angles.shape[1:] != (d, 2):
        raise ValueError(f"angles of shape {angles.shape} do not match a {d}-qubit state")
    ops = [detector_projectors(angles[:, k, 0], angles[:, k, 1]) for k in range(d)]
    letters = string.ascii_lowercase
    rows, cols, outs = letters[:d], letters[d : 2 * d], letters[2 * d : 3 * d]
    # Tr(rho P) = sum_ij rho_ij P_ji
    subs = ",".join(f"z{outs[k]}{cols[k]}{rows[k]}" for k in range(d))
    expr = f"{rows}{cols},{subs}->z{outs}"
    p = np.einsum(expr, m.reshape((2,) * (2 * d)), *ops, optimize=True)
    return clamp_probabilities(p, d)


def joint_distribution(rho, setting: MeasurementSetting) -> JointDistribution:
    d = np.asarray(rho).shape[0]
    if 2 ** len(setting) != d:
        raise ValueError(f"setting has {len(setting)} detectors but the state has dimension {d}")
    return JointDistribution(joint_probabilities(rho, setting.as_array()[None])[0])


def marginalize(p: JointDistribution, keep) -> JointDistribution:
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep must be non-empty")
    if keep[0] < 0 or keep[-1] >= p.num_vars:
        raise ValueError(f"invalid variable indices {keep} for {p.num_vars} variables")
    drop = tuple(i for i in range(p.num_vars) if i not in keep)
    return JointDistribution(p.probs.sum(axis=drop) if drop else p.probs)


def load_density_matrix(path) -> DensityMatrix:
    """Read ``{"dim_qubits": d, "entries": [[re, im], ...]}`` (row-major)."""
    doc = json.loads(Path(path).read_text())
    d = int(doc["dim_qubits"])
    entries = np.asarray(doc["entries"], dtype=float)
    n = 2**d
    if entries.shape != (n * n, 2):
        raise InvalidStateError(f"expected {n * n} [re, im] pairs for {d} qubits")
    return DensityMatrix((entries[:, 0] + 1j * entries[:, 1]).reshape(n, n))


def save_density_matrix(rho: DensityMatrix, path) -> None:
    flat = rho.matrix.ravel()
    doc = {
        "dim_qubits": rho.dim_qubits,
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }
    Path(path).write_text(json.dumps(doc))
