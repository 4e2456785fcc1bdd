"""Two-qubit reference measures: Wootters concurrence and Ollivier-Zurek discord."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .infogeo import shannon_entropy
from .qstate import (
    SIGMA_Y,
    DensityMatrix,
    detector_projectors,
    make_state,
    partial_trace,
)
from .reactivity import IntegratorConfig, normalize_curve, reactivity_sweep

_YY = np.kron(SIGMA_Y, SIGMA_Y)
ROUNDOFF = 1e-12


class DiscordConvergenceWarning(RuntimeWarning):
    pass


def _require_two_qubits(rho):
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    if rho.dim_qubits != 2:
        raise ValueError(f"expected a two-qubit state, got {rho.dim_qubits} qubits")
    return rho.matrix


def concurrence(rho) -> float:
    """Wootters concurrence ``max(0, s1 - s2 - s3 - s4)``.

    ``s_i`` are the square roots, in descending order, of the eigenvalues of
    ``rho @ rho_tilde`` with ``rho_tilde = (Y x Y) rho* (Y x Y)``.
    """
    m = _require_two_qubits(rho)
    flipped = _YY @ m.conj() @ _YY
    evals = np.linalg.eigvals(m @ flipped)
    # eigenvalues are real and non-negative up to round-off
    roots = np.sort(np.sqrt(np.abs(evals.real)))[::-1]
    c = roots[0] - roots[1:].sum()
    if c < ROUNDOFF:
        return 0.0
    return float(min(c, 1.0))


def von_neumann_entropy(rho) -> float:
    """``-sum l log2 l`` over the spectrum of ``rho``, in bits."""
    evals = np.linalg.eigvalsh(np.asarray(rho))
    return float(shannon_entropy(np.clip(evals, 0.0, None)))


def mutual_information(rho) -> float:
    m = _require_two_qubits(rho)
    s_a = von_neumann_entropy(partial_trace(m, [0]))
    s_b = von_neumann_entropy(partial_trace(m, [1]))
    return max(0.0, s_a + s_b - von_neumann_entropy(m))


@dataclass(frozen=True)
class DiscordConfig:
    coarse_grid: tuple = (64, 32)
    refine_iterations: int = 3
    tolerance: float = 1e-10

    def __post_init__(self):
        n_theta, n_phi = self.coarse_grid
        if n_theta < 8 or n_phi < 8:
            raise ValueError("coarse grid needs at least 8 x 8 nodes")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


def classical_correlation(rho, theta, phi):
    """``J = S(rho_B) - sum_j p_j S(rho_B|j)`` for a projective measurement of A.

    Vectorized over arrays of ``theta`` and ``phi``.
    """
    m = _require_two_qubits(rho)
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    proj = detector_projectors(theta, phi)  # (..., j, 2, 2)
    r = m.reshape(2, 2, 2, 2)  # a b a' b'
    # unnormalized conditional state of B: Tr_A[(P_j x I) rho] = sum P_j[a', a] rho[a, b, a', b']
    cond = np.einsum("...jca,abcd->...jbd", proj, r)
    p = np.real(np.einsum("...jbb->...j", cond))
    evals = np.linalg.eigvalsh(cond)
    evals = np.clip(evals, 0.0, None)
    safe_p = np.where(p > 0, p, 1.0)[..., None]
    # p_j S(rho_j) = -sum e log(e / p_j)
    ratio = np.where(evals > 0, evals / safe_p, 1.0)
    weighted = -np.sum(evals * np.log2(ratio), axis=(-1, -2))
    s_b = von_neumann_entropy(partial_trace(m, [1]))
    return s_b - weighted


def _periodic_phi(phi):
    return np.mod(phi, 2 * np.pi)


def discord(rho, cfg: DiscordConfig | None = None) -> float:
    """Discord ``I(rho) - max J`` with the maximum over projective measurements on A.

    The maximum is located on a midpoint grid in ``(theta, phi)`` and then
    polished by alternating bounded one-dimensional searches within one grid
    cell of the incumbent. Emits :class:`DiscordConvergenceWarning` when the
    last refinement pass still moved ``J`` by more than ``cfg.tolerance``.
    """
    cfg = cfg or DiscordConfig()
    m = _require_two_qubits(rho)
    n_theta, n_phi = cfg.coarse_grid
    d_theta = np.pi / n_theta
    d_phi = 2 * np.pi / n_phi
    theta = (np.arange(n_theta) + 0.5) * d_theta
    phi = (np.arange(n_phi) + 0.5) * d_phi
    grid = classical_correlation(m, theta[:, None], phi[None, :])
    # argmax returns the lowest flat index on ties
    i, j = np.unravel_index(np.argmax(grid), grid.shape)
    best_t, best_p, best_j = theta[i], phi[j], grid[i, j]

    def j_at(t, p):
        return float(classical_correlation(m, t, _periodic_phi(p)))

    change = np.inf
    for _ in range(cfg.refine_iterations):
        start = best_j
        res = minimize_scalar(
            lambda t: -j_at(t, best_p),
            bounds=(max(0.0, best_t - d_theta), min(np.pi, best_t + d_theta)),
            method="bounded",
            options={"xatol": 1e-10},
        )
        if -res.fun > best_j:
            best_t, best_j = res.x, -res.fun
        res = minimize_scalar(
            lambda p: -j_at(best_t, p),
            bounds=(best_p - d_phi, best_p + d_phi),
            method="bounded",
            options={"xatol": 1e-10},
        )
        if -res.fun > best_j:
            best_p, best_j = float(_periodic_phi(res.x)), -res.fun
        change = best_j - start
    if cfg.refine_iterations > 0 and change > cfg.tolerance:
        warnings.warn(
            f"discord refinement still moving by {change:.3g} after "
            f"{cfg.refine_iterations} passes",
            DiscordConvergenceWarning,
            stacklevel=2,
        )
    return max(0.0, mutual_information(m) - best_j)


@dataclass(frozen=True)
class ComparisonRow:
    lam: float
    concurrence: float
    discord: float
    reactivity_normalized: float
    reactivity_raw: float


def comparison_sweep(lambdas, discord_cfg=None, integrator_cfg=None) -> list:
    """Concurrence, discord and normalized reactivity of the two-qubit Werner family.

    ``lambdas`` must include 0 and 1 (the reactivity normalization endpoints).
    """
    lambdas = [float(x) for x in lambdas]
    if any(not 0.0 <= x <= 1.0 for x in lambdas):
        raise ValueError("lambda values must lie in [0, 1]")
    cfg = integrator_cfg or IntegratorConfig(method="grid", grid_points_per_angle=128)
    results = reactivity_sweep("werner2", lambdas, cfg)
    raw = [r.reactivity for r in results]
    normed = normalize_curve(list(zip(lambdas, raw)))
    rows = []
    for lam, r, (_, rn) in zip(lambdas, raw, normed):
        rho = make_state("werner2", lam)
        rows.append(ComparisonRow(lam, concurrence(rho), discord(rho, discord_cfg), rn, r))
    return rows
