"""Averages of entropic geometry over detector settings, and the reactivity ratio.

The space of measurements carries the flat measure ``dtheta dphi`` on
``[0, pi] x [0, 2 pi)`` per detector (volume ``2 pi^2`` each), not the
``sin(theta)`` Haar measure. By default the first detector is pinned at
``theta = phi = 0`` and only the others are integrated over.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import infogeo
from .qstate import (
    MIXTURE_FAMILIES,
    DensityMatrix,
    MeasurementSetting,
    joint_distribution,
    joint_probabilities,
    make_state,
)

DEGENERATE_TOL = 1e-9
CHUNK_SIZE = 8192
SUPPORTED_QUBITS = (2, 3, 4)


class DegenerateGeometryError(ArithmeticError):
    """Mean denominator vanishes: the observers are (almost) perfectly correlated."""


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "grid"
    grid_points_per_angle: int = 32
    mc_samples: int = 20000
    rng_seed: int = 0
    fix_first_detector: bool = True

    def __post_init__(self):
        if self.method not in ("grid", "monte_carlo"):
            raise ValueError(f"method must be 'grid' or 'monte_carlo', got {self.method!r}")
        if self.grid_points_per_angle < 2:
            raise ValueError("grid_points_per_angle must be >= 2")
        if self.mc_samples < 1:
            raise ValueError("mc_samples must be >= 1")

    @classmethod
    def default_for(cls, d: int, **overrides) -> "IntegratorConfig":
        """Midpoint grid for two qubits, Monte Carlo beyond."""
        method = "grid" if d <= 2 else "monte_carlo"
        return cls(**{"method": method, **overrides})

    @classmethod
    def from_dict(cls, doc: dict) -> "IntegratorConfig":
        aliases = {
            "points": "grid_points_per_angle",
            "samples": "mc_samples",
            "seed": "rng_seed",
        }
        kwargs = {aliases.get(k, k): v for k, v in doc.items()}
        if kwargs.get("method") == "mc":
            kwargs["method"] = "monte_carlo"
        unknown = set(kwargs) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown integrator options: {sorted(unknown)}")
        return cls(**kwargs)

    @classmethod
    def from_json(cls, path) -> "IntegratorConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return asdict(self)


def sample_settings(d: int, cfg: IntegratorConfig):
    """Detector settings and their weights.

    Returns
    -------
    angles : ndarray, shape (n, d, 2)
        ``(theta, phi)`` per detector.
    weights : ndarray, shape (n,)
        Equal weights summing to one.
    """
    if d < 2:
        raise ValueError("need at least two detectors")
    first = 1 if cfg.fix_first_detector else 0
    m = d - first
    if cfg.method == "grid":
        n = cfg.grid_points_per_angle
        theta = (np.arange(n) + 0.5) * np.pi / n
        phi = (np.arange(n) + 0.5) * 2 * np.pi / n
        axes = [theta, phi] * m
        mesh = np.meshgrid(*axes, indexing="ij")
        free = np.stack([g.ravel() for g in mesh], axis=-1).reshape(-1, m, 2)
    else:
        rng = np.random.default_rng(cfg.rng_seed)
        n = cfg.mc_samples
        free = np.empty((n, m, 2))
        free[..., 0] = rng.uniform(0.0, np.pi, size=(n, m))
        free[..., 1] = rng.uniform(0.0, 2 * np.pi, size=(n, m))
    angles = np.zeros((free.shape[0], d, 2))
    angles[:, first:, :] = free
    weights = np.full(free.shape[0], 1.0 / free.shape[0])
    return angles, weights


def worker_count() -> int:
    env = os.environ.get("QREACT_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _chunked(fn, angles):
    """Apply ``fn`` to fixed-size chunks of ``angles`` in parallel; results stay in order.

    Chunk boundaries do not depend on the worker count, so the output is
    identical for any number of threads.
    """
    chunks = [angles[i : i + CHUNK_SIZE] for i in range(0, len(angles), CHUNK_SIZE)]
    workers = min(worker_count(), len(chunks))
    if workers <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))


def sample_probabilities(rho, angles) -> np.ndarray:
    """Joint outcome tables for every setting in ``angles``."""
    parts = _chunked(lambda a: joint_probabilities(rho, a), angles)
    return np.concatenate(parts, axis=0)


def geometry_samples(probs: np.ndarray, num_vars: int) -> infogeo.GeometryReport:
    """Per-setting geometry for a batch of outcome tables."""
    return infogeo.geometry_report(infogeo.entropy_table(probs, num_vars))


def _numerator_denominator(report: infogeo.GeometryReport):
    d = report.num_vars
    if d == 2:
        (dist,) = report.distances.values()
        return None, dist
    if d == 3:
        return report.perimeter, report.surface
    if d == 4:
        return report.surface, report.volume_total
    raise ValueError(f"reactivity is defined here for {SUPPORTED_QUBITS} qubits, got {d}")


def _weighted_mean(weights, values) -> float:
    values = np.asarray(values, dtype=float)
    if values.ndim == 0:
        return float(values)
    return float(np.dot(weights, values))


def mean_geometry(rho: DensityMatrix, cfg: IntegratorConfig) -> infogeo.GeometryReport:
    """Weighted average of the per-setting geometry over the space of measurements."""
    d = rho.dim_qubits
    if d not in SUPPORTED_QUBITS:
        raise ValueError(f"unsupported number of qubits: {d}")
    angles, weights = sample_settings(d, cfg)
    report = geometry_samples(sample_probabilities(rho, angles), d)
    return report.map(lambda v: _weighted_mean(weights, v))


@dataclass(frozen=True)
class ReactivityResult:
    mean_numerator: float
    mean_denominator: float
    reactivity: float
    stderr_estimate: float
    samples_used: int
    denominator_stderr: float = float("nan")
    degenerate: bool = False


def _ratio_result(num, den, weights, monte_carlo: bool) -> ReactivityResult:
    # two qubits: the boundary term is the constant 1
    mean_num = 1.0 if num is None else float(np.dot(weights, num))
    mean_den = float(np.dot(weights, den))
    n = len(weights)
    if mean_den < DEGENERATE_TOL:
        return ReactivityResult(mean_num, mean_den, float("inf"), float("nan"), n, float("nan"), True)
    ratio = mean_num / mean_den
    stderr = den_stderr = float("nan")
    if monte_carlo and n > 1:
        # first-order delta method for a ratio of means
        resid = ((1.0 if num is None else num) - ratio * den) / mean_den
        stderr = float(np.std(resid, ddof=1) / np.sqrt(n))
        den_stderr = float(np.std(den, ddof=1) / np.sqrt(n))
    return ReactivityResult(mean_num, mean_den, ratio, stderr, n, den_stderr)


def reactivity(rho: DensityMatrix, cfg: IntegratorConfig | None = None) -> ReactivityResult:
    """Mean boundary measure over mean bulk measure of the entropic simplex.

    Two qubits: ``1 / <D_AB>``. Three: ``<perimeter> / <area>``. Four:
    ``<surface> / <volume>``.

    Raises
    ------
    DegenerateGeometryError
        If the mean denominator is below ``DEGENERATE_TOL``.
    """
    d = rho.dim_qubits
    if d not in SUPPORTED_QUBITS:
        raise ValueError(f"unsupported number of qubits: {d}")
    cfg = cfg or IntegratorConfig.default_for(d)
    angles, weights = sample_settings(d, cfg)
    report = geometry_samples(sample_probabilities(rho, angles), d)
    result = _ratio_result(*_numerator_denominator(report), weights, cfg.method == "monte_carlo")
    if result.degenerate:
        raise DegenerateGeometryError(
            f"mean denominator {result.mean_denominator:.3g} is below {DEGENERATE_TOL}"
        )
    return result


def reactivity_sweep(family: str, lambdas, cfg: IntegratorConfig | None = None) -> list:
    """Reactivity of ``make_state(family, lam)`` for each ``lam`` on one shared sample set.

    Degenerate points are returned with ``degenerate=True`` instead of raising.
    Outcome tables are affine in the mixing weight, so mixture families
    evaluate the two endpoint states once and interpolate.
    """
    lambdas = [float(x) for x in lambdas]
    d = make_state(family, 1.0).dim_qubits
    if d not in SUPPORTED_QUBITS:
        raise ValueError(f"unsupported number of qubits: {d}")
    cfg = cfg or IntegratorConfig.default_for(d)
    angles, weights = sample_settings(d, cfg)
    mc = cfg.method == "monte_carlo"
    if family in MIXTURE_FAMILIES:
        pure = sample_probabilities(make_state(family, 1.0), angles)
        mixed = np.full_like(pure, 1.0 / 2**d)

    results = []
    for lam in lambdas:
        if family in MIXTURE_FAMILIES:
            probs = lam * pure + (1 - lam) * mixed
        else:
            probs = sample_probabilities(make_state(family, lam), angles)
        report = geometry_samples(probs, d)
        results.append(_ratio_result(*_numerator_denominator(report), weights, mc))
    return results


def normalize_curve(values) -> list:
    """Affine rescaling with ``R(0) -> 0`` and ``R(1) -> 1``."""
    values = [(float(lam), float(r)) for lam, r in values]
    ends = {lam: r for lam, r in values if lam in (0.0, 1.0)}
    if 0.0 not in ends or 1.0 not in ends:
        raise ValueError("curve must contain lambda = 0 and lambda = 1")
    r0, r1 = ends[0.0], ends[1.0]
    if r1 == r0:
        raise ValueError("curve has zero range between its endpoints")
    out = []
    for lam, r in values:
        if lam == 0.0:
            out.append((lam, 0.0))
        elif lam == 1.0:
            out.append((lam, 1.0))
        else:
            out.append((lam, (r - r0) / (r1 - r0)))
    return out


@dataclass(frozen=True)
class Quadrilateral:
    """Edges of Schumacher's four-detector quadrilateral and its triangle-inequality excess."""

    edges: dict
    violation: float
    settings: dict


def _pair_distance(rho, a, b) -> float:
    p = joint_distribution(rho, MeasurementSetting([a, b]))
    return float(infogeo.info_distance(infogeo.entropy_table(p), 0, 1))


def schumacher_quadrilateral(rho: DensityMatrix, a1, a2, b1, b2) -> Quadrilateral:
    """Compare the direct edge ``A1-B2`` with the path ``A1-B1-A2-B2``.

    Each edge comes from its own pair of detectors measured on a separate
    sub-ensemble. ``violation > 0`` means the direct edge is longer than the
    three-edge path.
    """
    if rho.dim_qubits != 2:
        raise ValueError("the quadrilateral needs a two-qubit state")
    edges = {
        "A1B1": _pair_distance(rho, a1, b1),
        "B1A2": _pair_distance(rho, a2, b1),
        "A2B2": _pair_distance(rho, a2, b2),
        "A1B2": _pair_distance(rho, a1, b2),
    }
    violation = edges["A1B2"] - (edges["A1B1"] + edges["B1A2"] + edges["A2B2"])
    settings = {"A1": tuple(a1), "A2": tuple(a2), "B1": tuple(b1), "B2": tuple(b2)}
    return Quadrilateral(edges, violation, settings)


def _distance_matrix(rho, theta_a, theta_b) -> np.ndarray:
    """``D[i, j]`` between an A detector at ``theta_a[i]`` and a B detector at ``theta_b[j]`` (phi = 0)."""
    ta, tb = np.meshgrid(theta_a, theta_b, indexing="ij")
    angles = np.zeros(ta.shape + (2, 2))
    angles[..., 0, 0] = ta
    angles[..., 1, 0] = tb
    probs = joint_probabilities(rho, angles.reshape(-1, 2, 2))
    t = infogeo.entropy_table(probs, 2)
    return np.asarray(infogeo.info_distance(t, 0, 1)).reshape(ta.shape)


def _best_quadrilateral(rho, a2_nodes, b1_nodes, b2_nodes):
    theta_a = np.concatenate([[0.0], a2_nodes])
    theta_b = np.concatenate([b1_nodes, b2_nodes])
    dist = _distance_matrix(rho, theta_a, theta_b)
    nb1 = len(b1_nodes)
    d_a1_b1 = dist[0, :nb1]
    d_a1_b2 = dist[0, nb1:]
    d_a2_b1 = dist[1:, :nb1]
    d_a2_b2 = dist[1:, nb1:]
    # axes: (a2, b1, b2)
    excess = (
        d_a1_b2[None, None, :]
        - d_a1_b1[None, :, None]
        - d_a2_b1[:, :, None]
        - d_a2_b2[:, None, :]
    )
    i, j, k = np.unravel_index(np.argmax(excess), excess.shape)
    return excess[i, j, k], (a2_nodes[i], b1_nodes[j], b2_nodes[k])


def search_schumacher(rho: DensityMatrix, points: int = 16, refine: bool = True) -> Quadrilateral:
    """Grid search for the settings that maximize the quadrilateral violation.

    ``A1`` stays at ``theta = 0``; the polar angles of ``A2``, ``B1`` and
    ``B2`` run over a ``points``-node grid on ``[0, pi]`` with ``phi = 0``,
    followed by one finer grid across the neighbouring cells of the best node.
    """
    if rho.dim_qubits != 2:
        raise ValueError("the quadrilateral needs a two-qubit state")
    nodes = np.linspace(0.0, np.pi, points)
    _, best = _best_quadrilateral(rho, nodes, nodes, nodes)
    if refine:
        step = nodes[1] - nodes[0]
        local = [np.linspace(max(0.0, c - step), min(np.pi, c + step), points) for c in best]
        _, best = _best_quadrilateral(rho, *local)
    a2, b1, b2 = best
    return schumacher_quadrilateral(rho, (0.0, 0.0), (a2, 0.0), (b1, 0.0), (b2, 0.0))
