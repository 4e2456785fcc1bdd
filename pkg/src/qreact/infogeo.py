"""Shannon-entropic geometry of a joint distribution.

Distances, areas and volumes are built from conditional entropies (base 2).
Every function accepts either scalars or arrays with a shared leading batch
shape, so a whole integration run can be evaluated at once.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .qstate import JointDistribution

CONDITIONAL_CLAMP_TOL = 1e-12


def shannon_entropy(p, axis=-1):
    """Entropy in bits along ``axis`` with ``0 log 0 = 0``."""
    p = np.asarray(p, dtype=float)
    safe = np.where(p > 0, p, 1.0)
    return -np.sum(p * np.log2(safe), axis=axis)


def _key(subset) -> tuple:
    return tuple(sorted(set(subset)))


@dataclass(frozen=True)
class EntropyTable:
    """Entropy of every non-empty subset of the variables ``0..num_vars-1``."""

    num_vars: int
    outcomes_per_var: int
    entropies: dict = field(repr=False)

    def __getitem__(self, subset):
        return self.entropies[_key(subset)]

    def subsets(self):
        return list(self.entropies)


def entropy_table(p, num_vars: int | None = None) -> EntropyTable:
    """All subset entropies of a distribution.

    ``p`` is a :class:`JointDistribution`, or an array whose trailing
    ``num_vars`` axes index the outcomes; leading axes are batch axes.
    """
    if isinstance(p, JointDistribution):
        probs, d = p.probs, p.num_vars
    else:
        probs = np.asarray(p, dtype=float)
        d = probs.ndim if num_vars is None else num_vars
    batch = probs.ndim - d
    s = probs.shape[-1]
    entropies = {}
    for r in range(1, d + 1):
        for subset in combinations(range(d), r):
            drop = tuple(batch + i for i in range(d) if i not in subset)
            marg = probs.sum(axis=drop) if drop else probs
            flat = marg.reshape(marg.shape[:batch] + (-1,))
            entropies[subset] = shannon_entropy(flat)
    return EntropyTable(d, s, entropies)


def _clamp_nonnegative(x, what):
    x = np.asarray(x, dtype=float)
    if np.any(x < -CONDITIONAL_CLAMP_TOL):
        raise ValueError(f"{what} is negative ({np.min(x):.3g}) beyond round-off")
    x = np.maximum(x, 0.0)
    return x if x.ndim else float(x)


def conditional_entropy(t: EntropyTable, target, given):
    """``H(target | given) = H(target, given) - H(given)``."""
    target, given = set(target), set(given)
    if not target or not given:
        raise ValueError("target and given must be non-empty")
    if target & given:
        raise ValueError(f"target {sorted(target)} and given {sorted(given)} overlap")
    return _clamp_nonnegative(t[target | given] - t[given], "conditional entropy")


def info_distance(t: EntropyTable, a: int, b: int):
    """Rokhlin-Rajski distance ``2 H(a,b) - H(a) - H(b)``; zero when ``a == b``."""
    if a == b:
        return 0.0
    a, b = sorted((a, b))
    return _clamp_nonnegative(2 * t[(a, b)] - t[(a,)] - t[(b,)], "information distance")


def info_volume(t: EntropyTable, variables):
    """Leave-one-out volume of ``n >= 3`` variables.

    With ``h_i = H(v_i | rest)``, this is the elementary symmetric polynomial
    ``e_{n-1}(h_1, ..., h_n)``: the sum over ``i`` of the product of all
    ``h_j`` with ``j != i``. For three variables this is the information
    area, for four the tetrahedral volume. The pattern beyond four
    variables is an extrapolation of those two cases.
    """
    variables = sorted(variables)
    if len(set(variables)) != len(variables):
        raise ValueError(f"repeated variable in {variables}")
    if len(variables) < 3:
        raise ValueError("a volume needs at least three variables")
    h = [
        conditional_entropy(t, [v], [w for w in variables if w != v])
        for v in variables
    ]
    total = 0.0
    for skip in range(len(h)):
        term = 1.0
        for j, hj in enumerate(h):
            if j != skip:
                term = term * hj
        total = total + term
    return total


def info_area(t: EntropyTable, a: int, b: int, c: int):
    """``H(a|bc) H(b|ca) + H(b|ca) H(c|ab) + H(c|ab) H(a|bc)``."""
    return info_volume(t, (a, b, c))


@dataclass
class GeometryReport:
    """Edges, faces and cells of the entropic simplex on ``num_vars`` observers.

    Values are floats for a single setting, or arrays over a batch of
    settings (see :func:`geometry_report`).
    """

    num_vars: int
    distances: dict
    areas: dict
    volumes: dict
    perimeter: object
    surface: object
    volume_total: object
    entropies: dict = field(default_factory=dict, repr=False)

    def map(self, fn) -> "GeometryReport":
        """Apply ``fn`` to every value, e.g. a weighted mean over the batch axis."""
        return GeometryReport(
            self.num_vars,
            {k: fn(v) for k, v in self.distances.items()},
            {k: fn(v) for k, v in self.areas.items()},
            {k: fn(v) for k, v in self.volumes.items()},
            fn(self.perimeter),
            fn(self.surface),
            fn(self.volume_total),
            {k: fn(v) for k, v in self.entropies.items()},
        )

    def to_dict(self) -> dict:
        def label(k):
            return "".join(observer_name(i) for i in k)

        def num(v):
            return np.asarray(v).tolist()

        return {
            "num_vars": self.num_vars,
            "entropies": {label(k): num(v) for k, v in self.entropies.items()},
            "distances": {label(k): num(v) for k, v in self.distances.items()},
            "areas": {label(k): num(v) for k, v in self.areas.items()},
            "volumes": {label(k): num(v) for k, v in self.volumes.items()},
            "perimeter": num(self.perimeter),
            "surface": num(self.surface),
            "volume_total": num(self.volume_total),
        }


def observer_name(i: int) -> str:
    # A, B, C, E, ... ("D" is reserved for distances)
    names = "ABCEFGHIJ"
    return names[i] if i < len(names) else f"X{i}"


def geometry_report(t: EntropyTable) -> GeometryReport:
    """All pairwise distances, triple areas and quadruple volumes of a table.

    ``perimeter``, ``surface`` and ``volume_total`` are the sums of the
    distances, areas and volumes respectively (zero when there are none).
    """
    d = t.num_vars
    distances = {k: info_distance(t, *k) for k in combinations(range(d), 2)}
    areas = {k: info_area(t, *k) for k in combinations(range(d), 3)}
    volumes = {k: info_volume(t, k) for k in combinations(range(d), 4)}
    return GeometryReport(
        d,
        distances,
        areas,
        volumes,
        sum(distances.values(), 0.0),
        sum(areas.values(), 0.0),
        sum(volumes.values(), 0.0),
        dict(t.entropies),
    )


def bounds_violations(report: GeometryReport, t: EntropyTable, tol: float = 1e-10) -> list:
    """Names of the distance/area/volume bounds that ``report`` breaks."""
    log_s = np.log2(t.outcomes_per_var)
    bad = []
    for (a, b), dist in report.distances.items():
        upper = np.asarray(t[(a,)] + t[(b,)])
        if np.any(np.asarray(dist) < -tol) or np.any(dist > upper + tol) or np.any(upper > 2 * log_s + tol):
            bad.append(f"D{observer_name(a)}{observer_name(b)}")
    for k, area in report.areas.items():
        if np.any(np.asarray(area) < -tol) or np.any(np.asarray(area) > 3 * log_s**2 + tol):
            bad.append("A" + "".join(map(observer_name, k)))
    for k, vol in report.volumes.items():
        if np.any(np.asarray(vol) < -tol) or np.any(np.asarray(vol) > 4 * log_s**3 + tol):
            bad.append("V" + "".join(map(observer_name, k)))
    return bad
