"""
Reactivity against concurrence and discord on the Werner family
================================================================

Concurrence vanishes below lambda = 1/3 while discord and normalized
reactivity stay positive all the way down to the maximally mixed state.
"""

import numpy as np

from qreact import IntegratorConfig, comparison_sweep

# 128 x 128 midpoint grid over the second detector; the first is pinned at theta = 0
cfg = IntegratorConfig(method="grid", grid_points_per_angle=128)
lambdas = np.sort(np.append(np.linspace(0, 1, 11), 1 / 3))
rows = comparison_sweep(lambdas, integrator_cfg=cfg)

print(f"{'lambda':>8} {'concurrence':>12} {'discord':>10} {'reactivity':>11}")
for r in rows:
    print(f"{r.lam:8.4f} {r.concurrence:12.6f} {r.discord:10.6f} {r.reactivity_normalized:11.6f}")

# at the separability threshold only concurrence reports nothing
third = next(r for r in rows if abs(r.lam - 1 / 3) < 1e-12)
print("\nat lambda = 1/3:", third.concurrence, round(third.discord, 4), round(third.reactivity_normalized, 4))
