"""
GHZ and W mixtures on three qubits
==================================

Both reactivity curves rise with the mixing weight, and the GHZ curve
sits above the W curve. All lambda values reuse the same Monte Carlo draws,
so differences between neighbouring points are not sampling noise.
"""

import numpy as np

from qreact import IntegratorConfig, reactivity_sweep

cfg = IntegratorConfig(method="monte_carlo", mc_samples=50_000, rng_seed=2019)
lambdas = np.linspace(0, 1, 6)
ghz = reactivity_sweep("werner3_ghz", lambdas, cfg)
w = reactivity_sweep("werner3_w", lambdas, cfg)

for lam, g, v in zip(lambdas, ghz, w):
    print(f"lambda={lam:.1f}  GHZ {g.reactivity:.4f} +- {g.stderr_estimate:.4f}   W {v.reactivity:.4f} +- {v.stderr_estimate:.4f}")
