"""
Four-qubit reactivity
=====================

Surface over volume for the GHZ mixture on four qubits, rescaled to run
from 0 at the maximally mixed state to 1 at the pure state.
"""

import numpy as np

from qreact import IntegratorConfig, reactivity_sweep
from qreact.reactivity import normalize_curve

cfg = IntegratorConfig(method="monte_carlo", mc_samples=20_000, rng_seed=7)
lambdas = np.linspace(0, 1, 6)
raw = [r.reactivity for r in reactivity_sweep("werner4_ghz", lambdas, cfg)]
for (lam, n), r in zip(normalize_curve(zip(lambdas, raw)), raw):
    print(f"lambda={lam:.1f}  raw={r:.4f}  normalized={n:.4f}")
