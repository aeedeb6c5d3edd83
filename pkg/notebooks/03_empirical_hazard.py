"""The empirical gap histogram learning a fixed observation probability.

Run: python3 notebooks/03_empirical_hazard.py
"""

import numpy as np

from faultoco import GapHistogram

# %% Geometric gaps have a constant hazard p, so 1/p_hat should settle at 1/p.
for p in (0.1, 0.3, 0.7):
    gaps = np.random.default_rng(1).geometric(p, size=10_000)
    h = GapHistogram()
    err = np.array([abs(1 / p - 1 / h.record_observation_and_estimate(g)) for g in gaps.tolist()])
    print(f"p={p}: mean |1/p - 1/p_hat| first 100 = {err[:100].mean():7.3f}, last 5000 = {err[5000:].mean():6.3f}")

# %% The histogram itself, as (gap, count) rows.
h = GapHistogram()
for g in np.random.default_rng(2).geometric(0.4, size=50).tolist():
    h.record_observation_and_estimate(g)
print(h)
print("first rows:", h.items()[:5])
