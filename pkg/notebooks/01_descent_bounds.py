"""Adaptive projected descent on linear losses, and how close it gets to its bound.

Run: python3 notebooks/01_descent_bounds.py
"""

import numpy as np

from faultoco import Ball, OptimizerState
from faultoco.descent import adaptive_bound
from faultoco.metrics import regret_linear

rng = np.random.default_rng(0)

# %% A single run: random gradients in 8 dimensions on a radius-2 ball.
K = Ball.origin(8, 2.0)
G = rng.normal(size=(1000, 8)) + 0.3  # a mild drift gives the comparator something to exploit
state = OptimizerState(K)
W = np.empty_like(G)
for t, g in enumerate(G):
    W[t] = state.w
    state.step(g)

R = regret_linear(W, G, 2.0)
B = adaptive_bound(np.einsum("ij,ij->i", G, G), K.diameter())
print(f"regret {R:.2f}  bound {B:.2f}  ratio {R / B:.3f}")

# %% Missing feedback is a zero substitute: w and the step size stay put.
w, G_sq = state.w.copy(), state.G_sq
state.step(np.zeros(8))
assert np.array_equal(state.w, w) and state.G_sq == G_sq
print("zero substitute leaves the state unchanged")

# %% The ratio across horizons stays well below 1.
for T in (10, 100, 1000, 5000):
    G = rng.normal(size=(T, 8)) + 0.3
    s = OptimizerState(K)
    W = np.empty_like(G)
    for t, g in enumerate(G):
        W[t] = s.w
        s.step(g)
    print(f"T={T:5d}  regret/bound = {regret_linear(W, G, 2.0) / adaptive_bound(np.einsum('ij,ij->i', G, G), 4.0):.3f}")
