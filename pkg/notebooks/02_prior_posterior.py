"""Posterior observation probability as a gap grows, for a few priors.

Run: python3 notebooks/02_prior_posterior.py
"""

from faultoco import BIMODAL_PRIOR
from faultoco.priors import (
    BetaComponent,
    MassComponent,
    MixturePrior,
    advance,
    component_posterior,
    posterior_lower_bound,
    posterior_p,
    reset_after_observation,
)

priors = {
    "Beta(1,1)": MixturePrior.beta(1, 1),
    "bimodal beta": BIMODAL_PRIOR,
    "beta + mass": MixturePrior((BetaComponent(2, 8, 0.5),), (MassComponent(0.6, 0.5),)),
}

# %% The uniform prior gives 1/(d+1); the bimodal one starts at its mean and
# slides toward the low-probability component the longer nothing is seen.
print(f"{'gap':>4} " + " ".join(f"{n:>14}" for n in priors))
states = {n: reset_after_observation(p) for n, p in priors.items()}
for d in range(1, 31):
    if d > 1:
        for s in states.values():
            advance(s)
    if d in (1, 2, 3, 5, 10, 20, 30):
        print(f"{d:4d} " + " ".join(f"{posterior_p(priors[n], s):14.5f}" for n, s in states.items()))

# %% Responsibilities of the two bimodal components after a 30-round wait.
s = states["bimodal beta"]
print("component weights at gap 30:", component_posterior(s).round(4))
print("lower bound:", round(posterior_lower_bound(BIMODAL_PRIOR, s), 5))

# %% Mixing a beta with a point mass: a long wait rules out the mass at 0.6,
# so the posterior follows the beta component alone.
s = reset_after_observation(priors["beta + mass"])
for _ in range(99):
    advance(s)
print("beta + mass at gap 100:", round(posterior_p(priors["beta + mass"], s), 5))
