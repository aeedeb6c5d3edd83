"""Mixture priors over a hidden constant observation probability.

After every observation a fresh probability ``x`` is drawn from the prior and
held fixed until the next observation, so the gap to that observation is
geometric in ``x``.  Given that ``d - 1`` rounds have already passed without
an observation, the conditional chance of observing at the ``d``-th round is

    p(d) = int P(x) (1-x)^(d-1) x dx / int P(x) (1-x)^(d-1) dx.

For mixtures of beta densities and point masses this ratio has a closed form
built from per-component opinions and survival weights:

    beta (a, b):  opinion  a / (a + b + d - 1)
                  survival Q(d) = G(a+b) G(b+d-1) / (G(b) G(a+b+d-1))
    mass  p:      opinion  p
                  survival F(d) = (1 - p)^(d-1)

Survival weights shrink geometrically, so they are tracked as logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class BetaComponent:
    alpha: float
    beta: float
    weight: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"beta component needs alpha, beta > 0, got ({self.alpha}, {self.beta})")
        if not self.weight >= 0:
            raise ValueError(f"negative mixture weight {self.weight}")


@dataclass(frozen=True)
class MassComponent:
    p: float
    weight: float

    def __post_init__(self):
        # p = 0 would mean the next observation never happens.
        if not (0 < self.p <= 1):
            raise ValueError(f"point mass must lie in (0, 1], got {self.p}")
        if not self.weight >= 0:
            raise ValueError(f"negative mixture weight {self.weight}")


@dataclass(frozen=True)
class MixturePrior:
    betas: tuple[BetaComponent, ...] = ()
    masses: tuple[MassComponent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "betas", tuple(self.betas))
        object.__setattr__(self, "masses", tuple(self.masses))
        if not self.betas and not self.masses:
            raise ValueError("mixture prior needs at least one component")
        total = sum(c.weight for c in self.components)
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ValueError(f"mixture weights sum to {total!r}, expected 1")

    @classmethod
    def beta(cls, alpha: float, beta: float) -> MixturePrior:
        return cls(betas=(BetaComponent(alpha, beta, 1.0),))

    @classmethod
    def mass(cls, p: float) -> MixturePrior:
        return cls(masses=(MassComponent(p, 1.0),))

    @classmethod
    def uniform_betas(cls, params: Sequence[tuple[float, float]]) -> MixturePrior:
        w = 1.0 / len(params)
        return cls(betas=tuple(BetaComponent(a, b, w) for a, b in params))

    @property
    def components(self) -> tuple:
        """Betas first, then masses; indices into this tuple identify components."""
        return self.betas + self.masses

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.components])

    def mean(self) -> float:
        return sum(c.weight * c.alpha / (c.alpha + c.beta) for c in self.betas) + sum(
            c.weight * c.p for c in self.masses
        )


# Either a fixed prior or a schedule k -> prior for the k-th gap (k >= 1).
PriorSchedule = Union[MixturePrior, Callable[[int], MixturePrior]]


def prior_for(schedule: PriorSchedule, k: int) -> MixturePrior:
    return schedule if isinstance(schedule, MixturePrior) else schedule(k)


@dataclass
class PriorPosteriorState:
    """Per-component recursion state while waiting for the next observation.

    ``gap`` counts rounds already elapsed without an observation, i.e. the
    round currently being considered is the ``gap + 1``-th after the last
    observation.
    """

    prior: MixturePrior
    p_comp: np.ndarray
    log_Q: np.ndarray
    log_F: np.ndarray
    gap: int = 0
    _ab: np.ndarray = field(repr=False, default=None)
    _b: np.ndarray = field(repr=False, default=None)
    _log1m: np.ndarray = field(repr=False, default=None)

    @property
    def Q(self) -> np.ndarray:
        return np.exp(self.log_Q)

    @property
    def F(self) -> np.ndarray:
        return np.exp(self.log_F)

    def copy(self) -> PriorPosteriorState:
        return PriorPosteriorState(
            self.prior, self.p_comp.copy(), self.log_Q.copy(), self.log_F.copy(),
            self.gap, self._ab, self._b, self._log1m,
        )


def reset_after_observation(prior: MixturePrior) -> PriorPosteriorState:
    a = np.array([c.alpha for c in prior.betas], dtype=np.float64)
    b = np.array([c.beta for c in prior.betas], dtype=np.float64)
    pm = np.array([c.p for c in prior.masses], dtype=np.float64)
    with np.errstate(divide="ignore"):
        log1m = np.log1p(-pm)
    return PriorPosteriorState(
        prior=prior,
        p_comp=a / (a + b),
        log_Q=np.zeros(len(a)),
        log_F=np.zeros(len(pm)),
        gap=0,
        _ab=a + b,
        _b=b,
        _log1m=log1m,
    )


def advance(state: PriorPosteriorState) -> PriorPosteriorState:
    """Move to the next candidate round after a missed observation (in place)."""
    n = state.gap
    ab = state._ab
    state.log_Q += np.log((state._b + n) / (ab + n))
    state.p_comp *= (ab + n) / (ab + n + 1.0)
    state.log_F += state._log1m
    state.gap = n + 1
    return state


def _log_weights(state: PriorPosteriorState) -> tuple[np.ndarray, np.ndarray]:
    prior = state.prior
    with np.errstate(divide="ignore"):
        lw_b = np.log([c.weight for c in prior.betas]) + state.log_Q if prior.betas else np.empty(0)
        lw_m = np.log([c.weight for c in prior.masses]) + state.log_F if prior.masses else np.empty(0)
    return lw_b, lw_m


def component_posterior(state: PriorPosteriorState) -> np.ndarray:
    """Posterior component responsibilities at the current gap (betas first)."""
    lw = np.concatenate(_log_weights(state))
    top = np.max(lw)
    if not math.isfinite(top):
        raise ZeroDivisionError("every prior component has zero posterior weight at this gap")
    r = np.exp(lw - top)
    return r / r.sum()


def posterior_p(prior: MixturePrior, state: PriorPosteriorState) -> float:
    """Conditional probability of observing at the current candidate round."""
    if state.prior is not prior:
        if state.prior != prior:
            raise ValueError("posterior state was built for a different prior")
    opinions = np.concatenate([state.p_comp, [c.p for c in prior.masses]])
    return float(np.dot(component_posterior(state), opinions))


def posterior_lower_bound(prior: MixturePrior, state: PriorPosteriorState) -> float:
    """Smallest component opinion; the posterior is a convex combination of them.

    Zero-weight components are skipped since they never carry posterior mass.
    """
    vals = [p for p, c in zip(state.p_comp, prior.betas) if c.weight > 0]
    vals += [c.p for c in prior.masses if c.weight > 0]
    return float(min(vals))


def posterior_p_at_gap(prior: MixturePrior, d: int) -> float:
    """Posterior probability at the ``d``-th round after an observation (d >= 1)."""
    if d < 1:
        raise ValueError(f"gap term must be >= 1, got {d}")
    state = reset_after_observation(prior)
    for _ in range(d - 1):
        advance(state)
    return posterior_p(prior, state)


def sample_gap_probability(prior: MixturePrior, rng: np.random.Generator) -> tuple[float, int]:
    """Draw the hidden observation probability for the next gap.

    Returns ``(p, component_index)`` where the index points into
    ``prior.components``.
    """
    comps = prior.components
    if len(comps) == 1:
        idx = 0
    else:
        idx = int(rng.choice(len(comps), p=prior.weights))
    c = comps[idx]
    if isinstance(c, MassComponent):
        return c.p, idx
    p = float(rng.beta(c.alpha, c.beta))
    # Beta draws can round to exactly 0 for tiny alpha; keep the probability positive.
    if p <= 0.0:
        p = np.nextafter(0.0, 1.0)
    return p, idx
