"""Gradient substitutes for rounds with possibly missing feedback.

Every estimator maps the round's observation event to a vector fed to the
descent step: zero when nothing was observed, otherwise the observed
gradient scaled by ``1 / p`` for some estimate ``p`` of the conditional
observation probability.  Estimators never see the loss, only the round
index and what was observed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import priors
from .empirical import GapHistogram


@dataclass(frozen=True)
class ObservationEvent:
    """What the learner sees at round ``round`` (1-based).

    ``g`` is None for a missed round.  ``p_disclosed`` is only filled when
    the environment discloses per-round observation probabilities.
    """

    round: int
    g: np.ndarray | None = None
    p_disclosed: float | None = None

    @property
    def observed(self) -> bool:
        return self.g is not None

    @classmethod
    def missed(cls, t: int) -> ObservationEvent:
        return cls(t)


class GradientEstimator:
    """Base class.  Subclasses implement `probability` for observed rounds."""

    name = "base"

    def __init__(self, dim: int):
        self.dim = dim
        self.last_obs_round = 0
        self.last_p: float | None = None
        self._zero = np.zeros(dim)
        self._zero.setflags(write=False)

    def probability(self, ev: ObservationEvent, gap: int) -> float:
        raise NotImplementedError

    def scale(self, ev: ObservationEvent) -> float:
        """Scalar multiplier applied to ``ev.g``; 0 for missed rounds."""
        if not ev.observed:
            return 0.0
        gap = ev.round - self.last_obs_round
        if gap < 1:
            raise ValueError(f"observation at round {ev.round} does not follow round {self.last_obs_round}")
        p = self.probability(ev, gap)
        if not p > 0:
            raise ZeroDivisionError(f"{self.name}: observation probability estimate is {p}")
        self.last_p = p
        self.last_obs_round = ev.round
        return 1.0 / p

    def estimate(self, ev: ObservationEvent) -> np.ndarray:
        s = self.scale(ev)
        if s == 0.0:
            return self._zero
        return s * np.asarray(ev.g, dtype=np.float64)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim})"


class Ignore(GradientEstimator):
    """Use the observed gradient as is."""

    name = "Ignore"

    def probability(self, ev, gap):
        return 1.0


class WithKnown(GradientEstimator):
    """Divide by the probability the environment discloses with each observation."""

    name = "WithKnown"

    def probability(self, ev, gap):
        if ev.p_disclosed is None:
            raise ValueError(f"round {ev.round}: WithKnown needs a disclosed observation probability")
        return float(ev.p_disclosed)


class Uniform(GradientEstimator):
    """Posterior under a Beta(1, 1) prior: ``p = 1 / (gap + 1)``."""

    name = "Uniform"

    def probability(self, ev, gap):
        return 1.0 / (gap + 1)


class GML(GradientEstimator):
    """Maximum-likelihood constant probability for the realized gap, ``1 / gap``."""

    name = "GML"

    def probability(self, ev, gap):
        return 1.0 / gap


class WithPrior(GradientEstimator):
    """Posterior observation probability under a known mixture prior.

    `prior` may also be a callable ``k -> MixturePrior`` giving the prior that
    generates the probability for the ``k``-th gap.
    """

    name = "WithPrior"

    def __init__(self, dim: int, prior: priors.PriorSchedule):
        super().__init__(dim)
        self.prior_schedule = prior
        self.k = 1
        self._prior = priors.prior_for(prior, 1)
        self._state = priors.reset_after_observation(self._prior)

    def probability(self, ev, gap):
        state = self._state
        while state.gap < gap - 1:
            priors.advance(state)
        p = priors.posterior_p(self._prior, state)
        self.k += 1
        self._prior = priors.prior_for(self.prior_schedule, self.k)
        self._state = priors.reset_after_observation(self._prior)
        return p


class EmpiricalEP(GradientEstimator):
    """Plug-in hazard of the empirical gap distribution (APGD.EP)."""

    name = "APGD.EP"

    def __init__(self, dim: int, exclude_current: bool = False):
        super().__init__(dim)
        self.hist = GapHistogram(exclude_current=exclude_current)

    def probability(self, ev, gap):
        return self.hist.record_observation_and_estimate(gap)


VARIANTS = ("Ignore", "WithKnown", "WithPrior", "Uniform", "GML", "APGD.EP")

_ALIASES = {
    "ignore": "Ignore",
    "withknown": "WithKnown",
    "w/known": "WithKnown",
    "known": "WithKnown",
    "withprior": "WithPrior",
    "w/prior": "WithPrior",
    "prior": "WithPrior",
    "uniform": "Uniform",
    "gml": "GML",
    "apgd.ep": "APGD.EP",
    "apgd_ep": "APGD.EP",
    "empiricalep": "APGD.EP",
    "empirical": "APGD.EP",
}


def canonical_variant(name: str) -> str:
    try:
        return _ALIASES[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown variant {name!r}; expected one of {', '.join(VARIANTS)}") from None


def make_estimator(name: str, dim: int, prior=None, exclude_current: bool = False) -> GradientEstimator:
    name = canonical_variant(name)
    if name == "WithPrior":
        if prior is None:
            raise ValueError("WithPrior needs a prior")
        return WithPrior(dim, prior)
    if name == "APGD.EP":
        return EmpiricalEP(dim, exclude_current=exclude_current)
    return {"Ignore": Ignore, "WithKnown": WithKnown, "Uniform": Uniform, "GML": GML}[name](dim)


def estimate(estimator: GradientEstimator, ev: ObservationEvent) -> np.ndarray:
    return estimator.estimate(ev)


def noisy_passthrough(g, noise) -> np.ndarray:
    """Additive zero-mean noise channel: the learner sees ``g + noise``."""
    return np.asarray(g, dtype=np.float64) + np.asarray(noise, dtype=np.float64)
