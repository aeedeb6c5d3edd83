"""Loss sequences and the stochastic observation process.

The observation process draws a hidden probability from a mixture prior
after every observation and keeps it fixed until the next one, so gaps are
geometric given that probability.  The loss environments here never depend
on the learner's internal state; only `next_round` sees the decision, to
evaluate the loss and its sub-gradient there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import priors
from .estimators import ObservationEvent

DISCLOSURE_MODES = ("known", "prior_only", "none")


@dataclass(frozen=True)
class ObservationStream:
    """Pre-drawn observation outcomes for ``T`` rounds.

    ``p[t]`` and ``component[t]`` describe the hidden probability in force at
    round ``t + 1`` (arrays are 0-based, rounds 1-based).
    """

    observed: np.ndarray
    p: np.ndarray
    component: np.ndarray

    @property
    def T(self) -> int:
        return self.observed.shape[0]

    @property
    def observation_rounds(self) -> np.ndarray:
        return np.flatnonzero(self.observed) + 1

    @property
    def gaps(self) -> np.ndarray:
        r = self.observation_rounds
        return np.diff(np.concatenate([[0], r]))

    def event(self, t: int, g, disclose: bool = True) -> ObservationEvent:
        i = t - 1
        if not self.observed[i]:
            return ObservationEvent(t)
        return ObservationEvent(t, g, float(self.p[i]) if disclose else None)


class ObservationProcess:
    """Bernoulli observations with a prior-generated constant probability per gap."""

    def __init__(self, prior: priors.PriorSchedule, rng: np.random.Generator, disclosure: str = "known"):
        if disclosure not in DISCLOSURE_MODES:
            raise ValueError(f"disclosure must be one of {DISCLOSURE_MODES}, got {disclosure!r}")
        self.schedule = prior
        self.rng = rng
        self.disclosure = disclosure
        self.k = 1
        self.t = 0
        self._resample()

    def _resample(self) -> None:
        prior = priors.prior_for(self.schedule, self.k)
        self.current_p, self.current_component = priors.sample_gap_probability(prior, self.rng)

    def observe(self, g) -> ObservationEvent:
        """Advance one round and decide whether ``g`` is seen."""
        self.t += 1
        if self.rng.random() < self.current_p:
            p = self.current_p if self.disclosure == "known" else None
            ev = ObservationEvent(self.t, np.asarray(g, dtype=np.float64), p)
            self.k += 1
            self._resample()
            return ev
        return ObservationEvent(self.t)

    def stream(self, T: int) -> ObservationStream:
        """Draw ``T`` more rounds at once by sampling whole geometric gaps."""
        observed = np.zeros(T, dtype=bool)
        p = np.empty(T)
        comp = np.empty(T, dtype=np.int64)
        i = 0
        while i < T:
            # numpy's geometric sampler overflows for vanishing p; such a gap outlasts any run.
            if self.current_p > 1e-15:
                gap = int(self.rng.geometric(self.current_p))
            else:
                gap = T + 1
            end = min(i + gap, T)
            p[i:end] = self.current_p
            comp[i:end] = self.current_component
            if i + gap <= T:
                observed[i + gap - 1] = True
                self.k += 1
                self._resample()
            i = end
        self.t += T
        return ObservationStream(observed, p, comp)


def observe(proc: ObservationProcess, g) -> ObservationEvent:
    return proc.observe(g)


class LinearAdversary:
    """Linear losses ``f_t(w) = s * scale * 1^T w`` with a random sign ``s``.

    The sign is redrawn right after each observation, so it is fixed over
    every gap as in the lower-bound construction.  With
    ``sign_mode="independent"`` it is a fair coin flip.  With
    ``sign_mode="component"`` it is read off the prior component that drew
    the hidden observation probability for the gap (``component_signs[c]``),
    which is still a fair coin under equal mixture weights but correlates
    the sign with the gap length.
    """

    SIGN_MODES = ("independent", "component")

    def __init__(
        self,
        dim: int,
        scale: float,
        rng: np.random.Generator,
        sign_mode: str = "independent",
        component_signs: tuple[float, ...] = (1.0, -1.0),
    ):
        if sign_mode not in self.SIGN_MODES:
            raise ValueError(f"sign_mode must be one of {self.SIGN_MODES}, got {sign_mode!r}")
        self.dim = dim
        self.scale = float(scale)
        self.rng = rng
        self.sign_mode = sign_mode
        self.component_signs = tuple(float(x) for x in component_signs)
        self.direction = np.ones(dim)
        self.sign = self._draw() if sign_mode == "independent" else self.component_signs[0]

    def _draw(self) -> float:
        return 1.0 if self.rng.random() < 0.5 else -1.0

    def _sign_of(self, component: int) -> float:
        return self.component_signs[component % len(self.component_signs)]

    def gradient(self) -> np.ndarray:
        return (self.sign * self.scale) * self.direction

    def next_round(self, w) -> tuple[float, np.ndarray]:
        g = self.gradient()
        return float(np.dot(g, w)), g

    def on_observation(self, component: int | None = None) -> None:
        """Redraw the sign; component mode needs the newly drawn component."""
        if self.sign_mode == "independent":
            self.sign = self._draw()
        else:
            if component is None:
                raise ValueError("component sign mode needs the prior component index")
            self.sign = self._sign_of(component)

    def signs_for(self, stream: ObservationStream) -> np.ndarray:
        """Per-round signs for a whole stream (consumes this env's rng)."""
        if self.sign_mode == "component":
            table = np.array(self.component_signs)
            signs = table[stream.component % len(table)]
            self.sign = float(signs[-1])
            return signs
        obs = stream.observed
        n_obs = int(obs.sum())
        draws = np.empty(n_obs + 1)
        draws[0] = self.sign
        for j in range(1, n_obs + 1):
            draws[j] = self._draw()
        self.sign = draws[-1]
        # Rounds after the j-th observation use draw j.
        seg = np.concatenate([[0], np.cumsum(obs[:-1])])
        return draws[seg]


def absolute_loss(w, x, y) -> tuple[float, np.ndarray]:
    """``|w^T x - y|`` with sub-gradient ``sign(w^T x - y) x`` (sign(0) = 0)."""
    r = float(np.dot(w, x)) - y
    return abs(r), np.sign(r) * x


def logistic_loss(w, x, y) -> tuple[float, np.ndarray]:
    """Cross-entropy of ``h = 1 / (1 + exp(-w^T x))`` against ``y`` in {0, 1}."""
    z = float(np.dot(w, x))
    loss = float(np.logaddexp(0.0, z)) - y * z
    h = 0.5 * (1.0 + math.tanh(0.5 * z))
    return loss, (h - y) * x


LOSSES = {"absolute": absolute_loss, "logistic": logistic_loss}


class DatasetExhausted(Exception):
    pass


class DatasetEnv:
    """Serves ``(x_t, y_t)`` rows in a given arrival order.

    ``X`` already carries the appended bias column.
    """

    def __init__(self, X: np.ndarray, y: np.ndarray, loss: str, order: np.ndarray):
        if loss not in LOSSES:
            raise ValueError(f"loss must be one of {sorted(LOSSES)}, got {loss!r}")
        self.X = X
        self.y = y
        self.loss_kind = loss
        self._loss = LOSSES[loss]
        self.order = np.asarray(order, dtype=np.int64)
        self.t = 0

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    def next_round(self, w) -> tuple[float, np.ndarray]:
        if self.t >= self.order.shape[0]:
            raise DatasetExhausted(f"no sample left after {self.t} rounds")
        i = self.order[self.t]
        self.t += 1
        return self._loss(w, self.X[i], self.y[i])


def randomized_order(n: int, T: int, rng: np.random.Generator) -> np.ndarray:
    """A random permutation truncated to ``min(T, n)`` rounds."""
    return rng.permutation(n)[: min(T, n)]


def semi_adversarial_order(
    stream: ObservationStream, queues: list[np.ndarray], rng: np.random.Generator
) -> np.ndarray:
    """Serve each round from the queue of the prior component in force.

    Component ``c`` reads from ``queues[c]``; an exhausted queue is
    reshuffled and reused.
    """
    n_comp = int(stream.component.max()) + 1
    if n_comp > len(queues):
        raise ValueError(f"stream uses {n_comp} prior components but only {len(queues)} partitions exist")
    for q in queues:
        if len(q) == 0:
            raise ValueError("empty partition: semi-adversarial arrival is impossible")
    pos = [0] * len(queues)
    cur = [np.asarray(q, dtype=np.int64) for q in queues]
    out = np.empty(stream.T, dtype=np.int64)
    for t, c in enumerate(stream.component):
        if pos[c] >= cur[c].shape[0]:
            cur[c] = rng.permutation(cur[c])
            pos[c] = 0
        out[t] = cur[c][pos[c]]
        pos[c] += 1
    return out


class NoiseModel:
    """Zero-mean additive noise with ``E||gamma||^2 = sigma^2``.

    ``gaussian`` draws ``N(0, sigma^2 / N)`` per coordinate; ``rademacher``
    uses independent signs of magnitude ``sigma / sqrt(N)`` so the squared
    norm is exactly ``sigma^2``.
    """

    KINDS = ("gaussian", "rademacher")

    def __init__(self, sigma: float, kind: str = "gaussian"):
        if kind not in self.KINDS:
            raise ValueError(f"noise kind must be one of {self.KINDS}, got {kind!r}")
        if not sigma >= 0:
            raise ValueError(f"noise sigma must be >= 0, got {sigma}")
        self.sigma = float(sigma)
        self.kind = kind

    def sample(self, dim: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
        shape = (dim,) if size is None else (size, dim)
        s = self.sigma / math.sqrt(dim)
        if self.kind == "gaussian":
            return rng.normal(0.0, s, size=shape)
        return s * rng.choice(np.array([-1.0, 1.0]), size=shape)


def gap_lower_bound(gaps, L, D: float) -> float:
    """Adversarial lower-bound reference ``D / (2 sqrt 2) * sqrt(sum L_k^2 gap_k^2)``."""
    gaps = np.asarray(gaps, dtype=np.float64)
    L = np.asarray(L, dtype=np.float64)
    if gaps.shape != L.shape:
        raise ValueError(f"length mismatch: {gaps.shape} gaps vs {L.shape} bounds")
    return D / (2.0 * math.sqrt(2.0)) * math.sqrt(float(np.sum((L * gaps) ** 2)))
