"""Trial runners shared by the CLI, the notebooks and the acceptance tests.

Within a trial every variant is replayed over one realization of the
observation stream, the adversary's signs, the noise and the data arrival
order (common random numbers), so differences between variants come from
the estimators alone.  Each trial's randomness is derived from
``(seed, trial)`` only, which makes trials order-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import estimators as est
from .descent import SQRT2, OptimizerState
from .environments import (
    DatasetEnv,
    LinearAdversary,
    NoiseModel,
    ObservationProcess,
    ObservationStream,
    randomized_order,
    semi_adversarial_order,
)
from .geometry import Ball
from .metrics import RunTrace, linear_comparator


def trial_rngs(seed: int, trial: int, n: int = 3) -> list[np.random.Generator]:
    """Independent generators for (observations, environment, noise)."""
    children = np.random.SeedSequence([int(seed), int(trial)]).spawn(n)
    return [np.random.default_rng(c) for c in children]


@dataclass
class TrialResult:
    trial: int
    stream: ObservationStream
    traces: dict[str, RunTrace]
    order: np.ndarray | None = None
    arrival: str | None = None
    info: dict = field(default_factory=dict)


def _estimator(name, dim, prior, exclude_current):
    return est.make_estimator(name, dim, prior=prior, exclude_current=exclude_current)


def run_linear_trial(
    variants,
    prior,
    T: int,
    dim: int = 16,
    scale: float = 0.25,
    radius: float = 1.0,
    seed: int = 0,
    trial: int = 1,
    disclosure: str = "known",
    noise: NoiseModel | None = None,
    exclude_current: bool = False,
    sign_mode: str = "independent",
) -> TrialResult:
    """Linear adversary on an origin ball, one trace per variant.

    Losses are ``g_t^T w_t``, so the decision only matters through
    ``sum(w_t)``; between observations nothing moves and the per-round
    bookkeeping is vectorized.  Besides the regret path, each trace's
    ``extra`` holds the substitute-sequence regret and its deterministic
    bound ``sqrt(2) D sqrt(sum ||g~||^2)``.
    """
    rng_obs, rng_env, rng_noise = trial_rngs(seed, trial)
    stream = ObservationProcess(prior, rng_obs, disclosure).stream(T)
    signs = LinearAdversary(dim, scale, rng_env, sign_mode).signs_for(stream)
    obs_rounds = stream.observation_rounds
    gaps = stream.gaps
    K = obs_rounds.shape[0]
    noise_draws = noise.sample(dim, rng_noise, size=K) if noise is not None and K else None

    feasible = Ball.origin(dim, radius)
    D = feasible.diameter()
    ones = np.ones(dim)
    g_norm = scale * math.sqrt(dim)
    S_abs = scale * math.sqrt(dim) * np.abs(np.cumsum(signs))
    gap_col = np.zeros(T, dtype=np.int64)
    gap_col[obs_rounds - 1] = gaps
    lower_ref = np.zeros(T)
    lower_ref[obs_rounds - 1] = (g_norm * gaps) ** 2
    lower_ref = D / (2.0 * SQRT2) * np.sqrt(np.cumsum(lower_ref))
    disclose = disclosure == "known"

    traces = {}
    for name in variants:
        name = est.canonical_variant(name)
        e = _estimator(name, dim, prior, exclude_current)
        state = OptimizerState(feasible)
        wsum = np.empty(T)
        p_used = np.full(T, np.nan)
        sub_lin = 0.0
        sub_S = np.zeros(dim)
        start = 0
        for k in range(K):
            t = int(obs_rounds[k])
            wsum[start:t] = state.w.sum()
            g = (signs[t - 1] * scale) * ones
            if noise_draws is not None:
                g = g + noise_draws[k]
            ev = est.ObservationEvent(t, g, float(stream.p[t - 1]) if disclose else None)
            gt = e.estimate(ev)
            p_used[t - 1] = e.last_p
            sub_lin += float(np.dot(gt, state.w))
            sub_S += gt
            state.step(gt)
            start = t
        wsum[start:] = state.w.sum()
        loss = signs * scale * wsum
        regret = np.cumsum(loss) + radius * S_abs
        sub_best = float(np.dot(sub_S, linear_comparator(sub_S, radius)))
        traces[name] = RunTrace(
            name, trial, loss, stream.observed.copy(), gap_col, p_used,
            regret=regret, lower_ref=lower_ref,
            extra={
                "substitute_regret": sub_lin - sub_best,
                "substitute_bound": SQRT2 * D * math.sqrt(state.G_sq),
                "G_sq": state.G_sq,
                "D": D,
            },
        )
    return TrialResult(trial, stream, traces, info={"signs": signs})


def run_dataset_trial(
    variants,
    prior,
    X: np.ndarray,
    y: np.ndarray,
    loss: str,
    radius: float,
    T: int | None = None,
    seed: int = 0,
    trial: int = 1,
    arrival: str = "randomized",
    queues: list[np.ndarray] | None = None,
    disclosure: str = "known",
    noise: NoiseModel | None = None,
    exclude_current: bool = False,
) -> TrialResult:
    """Online regression/classification over a fixed design ``X`` (bias included).

    ``arrival`` is ``randomized`` (one shuffled pass, at most ``len(X)``
    rounds) or ``semi_adversarial`` (rows drawn from ``queues[c]`` while
    prior component ``c`` generates the observation probability).
    """
    n, dim = X.shape
    T = n if T is None else T
    rng_obs, rng_env, rng_noise = trial_rngs(seed, trial)
    if arrival == "randomized":
        T = min(T, n)
        stream = ObservationProcess(prior, rng_obs, disclosure).stream(T)
        order = randomized_order(n, T, rng_env)
    elif arrival == "semi_adversarial":
        if queues is None:
            raise ValueError("semi-adversarial arrival needs partition queues")
        stream = ObservationProcess(prior, rng_obs, disclosure).stream(T)
        shuffled = [rng_env.permutation(q) for q in queues]
        order = semi_adversarial_order(stream, shuffled, rng_env)
    else:
        raise ValueError(f"unknown arrival mode {arrival!r}")
    if T < 1:
        raise ValueError("empty sample stream")

    obs = stream.observed
    K = int(obs.sum())
    noise_draws = noise.sample(dim, rng_noise, size=K) if noise is not None and K else None
    gap_col = np.zeros(T, dtype=np.int64)
    gap_col[stream.observation_rounds - 1] = stream.gaps
    disclose = disclosure == "known"
    feasible = Ball.origin(dim, radius)

    traces = {}
    for name in variants:
        name = est.canonical_variant(name)
        e = _estimator(name, dim, prior, exclude_current)
        state = OptimizerState(feasible)
        env = DatasetEnv(X, y, loss, order)
        losses = np.empty(T)
        p_used = np.full(T, np.nan)
        k = 0
        for i in range(T):
            f, g = env.next_round(state.w)
            losses[i] = f
            if obs[i]:
                if noise_draws is not None:
                    g = g + noise_draws[k]
                k += 1
                ev = est.ObservationEvent(i + 1, g, float(stream.p[i]) if disclose else None)
                gt = e.estimate(ev)
                p_used[i] = e.last_p
                state.step(gt)
        traces[name] = RunTrace(name, trial, losses, obs.copy(), gap_col, p_used)
    return TrialResult(trial, stream, traces, order=order, arrival=arrival)
