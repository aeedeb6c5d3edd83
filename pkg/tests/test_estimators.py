import math

import numpy as np
import pytest

from faultoco import BIMODAL_PRIOR
from faultoco.descent import OptimizerState
from faultoco.estimators import (
    GML,
    VARIANTS,
    EmpiricalEP,
    Ignore,
    ObservationEvent,
    Uniform,
    WithKnown,
    WithPrior,
    canonical_variant,
    estimate,
    make_estimator,
    noisy_passthrough,
)
from faultoco.geometry import Ball
from faultoco.priors import MixturePrior, posterior_p_at_gap


def _after_gap(est, gap, g):
    """Feed `gap - 1` missed rounds then an observation of g."""
    for t in range(1, gap):
        assert np.all(est.estimate(ObservationEvent.missed(t)) == 0)
    return est.estimate(ObservationEvent(gap, np.asarray(g, dtype=float), 0.5))


def test_with_known_scales_by_disclosed_probability():
    out = WithKnown(2).estimate(ObservationEvent(1, np.array([1.0, -1.0]), 0.5))
    np.testing.assert_array_equal(out, [2.0, -2.0])


def test_gap_based_scalings():
    g = np.array([0.5, -1.0, 2.0])
    np.testing.assert_array_equal(_after_gap(GML(3), 3, g), 3 * g)
    np.testing.assert_array_equal(_after_gap(Uniform(3), 3, g), 4 * g)
    np.testing.assert_array_equal(_after_gap(Ignore(3), 3, g), g)


@pytest.mark.parametrize("name", VARIANTS)
def test_missed_round_gives_zero(name):
    e = make_estimator(name, 4, prior=BIMODAL_PRIOR)
    np.testing.assert_array_equal(estimate(e, ObservationEvent.missed(1)), np.zeros(4))
    assert e.last_obs_round == 0


def test_with_prior_uses_posterior_at_gap():
    e = WithPrior(2, BIMODAL_PRIOR)
    g = np.array([1.0, 0.0])
    out = _after_gap(e, 6, g)
    assert out[0] == pytest.approx(1 / posterior_p_at_gap(BIMODAL_PRIOR, 6), rel=1e-14)
    # Next gap restarts from the prior.
    e.estimate(ObservationEvent(7, g))
    assert e.last_p == pytest.approx(posterior_p_at_gap(BIMODAL_PRIOR, 1), rel=1e-14)


def test_with_prior_schedule():
    sched = lambda k: MixturePrior.beta(1, 1) if k % 2 else MixturePrior.mass(0.3)
    e = WithPrior(1, sched)
    e.estimate(ObservationEvent(3, np.ones(1)))
    assert e.last_p == pytest.approx(1 / 4)
    e.estimate(ObservationEvent(9, np.ones(1)))
    assert e.last_p == pytest.approx(0.3)


def test_empirical_variant_tracks_histogram():
    e = EmpiricalEP(1)
    for t in (2, 3, 5):
        e.estimate(ObservationEvent(t, np.ones(1)))
    # Gaps 2, 1, 2: at the last one #{=2}/#{>=2} = 2/2.
    assert e.last_p == 1.0
    assert e.hist.items() == [(1, 1), (2, 2)]


def test_observation_order_enforced():
    e = GML(1)
    e.estimate(ObservationEvent(4, np.ones(1)))
    with pytest.raises(ValueError):
        e.estimate(ObservationEvent(4, np.ones(1)))
    with pytest.raises(ValueError):
        WithKnown(1).estimate(ObservationEvent(1, np.ones(1)))


def test_variant_names():
    assert canonical_variant("w/known") == "WithKnown"
    assert canonical_variant("apgd.ep") == "APGD.EP"
    with pytest.raises(ValueError):
        canonical_variant("bogus")
    with pytest.raises(ValueError):
        make_estimator("WithPrior", 2)


def test_noisy_passthrough():
    np.testing.assert_array_equal(noisy_passthrough([1, 0], [0, 0]), [1, 0])
    np.testing.assert_array_equal(noisy_passthrough([1, 0], [-1, 2]), [0, 2])
    rng = np.random.default_rng(4)
    n = 100_000
    g = np.array([0.7, -0.2])
    out = noisy_passthrough(g, rng.normal(0, 1.3, size=(n, 2)))
    se = out.std(axis=0, ddof=1) / math.sqrt(n)
    assert np.all(np.abs(out.mean(axis=0) - g) <= 4 * se)


def _known_p_draws(g, p, n, rng):
    seen = rng.random(n) < p
    return np.where(seen[:, None], g[None, :] / p, 0.0)


def test_with_known_unbiased():
    rng = np.random.default_rng(9)
    g = np.array([1.0, -0.5, 0.25])
    n = 100_000
    d = _known_p_draws(g, 0.3, n, rng)
    se = d.std(axis=0, ddof=1) / math.sqrt(n)
    assert np.all(np.abs(d.mean(axis=0) - g) <= 4 * se)


def test_second_moment_two_point_enumeration():
    # Observed w.p. 0.25 with ||g~||^2 = 16, otherwise 0.
    p, g2 = 0.25, 1.0
    assert p * g2 / p**2 == 4.0
    assert p * (1 / p - 1) ** 2 * g2 + (1 - p) * g2 == 3.0


def test_known_p_trajectory_matches_raw_feed():
    # A constant 1/p factor cancels in the adaptive step.
    rng = np.random.default_rng(1)
    K = Ball.origin(5, 2.0)
    a, b = OptimizerState(K), OptimizerState(K)
    est = WithKnown(5)
    for t in range(1, 400):
        g = rng.normal(size=5)
        est_g = est.estimate(ObservationEvent(t, g, 0.37))
        a.step(est_g)
        b.step(g)
        np.testing.assert_allclose(a.w, b.w, rtol=0, atol=1e-9)


def test_gml_is_likelihood_maximizer():
    grid = np.linspace(1e-4, 1, 20001)
    for d in range(1, 51):
        lik = grid * (1 - grid) ** (d - 1)
        assert abs(grid[np.argmax(lik)] - 1 / d) <= 1e-4
        # Stationary point of the log-likelihood: 1/p - (d-1)/(1-p) = 0 at p = 1/d.
        if d > 1:
            p = 1 / d
            assert 1 / p - (d - 1) / (1 - p) == pytest.approx(0, abs=1e-9)
        assert GML(1).probability(None, d) == 1 / d
