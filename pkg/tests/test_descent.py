import math

import numpy as np
import pytest

from faultoco.descent import OptimizerState, adaptive_bound, step, schedule_bound
from faultoco.geometry import Ball, Box
from faultoco.metrics import regret_linear


def test_unit_step_size():
    K = Box([0.0, 0.0], [1.0, 1.0])  # diameter sqrt(2)
    s = OptimizerState(K)
    s.step([1.0, 0.0])
    assert s.eta() == pytest.approx(1.0, abs=1e-15)


def test_norm_accumulation():
    s = OptimizerState(Ball.origin(2, 100.0))
    s.step([3.0, 0.0])
    s.step([0.0, 4.0])
    assert s.G == pytest.approx(5.0, abs=1e-15)


def test_zero_substitute_leaves_state_unchanged():
    s = OptimizerState(Ball.origin(3))
    s.step([1.0, 0.0, 0.0])
    w, G = s.w.copy(), s.G_sq
    s.step(np.zeros(3))
    np.testing.assert_array_equal(s.w, w)
    assert s.G_sq == G


def test_initial_decision_held_until_first_nonzero():
    s = OptimizerState(Box([0.0, 2.0], [2.0, 4.0]))
    np.testing.assert_array_equal(s.w, [1.0, 3.0])
    assert s.eta() is None
    s.step([0.0, 0.0])
    np.testing.assert_array_equal(s.w, [1.0, 3.0])


def test_functional_step_does_not_mutate():
    s = OptimizerState(Ball.origin(2))
    new = step(s, [1.0, 0.0])
    np.testing.assert_array_equal(s.w, [0.0, 0.0])
    assert new.w[0] < 0


def test_non_finite_substitute_raises():
    s = OptimizerState(Ball.origin(2))
    with pytest.raises(FloatingPointError):
        s.step([np.inf, 0.0])
    with pytest.raises(ValueError):
        s.step([1.0, 0.0, 0.0])


def test_fixed_eta_single_update():
    s = OptimizerState(Ball.origin(2))
    s.step_with_fixed_eta([1.0, 0.0], 0.5)
    np.testing.assert_array_equal(s.w, [-0.5, 0.0])


def test_fixed_eta_two_updates_clip_to_boundary():
    # (0,0) - 1*(1,0) = (-1,0) on the sphere; (-1,0) - 0.5*(1,0) = (-1.5,0) -> (-1,0).
    s = OptimizerState(Ball.origin(2))
    s.step_with_fixed_eta([1.0, 0.0], 1.0)
    np.testing.assert_array_equal(s.w, [-1.0, 0.0])
    s.step_with_fixed_eta([1.0, 0.0], 0.5)
    np.testing.assert_allclose(s.w, [-1.0, 0.0], atol=1e-15)


def test_fixed_eta_validation():
    s = OptimizerState(Ball.origin(2))
    s.step_with_fixed_eta([0.0, 0.0], 0.3)
    np.testing.assert_array_equal(s.w, [0.0, 0.0])
    with pytest.raises(ValueError):
        s.step_with_fixed_eta([1.0, 0.0], 0.0)
    with pytest.raises(ValueError):
        s.step_with_fixed_eta([1.0, 0.0], 0.5)


def _linear_run(G, radius, etas=None):
    s = OptimizerState(Ball.origin(G.shape[1], radius))
    ws = np.empty_like(G)
    for t, g in enumerate(G):
        ws[t] = s.w
        if etas is None:
            s.step(g)
        else:
            s.step_with_fixed_eta(g, etas[t])
    return ws


def test_bounds_hold_on_random_linear_sequences():
    rng = np.random.default_rng(3)
    for _ in range(100):
        dim, T = int(rng.integers(1, 9)), int(rng.integers(1, 300))
        r = float(rng.uniform(0.1, 5))
        G = rng.normal(size=(T, dim)) * rng.uniform(0.1, 3)
        sq = np.einsum("ij,ij->i", G, G)
        R = regret_linear(_linear_run(G, r), G, r)
        assert 0 <= R + 1e-12
        assert R <= adaptive_bound(sq, 2 * r)
        etas = rng.uniform(0.1, 2) / np.sqrt(np.arange(1, T + 1))
        R2 = regret_linear(_linear_run(G, r, etas), G, r)
        assert R2 <= schedule_bound(etas, sq, 2 * r)


def test_scale_covariance_of_step():
    # Scaling D and the gradients by c leaves eta unchanged in the product sense
    # (eta scales by 1/c * c) and scales displacements by c.
    g = np.array([0.3, -0.2, 0.1])
    for c in (0.5, 3.0):
        a = OptimizerState(Ball.origin(3, 1e6))
        b = OptimizerState(Ball.origin(3, c * 1e6))
        a.step(g)
        b.step(c * g)
        assert b.eta() == pytest.approx(a.eta(), rel=1e-12)
        np.testing.assert_allclose(b.w, c * a.w, rtol=1e-12)
