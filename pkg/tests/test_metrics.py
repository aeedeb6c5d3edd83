import json
import math

import numpy as np
import pytest

from faultoco.metrics import (
    TRACE_COLUMNS,
    RunTrace,
    aggregate,
    linear_comparator,
    mean_sd,
    regret_estimate_hat,
    regret_linear,
    regret_linear_path,
    write_summary_json,
    write_trace_csv,
)
from faultoco.harness import run_linear_trial
from faultoco.priors import MixturePrior
from oracles import best_on_ball_bruteforce, naive_mean_sd


def _trace(final_avg, trial=1, T=4):
    loss = np.full(T, final_avg)
    return RunTrace("x", trial, loss, np.ones(T, bool), np.ones(T, int), np.ones(T))


def test_regret_examples():
    assert regret_linear([[0.0, 0.0]], [[1.0, 0.0]], 1.0) == 1.0
    assert regret_linear(np.ones((3, 2)), np.zeros((3, 2)), 1.0) == 0.0
    G = np.array([[1.0, 2.0], [0.5, -1.0]])
    w_star = linear_comparator(G.sum(axis=0), 1.0)
    assert regret_linear(np.tile(w_star, (2, 1)), G, 1.0) == pytest.approx(0.0, abs=1e-15)


def test_comparator_beats_sampled_boundary_points():
    rng = np.random.default_rng(0)
    for _ in range(10):
        S = rng.normal(size=3)
        best = float(S @ linear_comparator(S, 2.0))
        assert best <= best_on_ball_bruteforce(S, 2.0, rng) + 1e-12
        assert best == pytest.approx(-2.0 * np.linalg.norm(S))


def test_regret_path_final_matches_total():
    rng = np.random.default_rng(1)
    G, W = rng.normal(size=(30, 4)), rng.normal(size=(30, 4)) * 0.1
    path = regret_linear_path(W, G, 1.5)
    assert path[-1] == pytest.approx(regret_linear(W, G, 1.5), rel=1e-12)
    assert regret_linear_path(W[:7], G[:7], 1.5)[-1] == pytest.approx(path[6])


def test_regret_estimate_hat():
    assert regret_estimate_hat([1.0], [1.0], 1.0) == pytest.approx(math.sqrt(2))
    assert regret_estimate_hat([1.0], [0.5], 1.0) == pytest.approx(2 * math.sqrt(2))
    assert regret_estimate_hat([], [], 1.0) == 0.0


def test_aggregate_examples():
    s = aggregate({"a": [_trace(1.0, 1), _trace(3.0, 2)], "b": [_trace(2.0, 1), _trace(2.0, 2)]})
    assert s.variants["a"].mean == 2.0 and s.variants["a"].sd == pytest.approx(math.sqrt(2))
    assert s.variants["b"].sd == 0.0 and s.variants["b"].trials == 2
    with pytest.raises(ValueError):
        mean_sd([1.0])


def test_aggregate_matches_naive_on_seeded_runs():
    prior = MixturePrior.uniform_betas([(4, 13), (13, 4)])
    traces = [run_linear_trial(["GML"], prior, 300, seed=5, trial=i).traces["GML"] for i in range(1, 51)]
    s = aggregate({"GML": traces[::-1]})
    m, sd = naive_mean_sd([t.final() for t in traces])
    assert abs(s.variants["GML"].mean - m) <= 1e-12
    assert abs(s.variants["GML"].sd - sd) <= 1e-12


def test_trace_invariants():
    tr = _trace(0.5, T=6)
    assert np.all(np.diff(tr.cum_loss) >= 0)
    np.testing.assert_array_equal(tr.avg_loss, tr.cum_loss / np.arange(1, 7))


def test_output_files(tmp_path):
    tr = _trace(0.25, T=5)
    write_trace_csv(tmp_path / "t.csv", [tr], stride=2)
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == ",".join(TRACE_COLUMNS)
    assert [l.split(",")[0] for l in lines[1:]] == ["2", "4", "5"]
    write_summary_json(tmp_path / "s.json", aggregate({"x": [tr, _trace(0.75, 2, T=5)]}))
    data = json.loads((tmp_path / "s.json").read_text())
    assert data == {"x": {"mean": 0.5, "sd": pytest.approx(math.sqrt(0.125)), "trials": 2, "rounds": 5}}


def test_noisy_full_observation_second_moment():
    from faultoco.environments import NoiseModel

    R, G = [], []
    for trial in range(1, 201):
        tr = run_linear_trial(["Ignore"], MixturePrior.mass(1.0), 300, dim=4, seed=31, trial=trial,
                              noise=NoiseModel(0.7)).traces["Ignore"]
        R.append(tr.regret[-1])
        G.append(tr.extra["G_sq"])
        D = tr.extra["D"]
    diff = np.array(R) ** 2 - 6 * D**2 * np.array(G)
    assert diff.mean() <= 4 * diff.std(ddof=1) / math.sqrt(diff.size)
