"""Run a configured experiment: variants x trials, traces and a summary."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path

import numpy as np

from . import datasets
from .config import DatasetSpec, ExperimentConfig
from .harness import TrialResult, run_dataset_trial, run_linear_trial
from .metrics import aggregate, write_summary_json, write_trace_csv

log = logging.getLogger(__name__)

BOUND_SLACK = 1e-9


@dataclass
class PreparedData:
    X: np.ndarray
    y: np.ndarray
    queues: list[np.ndarray] | None
    radius: float
    dataset: datasets.TabularDataset


def prepare_dataset(spec: DatasetSpec) -> PreparedData:
    """Load, normalize, replicate/truncate, partition on raw targets, then shift."""
    ds = datasets.load_csv(spec.csv, spec.target, spec.features)
    ds = datasets.normalize(ds)
    ds = datasets.take(ds, spec.take, spec.copies)
    queues = None
    if spec.partition_threshold is not None:
        rule = datasets.threshold_rule(spec.partition_threshold, spec.partition_first)
        queues = list(datasets.partition(ds, rule))
    if spec.target_shift:
        ds = datasets.shift_targets(ds, spec.target_shift)
    radius = datasets.radius_for_ls(ds) if spec.radius == "auto" else float(spec.radius)
    log.info("dataset ready: %d rows, %d features, radius %g", ds.n_rows, ds.feature_count, radius)
    return PreparedData(ds.design(), ds.targets, queues, radius, ds)


def arrival_for(mode: str, trial: int) -> str:
    if mode == "alternate":
        return "randomized" if trial % 2 == 1 else "semi_adversarial"
    return mode


def run_trial(cfg: ExperimentConfig, trial: int, data: PreparedData | None = None) -> TrialResult:
    env = cfg.environment
    if cfg.experiment == "synthetic":
        return run_linear_trial(
            cfg.variants, cfg.prior, cfg.rounds, dim=env.dim, scale=env.scale, radius=env.radius,
            seed=cfg.seed, trial=trial, disclosure=cfg.disclosure, noise=cfg.noise,
            exclude_current=cfg.exclude_current, sign_mode=env.sign_mode,
        )
    return run_dataset_trial(
        cfg.variants, cfg.prior, data.X, data.y, env.loss, data.radius, T=cfg.rounds,
        seed=cfg.seed, trial=trial, arrival=arrival_for(env.arrival, trial), queues=data.queues,
        disclosure=cfg.disclosure, noise=cfg.noise, exclude_current=cfg.exclude_current,
    )


@dataclass
class ExperimentResult:
    trials: list[TrialResult]
    summary: object
    violations: list[str]


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    data = None if cfg.experiment == "synthetic" else prepare_dataset(cfg.environment)
    trials = range(1, cfg.trials + 1)
    worker = partial(run_trial, cfg, data=data)
    if cfg.jobs > 1 and cfg.trials > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(worker, trials))
    else:
        results = [worker(t) for t in trials]
    results.sort(key=lambda r: r.trial)

    groups: dict[str, list] = {}
    violations = []
    for res in results:
        suffix = f"/{res.arrival}" if cfg.experiment != "synthetic" and cfg.environment.arrival == "alternate" else ""
        for name, tr in res.traces.items():
            groups.setdefault(name + suffix, []).append(tr)
            if cfg.check_substitute_bound and "substitute_bound" in tr.extra:
                if tr.extra["substitute_regret"] > tr.extra["substitute_bound"] + BOUND_SLACK:
                    violations.append(
                        f"trial {res.trial} {name}: substitute regret {tr.extra['substitute_regret']:.6g}"
                        f" exceeds bound {tr.extra['substitute_bound']:.6g}"
                    )
    summary = aggregate(groups) if cfg.trials >= 2 else None
    return ExperimentResult(results, summary, violations)


def write_outputs(cfg: ExperimentConfig, result: ExperimentResult) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    traces = [tr for res in result.trials for tr in res.traces.values()]
    write_trace_csv(out / "trace.csv", traces, stride=cfg.trace_stride)
    if result.summary is not None:
        write_summary_json(out / "summary.json", result.summary)
    return out
