"""Regret and loss accounting, traces and cross-trial summaries."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

TRACE_COLUMNS = (
    "round", "variant", "trial", "cum_loss", "avg_loss", "regret",
    "lemma4_ref", "observed", "gap", "p_used",
)


def linear_comparator(S, radius: float, center=None) -> np.ndarray:
    """Minimizer of ``S^T w`` over a ball: ``center - radius * S / ||S||``."""
    S = np.asarray(S, dtype=np.float64)
    c = np.zeros_like(S) if center is None else np.asarray(center, dtype=np.float64)
    n = float(np.linalg.norm(S))
    if n == 0.0:
        return c.copy()
    return c - (radius / n) * S


def regret_linear(ws, gradients, radius: float, center=None) -> float:
    """Regret of decisions ``ws`` on linear losses ``g_t^T w`` over a ball."""
    ws = np.asarray(ws, dtype=np.float64)
    G = np.asarray(gradients, dtype=np.float64)
    w_star = linear_comparator(G.sum(axis=0), radius, center)
    return float(np.sum(G * (ws - w_star)))


def regret_linear_path(ws, gradients, radius: float, center=None) -> np.ndarray:
    """Regret after every round, each against its own prefix-optimal comparator."""
    ws = np.asarray(ws, dtype=np.float64)
    G = np.asarray(gradients, dtype=np.float64)
    learner = np.cumsum(np.einsum("ij,ij->i", G, ws))
    S = np.cumsum(G, axis=0)
    best = -radius * np.linalg.norm(S, axis=1)
    if center is not None:
        best = best + S @ np.asarray(center, dtype=np.float64)
    return learner - best


def regret_estimate_hat(observed_norms, probs, D: float) -> float:
    """``sqrt(2) D sqrt(sum ||g_k||^2 / p_k^2)`` over observations."""
    n = np.asarray(observed_norms, dtype=np.float64)
    p = np.asarray(probs, dtype=np.float64)
    if n.shape != p.shape:
        raise ValueError("observed norms and probabilities must align")
    return math.sqrt(2.0) * D * math.sqrt(float(np.sum((n / p) ** 2)))


@dataclass
class RunTrace:
    """Per-round record of one (variant, trial) run.

    ``regret`` and ``lower_ref`` are only filled for synthetic linear runs.
    ``gap`` and ``p_used`` are meaningful on observed rounds only.
    """

    variant: str
    trial: int
    loss: np.ndarray
    observed: np.ndarray
    gap: np.ndarray
    p_used: np.ndarray
    regret: np.ndarray | None = None
    lower_ref: np.ndarray | None = None
    extra: dict = field(default_factory=dict)

    @property
    def T(self) -> int:
        return self.loss.shape[0]

    @property
    def cum_loss(self) -> np.ndarray:
        return np.cumsum(self.loss)

    @property
    def avg_loss(self) -> np.ndarray:
        return self.cum_loss / np.arange(1, self.T + 1)

    def final(self) -> float:
        """Final time-averaged regret when available, else time-averaged loss."""
        if self.regret is not None:
            return float(self.regret[-1] / self.T)
        return float(self.avg_loss[-1])

    def rows(self, stride: int = 1):
        cum = self.cum_loss
        avg = self.avg_loss
        T = self.T
        for i in range(T):
            if stride > 1 and (i + 1) % stride and i + 1 != T:
                continue
            obs = bool(self.observed[i])
            yield (
                i + 1, self.variant, self.trial, _fmt(cum[i]), _fmt(avg[i]),
                "" if self.regret is None else _fmt(self.regret[i]),
                "" if self.lower_ref is None else _fmt(self.lower_ref[i]),
                int(obs), int(self.gap[i]) if obs else "",
                _fmt(self.p_used[i]) if obs else "",
            )


def _fmt(x: float) -> str:
    return repr(float(x))


@dataclass(frozen=True)
class VariantSummary:
    mean: float
    sd: float
    trials: int
    rounds: int


@dataclass(frozen=True)
class TrialSummary:
    variants: dict

    def to_json(self) -> dict:
        return {
            name: {"mean": s.mean, "sd": s.sd, "trials": s.trials, "rounds": s.rounds}
            for name, s in self.variants.items()
        }


def mean_sd(values) -> tuple[float, float]:
    """Mean and unbiased (n - 1) standard deviation."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        raise ValueError(f"need at least 2 trials for a standard deviation, got {v.size}")
    return float(v.mean()), float(v.std(ddof=1))


def aggregate(traces: dict[str, list[RunTrace]]) -> TrialSummary:
    """Summarize the final value of each variant's traces.

    Traces are ordered by trial index first, so the result does not depend
    on the order in which trials finished.
    """
    out = {}
    for name, runs in traces.items():
        runs = sorted(runs, key=lambda r: r.trial)
        m, s = mean_sd([r.final() for r in runs])
        out[name] = VariantSummary(m, s, len(runs), max(r.T for r in runs))
    return TrialSummary(out)


def write_trace_csv(path, traces, stride: int = 1) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for tr in traces:
            w.writerows(tr.rows(stride))


def write_summary_json(path, summary: TrialSummary) -> None:
    with open(path, "w") as fh:
        json.dump(summary.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
