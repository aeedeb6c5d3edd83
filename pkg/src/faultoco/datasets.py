"""Headerless numeric CSV ingestion and preprocessing for the dataset runs."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TabularDataset:
    """Feature matrix (no bias column yet) and targets.

    ``mean`` / ``rms`` hold the normalization statistics once `normalize`
    has run; ``constant`` flags features that were constant and mapped to 0.
    """

    features: np.ndarray
    targets: np.ndarray
    mean: np.ndarray | None = None
    rms: np.ndarray | None = None
    constant: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def feature_count(self) -> int:
        return self.features.shape[1]

    def design(self) -> np.ndarray:
        """Features with a trailing bias column of ones."""
        return np.hstack([self.features, np.ones((self.n_rows, 1))])


def load_csv(
    path,
    target: int,
    features: Sequence[int] | None = None,
    delimiter: str = ",",
) -> TabularDataset:
    """Parse a headerless numeric CSV.

    `target` and `features` are 0-based column indices; by default every
    non-target column is a feature.  Malformed cells raise ValueError naming
    the 1-based row and 0-based column.
    """
    path = Path(path)
    rows: list[list[float]] = []
    width = None
    with path.open(newline="") as fh:
        for r, rec in enumerate(csv.reader(fh, delimiter=delimiter), start=1):
            if not rec or all(not c.strip() for c in rec):
                continue
            if width is None:
                width = len(rec)
            elif len(rec) != width:
                raise ValueError(f"{path}: row {r} has {len(rec)} columns, expected {width}")
            vals = []
            for c, cell in enumerate(rec):
                try:
                    v = float(cell)
                except ValueError:
                    raise ValueError(f"{path}: row {r}, column {c}: cannot parse {cell!r} as a number") from None
                if not math.isfinite(v):
                    raise ValueError(f"{path}: row {r}, column {c}: non-finite value {cell!r}")
                vals.append(v)
            rows.append(vals)
    if not rows:
        raise ValueError(f"{path}: empty file")
    data = np.array(rows)
    if not -width <= target < width:
        raise ValueError(f"{path}: target column {target} out of range for {width} columns")
    target %= width
    if features is None:
        features = [c for c in range(width) if c != target]
    else:
        features = list(features)
        bad = [c for c in features if not 0 <= c < width or c == target]
        if bad:
            raise ValueError(f"{path}: invalid feature columns {bad}")
    log.info("loaded %s: %d rows, %d features", path, data.shape[0], len(features))
    return TabularDataset(data[:, features], data[:, target], meta={"path": str(path)})


def normalize(ds: TabularDataset) -> TabularDataset:
    """Center each feature and scale it to unit mean square.

    Constant columns become all-zero and are flagged with a warning.
    """
    X = ds.features
    mean = X.mean(axis=0)
    Xc = X - mean
    rms = np.sqrt((Xc * Xc).mean(axis=0))
    constant = rms == 0.0
    if constant.any():
        log.warning("constant feature columns mapped to zero: %s", np.flatnonzero(constant).tolist())
    scale = np.where(constant, 1.0, rms)
    Z = Xc / scale
    Z[:, constant] = 0.0
    return replace(ds, features=Z, mean=mean, rms=rms, constant=constant)


def shift_targets(ds: TabularDataset, delta: float) -> TabularDataset:
    return replace(ds, targets=ds.targets + delta)


def take(ds: TabularDataset, n: int | None, copies: int = 1) -> TabularDataset:
    """Concatenate `copies` copies of the rows, then keep the first `n`."""
    if copies < 1:
        raise ValueError(f"copies must be >= 1, got {copies}")
    X = np.tile(ds.features, (copies, 1))
    y = np.tile(ds.targets, copies)
    if n is not None:
        if n < 1:
            raise ValueError(f"take must be >= 1, got {n}: empty sample stream")
        X, y = X[:n], y[:n]
    return replace(ds, features=X, targets=y)


def least_squares(X: np.ndarray, y: np.ndarray, ridge: float = 1e-8) -> np.ndarray:
    if not np.any(X):
        raise ValueError("design matrix is all zeros")
    A = X.T @ X + ridge * np.eye(X.shape[1])
    return np.linalg.solve(A, X.T @ y)


def power_of_two_radius(norm: float) -> float:
    """Smallest ``2^j >= norm`` with ``j >= 0``."""
    if norm <= 1.0:
        return 1.0
    j = math.ceil(math.log2(norm) - 1e-12)
    return float(2**j)


def radius_for_ls(ds: TabularDataset, ridge: float = 1e-8) -> float:
    """Radius of the smallest origin ball of power-of-two radius holding the LS fit.

    The fit uses the design with the bias column.
    """
    w = least_squares(ds.design(), ds.targets, ridge)
    return power_of_two_radius(float(np.linalg.norm(w)))


def partition(
    ds: TabularDataset,
    rule: Callable[[np.ndarray], np.ndarray] | np.ndarray,
    rng: np.random.Generator | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Split row indices into ``(rule true, rule false)`` queues, each shuffled.

    `rule` is a boolean mask over rows or a predicate on the targets.
    """
    mask = np.asarray(rule(ds.targets) if callable(rule) else rule, dtype=bool)
    if mask.shape != (ds.n_rows,):
        raise ValueError(f"partition mask has shape {mask.shape}, expected ({ds.n_rows},)")
    first = np.flatnonzero(mask)
    second = np.flatnonzero(~mask)
    if first.size == 0 or second.size == 0:
        raise ValueError(f"empty partition (sizes {first.size}, {second.size})")
    if rng is not None:
        first = rng.permutation(first)
        second = rng.permutation(second)
    return first, second


def threshold_rule(threshold: float, first: str = "below") -> Callable[[np.ndarray], np.ndarray]:
    """Predicate ``target < threshold`` (``first="below"``) or ``target >= threshold``."""
    if first == "below":
        return lambda y: y < threshold
    if first == "above":
        return lambda y: y >= threshold
    raise ValueError(f"first must be 'below' or 'above', got {first!r}")


def bundled(name: str) -> Path:
    """Path of a CSV shipped in ``faultoco/data`` (``songs_toy.csv``, ``spam_toy.csv``)."""
    from importlib.resources import files

    return Path(str(files("faultoco") / "data" / name))
