"""Feasible decision sets and Euclidean projection.

Decisions and gradients are plain 1-D float64 numpy arrays.  Two set
families are supported, both with closed-form projections: an
origin-free Euclidean ball and an axis-aligned box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ATOL = 1e-12


def as_vector(w, dim: int | None = None) -> np.ndarray:
    """Return `w` as a finite 1-D float64 array, optionally checking its length."""
    v = np.asarray(w, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


def norm_sq(w) -> float:
    w = np.asarray(w, dtype=np.float64)
    return float(np.dot(w, w))


def inner(w, v) -> float:
    w = np.asarray(w, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if w.shape != v.shape:
        raise ValueError(f"dimension mismatch: {w.shape} vs {v.shape}")
    return float(np.dot(w, v))


class FeasibleSet:
    """Closed convex set with a cheap Euclidean projection."""

    dim: int

    def project(self, w) -> np.ndarray:
        raise NotImplementedError

    def diameter(self) -> float:
        raise NotImplementedError

    def center(self) -> np.ndarray:
        """Default starting decision."""
        raise NotImplementedError

    def contains(self, w, atol: float = ATOL) -> bool:
        raise NotImplementedError

    def _check(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=np.float64)
        if w.shape != (self.dim,):
            raise ValueError(f"dimension mismatch: set has dim {self.dim}, got shape {w.shape}")
        return w


@dataclass(frozen=True, eq=False)
class Ball(FeasibleSet):
    """Euclidean ball ``{v : ||v - center|| <= radius}``."""

    center_: np.ndarray
    radius: float

    def __init__(self, center, radius: float):
        c = as_vector(center)
        if not (radius > 0 and math.isfinite(radius)):
            raise ValueError(f"ball radius must be positive and finite, got {radius}")
        c.setflags(write=False)
        object.__setattr__(self, "center_", c)
        object.__setattr__(self, "radius", float(radius))

    @classmethod
    def origin(cls, dim: int, radius: float = 1.0) -> Ball:
        return cls(np.zeros(dim), radius)

    @property
    def dim(self) -> int:
        return self.center_.shape[0]

    def project(self, w) -> np.ndarray:
        w = self._check(w)
        d = w - self.center_
        n = math.sqrt(float(np.dot(d, d)))
        if n <= self.radius:
            return w.copy()
        return self.center_ + (self.radius / n) * d

    def diameter(self) -> float:
        return 2.0 * self.radius

    def center(self) -> np.ndarray:
        return self.center_.copy()

    def contains(self, w, atol: float = ATOL) -> bool:
        d = self._check(w) - self.center_
        return math.sqrt(float(np.dot(d, d))) <= self.radius + atol

    def __repr__(self) -> str:
        return f"Ball(dim={self.dim}, radius={self.radius})"


@dataclass(frozen=True, eq=False)
class Box(FeasibleSet):
    """Axis-aligned box ``{v : lower <= v <= upper}``."""

    lower: np.ndarray
    upper: np.ndarray

    def __init__(self, lower, upper):
        lo = as_vector(lower)
        hi = as_vector(upper, dim=lo.shape[0])
        if np.any(lo > hi):
            raise ValueError("box requires lower <= upper componentwise")
        if not np.any(hi > lo):
            raise ValueError("box is a single point (zero diameter)")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    def project(self, w) -> np.ndarray:
        return np.clip(self._check(w), self.lower, self.upper)

    def diameter(self) -> float:
        return float(np.linalg.norm(self.upper - self.lower))

    def center(self) -> np.ndarray:
        return 0.5 * (self.lower + self.upper)

    def contains(self, w, atol: float = ATOL) -> bool:
        w = self._check(w)
        return bool(np.all(w >= self.lower - atol) and np.all(w <= self.upper + atol))

    def __repr__(self) -> str:
        return f"Box(dim={self.dim})"


def project(feasible: FeasibleSet, w) -> np.ndarray:
    return feasible.project(w)


def diameter(feasible: FeasibleSet) -> float:
    return feasible.diameter()
