"""Online projected sub-gradient descent with an adaptive step size.

The optimizer only ever sees a gradient substitute.  With the adaptive rule
the step size after accumulating ``G^2 = sum ||g_tau||^2`` is
``eta = D / (sqrt(2) * G)``, which gives the deterministic regret guarantee
``R_T <= sqrt(2) * D * G_T`` against any fixed point of the set.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import FeasibleSet

SQRT2 = math.sqrt(2.0)


class OptimizerState:
    """Current decision ``w``, running squared-norm sum ``G_sq`` and the set.

    Rounds where the substitute is exactly zero (missed observations) leave
    both ``w`` and ``G_sq`` untouched; the round clock lives with the caller.
    """

    def __init__(self, feasible: FeasibleSet, w0=None):
        self.set = feasible
        self.D = feasible.diameter()
        if w0 is None:
            w = feasible.center()
        else:
            w = np.array(w0, dtype=np.float64)
            if not feasible.contains(w):
                raise ValueError("initial decision lies outside the feasible set")
        self.w = w
        self.G_sq = 0.0
        self.updates = 0
        self._last_eta = math.inf

    def copy(self) -> OptimizerState:
        other = OptimizerState.__new__(OptimizerState)
        other.__dict__.update(self.__dict__)
        other.w = self.w.copy()
        return other

    @property
    def G(self) -> float:
        return math.sqrt(self.G_sq)

    def eta(self) -> float | None:
        """Step size the next nonzero update would use after accumulation, or
        None before any nonzero substitute has arrived."""
        if self.G_sq == 0.0:
            return None
        return self.D / (SQRT2 * math.sqrt(self.G_sq))

    def step(self, g_tilde) -> np.ndarray:
        """Adaptive update; returns the new decision."""
        g = np.asarray(g_tilde, dtype=np.float64)
        if g.shape != self.w.shape:
            raise ValueError(f"dimension mismatch: decision {self.w.shape}, substitute {g.shape}")
        sq = float(np.dot(g, g))
        if not math.isfinite(sq):
            raise FloatingPointError("non-finite gradient substitute")
        if sq == 0.0:
            return self.w
        self.G_sq += sq
        eta = self.D / (SQRT2 * math.sqrt(self.G_sq))
        self.w = self.set.project(self.w - eta * g)
        self.updates += 1
        return self.w

    def step_with_fixed_eta(self, g_tilde, eta: float, check_monotone: bool = True) -> np.ndarray:
        """Update with a caller-supplied step size.

        The regret bound for this rule assumes a nonincreasing step sequence;
        with `check_monotone` an increase raises.
        """
        if not eta > 0:
            raise ValueError(f"step size must be positive, got {eta}")
        if check_monotone and eta > self._last_eta:
            raise ValueError(f"step sizes must be nonincreasing: {eta} after {self._last_eta}")
        g = np.asarray(g_tilde, dtype=np.float64)
        if g.shape != self.w.shape:
            raise ValueError(f"dimension mismatch: decision {self.w.shape}, substitute {g.shape}")
        if not np.all(np.isfinite(g)):
            raise FloatingPointError("non-finite gradient substitute")
        self._last_eta = eta
        self.G_sq += float(np.dot(g, g))
        self.w = self.set.project(self.w - eta * g)
        self.updates += 1
        return self.w


def step(state: OptimizerState, g_tilde) -> OptimizerState:
    """Functional form of `OptimizerState.step`; the input state is not modified."""
    new = state.copy()
    new.step(g_tilde)
    return new


def step_with_fixed_eta(state: OptimizerState, g_tilde, eta: float) -> OptimizerState:
    new = state.copy()
    new.step_with_fixed_eta(g_tilde, eta)
    return new


def schedule_bound(etas, grad_sq_norms, D: float) -> float:
    """``D^2 / (2 eta_T) + sum_t eta_t ||g_t||^2 / 2`` for a nonincreasing step sequence."""
    etas = np.asarray(etas, dtype=np.float64)
    sq = np.asarray(grad_sq_norms, dtype=np.float64)
    return float(D * D / (2.0 * etas[-1]) + 0.5 * np.dot(etas, sq))


def adaptive_bound(grad_sq_norms, D: float) -> float:
    """``sqrt(2) * D * sqrt(sum_t ||g_t||^2)``."""
    return SQRT2 * D * math.sqrt(float(np.sum(grad_sq_norms)))
