"""Online convex optimization with stochastically missing or noisy sub-gradients.

Adaptive projected sub-gradient descent fed by importance-weighted gradient
substitutes, with posterior observation probabilities under beta/point-mass
mixture priors and an empirical (prior-free) estimator.
"""

from .descent import OptimizerState, adaptive_bound, schedule_bound
from .empirical import GapHistogram
from .environments import (
    LinearAdversary,
    NoiseModel,
    ObservationProcess,
    ObservationStream,
    gap_lower_bound,
)
from .estimators import (
    GML,
    VARIANTS,
    EmpiricalEP,
    GradientEstimator,
    Ignore,
    ObservationEvent,
    Uniform,
    WithKnown,
    WithPrior,
    make_estimator,
    noisy_passthrough,
)
from .geometry import Ball, Box, FeasibleSet, inner, norm_sq, project
from .priors import BetaComponent, MassComponent, MixturePrior, posterior_p, posterior_p_at_gap

__version__ = "0.1.0"

BIMODAL_PRIOR = MixturePrior.uniform_betas([(4.0, 13.0), (13.0, 4.0)])
