"""Invariant-manifold model reduction for linear stochastic systems.

Reduces an underdamped Brownian oscillator and a pair of coupled overdamped
oscillators to scalar Ornstein-Uhlenbeck models, computes the exact Gaussian
laws of both descriptions, and certifies the reduction error through exact
Wasserstein-2 distances, explicit bounds and a Monte-Carlo oracle.
"""

from .bounds import (
    BoundReport,
    EquilibriumRate,
    coupled_equilibrium_rate,
    coupled_longtime_bound,
    coupled_small_k_bound,
    coupled_w2_exact,
    default_time_grid,
    model_time_grid,
    osc_equilibrium_rate,
    osc_highfriction_bound,
    osc_longtime_bound,
    osc_w2_exact,
    sup_exact_w2_sq,
    verify_bounds,
)
from .errors import (
    EmptyGrid,
    InvalidParams,
    LengthMismatch,
    ModredError,
    NonFinite,
    NotHurwitz,
    NotOverdamped,
    NotSPD,
    QuadratureFailure,
    Singular,
    TooFewSamples,
    Unsupported,
    UnstableStep,
)
from .gaussian import Gaussian, marginal, w2_1d, w2_2d
from .linalg2 import (
    ComplexPair,
    eig2,
    expm2,
    is_hurwitz,
    solve_lyapunov2,
    spectral_abscissa,
    spectral_radius,
    sqrtm_spd2,
)
from .linear_sde import LinearModel, propagate_law, stationary_law
from .models import (
    coupled_full_law,
    coupled_reduced_law,
    equilibrium_laws,
    oscillator_full_law,
    oscillator_marginal_law,
    oscillator_reduced_law,
)
from .montecarlo import (
    MomentEstimates,
    SampleSet,
    SimConfig,
    bootstrap_w2_se,
    empirical_w2_1d,
    moment_estimates,
    simulate,
)
from .reduction import (
    CoupledParams,
    OscillatorParams,
    ReducedModel,
    invariance_roots,
    reduce_coupled,
    reduce_oscillator,
    select_closure,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "ComplexPair",
    "CoupledParams",
    "EmptyGrid",
    "EquilibriumRate",
    "Gaussian",
    "InvalidParams",
    "LengthMismatch",
    "LinearModel",
    "ModredError",
    "MomentEstimates",
    "NonFinite",
    "NotHurwitz",
    "NotOverdamped",
    "NotSPD",
    "OscillatorParams",
    "QuadratureFailure",
    "ReducedModel",
    "SampleSet",
    "SimConfig",
    "Singular",
    "TooFewSamples",
    "Unsupported",
    "UnstableStep",
    "bootstrap_w2_se",
    "coupled_equilibrium_rate",
    "coupled_full_law",
    "coupled_longtime_bound",
    "coupled_reduced_law",
    "coupled_small_k_bound",
    "coupled_w2_exact",
    "default_time_grid",
    "eig2",
    "empirical_w2_1d",
    "equilibrium_laws",
    "expm2",
    "invariance_roots",
    "is_hurwitz",
    "marginal",
    "model_time_grid",
    "moment_estimates",
    "oscillator_full_law",
    "oscillator_marginal_law",
    "oscillator_reduced_law",
    "osc_equilibrium_rate",
    "osc_highfriction_bound",
    "osc_longtime_bound",
    "osc_w2_exact",
    "propagate_law",
    "reduce_coupled",
    "reduce_oscillator",
    "select_closure",
    "simulate",
    "solve_lyapunov2",
    "spectral_abscissa",
    "spectral_radius",
    "sqrtm_spd2",
    "stationary_law",
    "sup_exact_w2_sq",
    "verify_bounds",
    "w2_1d",
    "w2_2d",
]
