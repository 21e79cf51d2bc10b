"""Error bounds for the reduced dynamics, checked against exact W2 distances.

Each evaluator returns the explicit dominating value for the squared
Wasserstein-2 distance between the original (retained-coordinate) law and
either the reduced law or the shared equilibrium.  ``verify_bounds`` compares
every bound with the exact distance over a time grid and reports margins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import EmptyGrid, InvalidParams, Unsupported
from .gaussian import Gaussian, w2_1d
from .models import (
    coupled_full_law,
    coupled_reduced_law,
    equilibrium_laws,
    oscillator_marginal_law,
    oscillator_reduced_law,
)
from .reduction import CoupledParams, OscillatorParams

# Bound satisfaction tolerance, absorbing roundoff at t=0 where both sides vanish.
SATISFY_RTOL = 1e-12
SATISFY_ATOL = 1e-15


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one (bound, time) comparison."""

    name: str
    t: float
    exact_sq: float
    bound: float
    satisfied: bool
    margin: float


def _make_report(name: str, t: float, exact_sq: float, bound: float) -> BoundReport:
    satisfied = exact_sq <= bound * (1.0 + SATISFY_RTOL) + SATISFY_ATOL
    return BoundReport(
        name=name,
        t=t,
        exact_sq=exact_sq,
        bound=bound,
        satisfied=satisfied,
        margin=bound - exact_sq,
    )


class EquilibriumRate(NamedTuple):
    """Admissible constants for W2(law(t), equilibrium) <= C e^{-rate t}."""

    c_original: float
    c_reduced: float
    rate: float


def _w2_sq(g1: Gaussian, g2: Gaussian) -> float:
    return w2_1d(g1, g2) ** 2


def osc_w2_exact(p: OscillatorParams, t: float) -> float:
    """Exact squared W2 between the oscillator marginal and reduced laws."""
    full = oscillator_marginal_law(p, t)
    reduced = oscillator_reduced_law(p, t)
    dm = full.mean[0] - reduced.mean[0]
    ds = math.sqrt(full.variance) - math.sqrt(reduced.variance)
    return dm * dm + ds * ds


def osc_highfriction_bound(p: OscillatorParams) -> float:
    """Uniform-in-time bound 4/(gamma^2-4omega^2) [(omega|x0|+|v0|)^2 + 4/beta]."""
    gap_sq = p.rate_gap**2
    return 4.0 / gap_sq * ((p.omega * abs(p.x0) + abs(p.v0)) ** 2 + 4.0 / p.beta)


def osc_longtime_bound(p: OscillatorParams, t: float) -> float:
    """Exponential closeness bound with prefactor
    (omega|x0|+|v0|)/gap + 10/(beta gap^2)."""
    _check_time(t)
    gap = p.rate_gap
    prefactor = (p.omega * abs(p.x0) + abs(p.v0)) / gap + 10.0 / (p.beta * gap**2)
    return prefactor * math.exp(-p.rate_slow * t)


def osc_equilibrium_rate(p: OscillatorParams) -> EquilibriumRate:
    """Explicit constants for the common convergence rate to equilibrium.

    c_reduced^2 = x0^2 + 1/(beta omega^2);
    c_original^2 = (|x0| + (lam2 |x0| + |v0|)/gap)^2
                   + (gamma/beta)/gap^2 (4/gamma + 1/lam1 + 1/lam2).
    """
    lam1, lam2 = p.rate_fast, p.rate_slow
    gap = p.rate_gap
    c_red_sq = p.x0**2 + 1.0 / (p.beta * p.omega**2)
    mean_part = (abs(p.x0) + (lam2 * abs(p.x0) + abs(p.v0)) / gap) ** 2
    var_part = (p.gamma / p.beta) / gap**2 * (4.0 / p.gamma + 1.0 / lam1 + 1.0 / lam2)
    return EquilibriumRate(
        c_original=math.sqrt(mean_part + var_part),
        c_reduced=math.sqrt(c_red_sq),
        rate=lam2,
    )


def coupled_w2_exact(p: CoupledParams, t: float) -> float:
    """Exact squared W2 between the x1 marginal and the reduced law."""
    full = coupled_full_law(p, t)
    reduced = coupled_reduced_law(p, t)
    dm = full.mean[0] - reduced.mean[0]
    ds = math.sqrt(max(full.cov[0, 0], 0.0)) - math.sqrt(reduced.variance)
    return dm * dm + ds * ds


def coupled_small_k_bound(p: CoupledParams, k_max: float = 10.0) -> float:
    """Uniform-in-time bound k^2 (x2-x1)^2/(a^2 e^2) + k/(a^2 e), linear in k."""
    _require_normalized(p)
    if p.k > k_max:
        raise InvalidParams(f"small-coupling bound assumes k <= {k_max}")
    a_sq = p.a**2
    return (
        p.k**2 * (p.x2 - p.x1) ** 2 / (a_sq * math.e**2)
        + p.k / (a_sq * math.e)
    )


def coupled_longtime_bound(p: CoupledParams, t: float) -> float:
    """Pointwise dominating function

    (1/4)(x2-x1)^2 (1-e^{-2kt})^2 e^{2at} + (1/2)(1/(2k-a)) e^{2at} (1-e^{-4kt}).
    """
    _require_normalized(p)
    _check_time(t)
    a, k = p.a, p.k
    decay = math.exp(2.0 * a * t)
    mean_part = 0.25 * (p.x2 - p.x1) ** 2 * math.expm1(-2.0 * k * t) ** 2 * decay
    var_part = 0.5 / (2.0 * k - a) * decay * -math.expm1(-4.0 * k * t)
    return mean_part + var_part


def coupled_equilibrium_rate(p: CoupledParams) -> EquilibriumRate:
    """Explicit constants for convergence to the shared equilibrium at rate |a|.

    c_reduced^2 = x1^2 + S11; c_original^2 = (|x1|+|x2|)^2
    + (1/2)(1/|a| + 1/(2k-a)).
    """
    _require_normalized(p)
    var_inf = -0.5 * (1.0 / (p.a - 2.0 * p.k) + 1.0 / p.a)
    c_red_sq = p.x1**2 + var_inf
    c_orig_sq = (abs(p.x1) + abs(p.x2)) ** 2 + 0.5 * (
        1.0 / abs(p.a) + 1.0 / (2.0 * p.k - p.a)
    )
    return EquilibriumRate(
        c_original=math.sqrt(c_orig_sq),
        c_reduced=math.sqrt(c_red_sq),
        rate=abs(p.a),
    )


def _check_time(t: float):
    if not (isinstance(t, (int, float)) and math.isfinite(t)) or t < 0.0:
        raise InvalidParams("t must be finite and non-negative")


def _require_normalized(p: CoupledParams):
    if not p.is_normalized:
        raise Unsupported("bounds require a == d and unit noise strengths")


def default_time_grid(rate: float, n_points: int = 60) -> np.ndarray:
    """Verification grid: linear on [0, 2/rate], geometric out to 20/rate."""
    if not (rate > 0.0 and math.isfinite(rate)):
        raise InvalidParams("rate must be positive and finite")
    if n_points < 4:
        raise InvalidParams("need at least 4 grid points")
    n_lin = n_points // 2
    linear = np.linspace(0.0, 2.0 / rate, n_lin)
    geometric = np.geomspace(2.0 / rate, 20.0 / rate, n_points - n_lin + 1)[1:]
    return np.concatenate([linear, geometric])


def model_time_grid(p, n_points: int = 60) -> np.ndarray:
    """Two-scale grid resolving both the slow relaxation and the fast transient."""
    if isinstance(p, OscillatorParams):
        slow, fast = p.rate_slow, p.rate_fast
    elif isinstance(p, CoupledParams):
        lam_slow, lam_fast = p.drift_eigenvalues()
        slow, fast = abs(lam_slow), abs(lam_fast)
    else:
        raise InvalidParams(f"unsupported parameter type {type(p).__name__}")
    return np.union1d(default_time_grid(slow, n_points), default_time_grid(fast, n_points))


def _validate_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise EmptyGrid("time grid is empty")
    if grid.ndim != 1 or not np.all(np.isfinite(grid)):
        raise InvalidParams("time grid must be a finite 1-D array")
    if np.any(grid < 0.0) or np.any(np.diff(grid) < 0.0):
        raise InvalidParams("time grid must be sorted and non-negative")
    return grid


def sup_exact_w2_sq(p, grid) -> float:
    """Largest exact squared W2 (original vs reduced) over the grid."""
    grid = _validate_grid(grid)
    if isinstance(p, OscillatorParams):
        return max(osc_w2_exact(p, t) for t in grid)
    if isinstance(p, CoupledParams):
        return max(coupled_w2_exact(p, t) for t in grid)
    raise InvalidParams(f"unsupported parameter type {type(p).__name__}")


def _oscillator_families(p: OscillatorParams):
    high = osc_highfriction_bound(p)
    rates = osc_equilibrium_rate(p)
    eq_original, eq_reduced = equilibrium_laws(p)
    return [
        ("high_friction", lambda t: osc_w2_exact(p, t), lambda t: high),
        ("long_time", lambda t: osc_w2_exact(p, t), lambda t: osc_longtime_bound(p, t)),
        (
            "equilibrium_rate_original",
            lambda t: _w2_sq(oscillator_marginal_law(p, t), eq_original),
            lambda t: (rates.c_original * math.exp(-rates.rate * t)) ** 2,
        ),
        (
            "equilibrium_rate_reduced",
            lambda t: _w2_sq(oscillator_reduced_law(p, t), eq_reduced),
            lambda t: (rates.c_reduced * math.exp(-rates.rate * t)) ** 2,
        ),
    ]


def _coupled_families(p: CoupledParams):
    small = coupled_small_k_bound(p)
    rates = coupled_equilibrium_rate(p)
    eq_original, eq_reduced = equilibrium_laws(p)

    def first_marginal(t):
        full = coupled_full_law(p, t)
        return Gaussian(mean=full.mean[0], cov=max(full.cov[0, 0], 0.0))

    return [
        ("small_coupling", lambda t: coupled_w2_exact(p, t), lambda t: small),
        (
            "long_time",
            lambda t: coupled_w2_exact(p, t),
            lambda t: coupled_longtime_bound(p, t),
        ),
        (
            "equilibrium_rate_original",
            lambda t: _w2_sq(first_marginal(t), eq_original),
            lambda t: (rates.c_original * math.exp(-rates.rate * t)) ** 2,
        ),
        (
            "equilibrium_rate_reduced",
            lambda t: _w2_sq(coupled_reduced_law(p, t), eq_reduced),
            lambda t: (rates.c_reduced * math.exp(-rates.rate * t)) ** 2,
        ),
    ]


def verify_bounds(p, grid=None) -> list[BoundReport]:
    """Evaluate every applicable bound on the grid and report margins.

    Defaults to the 60-point grid at the slow relaxation rate.  Reports are
    ordered by bound family and then by time.
    """
    if isinstance(p, OscillatorParams):
        families = _oscillator_families(p)
        slow = p.rate_slow
    elif isinstance(p, CoupledParams):
        families = _coupled_families(p)
        slow = abs(p.drift_eigenvalues()[0])
    else:
        raise InvalidParams(f"unsupported parameter type {type(p).__name__}")
    grid = _validate_grid(default_time_grid(slow) if grid is None else grid)
    reports = []
    for name, exact_fn, bound_fn in families:
        for t in grid:
            t = float(t)
            reports.append(_make_report(name, t, exact_fn(t), bound_fn(t)))
    return reports
