"""Closed-form time-dependent Gaussian laws for both model families.

These are independent of the generic propagator in :mod:`modred.linear_sde`
and serve as analytic references.  All exponential differences are grouped
as expm1 terms so deterministic initial data give exact point masses at t=0.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidParams, Unsupported
from .gaussian import Gaussian, marginal
from .linear_sde import stationary_law
from .reduction import (
    CoupledParams,
    OscillatorParams,
    reduce_coupled,
    reduce_oscillator,
)


def _check_time(t: float):
    if not (isinstance(t, (int, float)) and math.isfinite(t)) or t < 0.0:
        raise InvalidParams("t must be finite and non-negative")


def oscillator_full_law(p: OscillatorParams, t: float) -> Gaussian:
    """Joint law of (x(t), v(t)) for the underdamped oscillator.

    Mean and covariance are explicit in the relaxation rates
    lam1 = rate_fast, lam2 = rate_slow:

        m_x = [lam1 e^{-lam2 t} - lam2 e^{-lam1 t}] x0 / (lam1-lam2)
              + [e^{-lam2 t} - e^{-lam1 t}] v0 / (lam1-lam2)
        m_v = omega^2 [e^{-lam1 t} - e^{-lam2 t}] x0 / (lam1-lam2)
              + [lam1 e^{-lam1 t} - lam2 e^{-lam2 t}] v0 / (lam1-lam2)

    with covariance entries (gamma/beta)/(lam1-lam2)^2 times

        s_xx: (1-e^{-2 lam1 t})/lam1 + (1-e^{-2 lam2 t})/lam2
              - (4/gamma)(1-e^{-gamma t})
        s_xv: (e^{-lam1 t} - e^{-lam2 t})^2
        s_vv: lam1 (1-e^{-2 lam1 t}) + lam2 (1-e^{-2 lam2 t})
              - (4 omega^2/gamma)(1-e^{-gamma t}).
    """
    _check_time(t)
    lam1, lam2 = p.rate_fast, p.rate_slow
    gap = p.rate_gap
    e_fast = math.exp(-lam1 * t)
    e_slow = math.exp(-lam2 * t)
    m_x = ((lam1 * e_slow - lam2 * e_fast) * p.x0 + (e_slow - e_fast) * p.v0) / gap
    m_v = (
        p.omega**2 * (e_fast - e_slow) * p.x0
        + (lam1 * e_fast - lam2 * e_slow) * p.v0
    ) / gap
    pref = p.gamma / (p.beta * gap**2)
    s_xx = pref * (
        -math.expm1(-2.0 * lam1 * t) / lam1
        - math.expm1(-2.0 * lam2 * t) / lam2
        + 4.0 * math.expm1(-p.gamma * t) / p.gamma
    )
    s_xv = pref * (e_fast - e_slow) ** 2
    s_vv = pref * (
        -lam1 * math.expm1(-2.0 * lam1 * t)
        - lam2 * math.expm1(-2.0 * lam2 * t)
        + 4.0 * p.omega**2 * math.expm1(-p.gamma * t) / p.gamma
    )
    cov = np.array([[max(s_xx, 0.0), s_xv], [s_xv, max(s_vv, 0.0)]])
    return Gaussian(mean=np.array([m_x, m_v]), cov=cov)


def oscillator_marginal_law(p: OscillatorParams, t: float) -> Gaussian:
    """Law of x(t), written in the slow-relaxation form.

    m(t) = e^{-lam2 t} x0 + [(e^{-lam2 t} - e^{-lam1 t})/(lam1-lam2)]
           (lam2 x0 + v0), and the variance is the stationary value scaled
    by gamma^2/(gamma^2 - 4 omega^2) minus fast corrections.  This is a
    different evaluation route from oscillator_full_law on purpose.
    """
    _check_time(t)
    lam1, lam2 = p.rate_fast, p.rate_slow
    gap = p.rate_gap
    e_fast = math.exp(-lam1 * t)
    e_slow = math.exp(-lam2 * t)
    mean = e_slow * p.x0 + (e_slow - e_fast) / gap * (lam2 * p.x0 + p.v0)
    var = (
        -(p.gamma**2 / (p.beta * p.omega**2 * gap**2)) * math.expm1(-2.0 * lam2 * t)
        + (p.gamma / (p.beta * gap**2))
        * (
            4.0 * math.expm1(-p.gamma * t) / p.gamma
            - (math.expm1(-2.0 * lam1 * t) - math.expm1(-2.0 * lam2 * t)) / lam1
        )
    )
    return Gaussian(mean=mean, cov=max(var, 0.0))


def oscillator_reduced_law(p: OscillatorParams, t: float) -> Gaussian:
    """Law of the reduced OU process: N(e^{-lam2 t} x0, (1-e^{-2 lam2 t})/(beta omega^2))."""
    _check_time(t)
    lam2 = p.rate_slow
    mean = math.exp(-lam2 * t) * p.x0
    var = -math.expm1(-2.0 * lam2 * t) / (p.omega**2 * p.beta)
    return Gaussian(mean=mean, cov=var)


def _require_normalized(p: CoupledParams):
    if not p.is_normalized:
        raise Unsupported(
            "closed form needs identical oscillators (a == d) with unit noise; "
            "use propagate_law for the general case"
        )


def coupled_full_law(p: CoupledParams, t: float) -> Gaussian:
    """Joint law of (x1(t), x2(t)) for identical unit-noise oscillators.

    The drift matrix has eigenvalues a (symmetric mode) and a - 2k
    (difference mode), so the transfer matrix is
    (1/2) [[f+g, g-f], [g-f, f+g]] with f = e^{(a-2k)t}, g = e^{at}, and the
    covariance integrates the mode exponentials entrywise.
    """
    _require_normalized(p)
    _check_time(t)
    a, k = p.a, p.k
    e_diff = math.exp((a - 2.0 * k) * t)
    e_sym = math.exp(a * t)
    mean = np.array(
        [
            0.5 * ((e_diff + e_sym) * p.x1 + (e_sym - e_diff) * p.x2),
            0.5 * ((e_sym - e_diff) * p.x1 + (e_diff + e_sym) * p.x2),
        ]
    )
    int_diff = math.expm1(2.0 * (a - 2.0 * k) * t) / (a - 2.0 * k)
    int_sym = math.expm1(2.0 * a * t) / a
    cov = 0.5 * np.array(
        [
            [int_diff + int_sym, int_sym - int_diff],
            [int_sym - int_diff, int_diff + int_sym],
        ]
    )
    return Gaussian(mean=mean, cov=cov)


def coupled_reduced_law(p: CoupledParams, t: float) -> Gaussian:
    """Reduced law N(e^{at} x1, S11 (1 - e^{2at})), S11 = -(1/(a-2k) + 1/a)/2."""
    _require_normalized(p)
    _check_time(t)
    a = p.a
    var_inf = -0.5 * (1.0 / (a - 2.0 * p.k) + 1.0 / a)
    mean = math.exp(a * t) * p.x1
    var = var_inf * -math.expm1(2.0 * a * t)
    return Gaussian(mean=mean, cov=var)


def equilibrium_laws(p) -> tuple[Gaussian, Gaussian]:
    """Equilibria of the original (retained coordinate) and reduced dynamics.

    The original equilibrium is computed through the stationary covariance of
    the full linear model, the reduced one from the calibrated OU model; the
    two must coincide.
    """
    if isinstance(p, OscillatorParams):
        full = stationary_law(p.to_linear_model())
        reduced = reduce_oscillator(p)
    elif isinstance(p, CoupledParams):
        full = stationary_law(p.to_linear_model())
        reduced = reduce_coupled(p)
    else:
        raise InvalidParams(f"unsupported parameter type {type(p).__name__}")
    original_eq = marginal(full, 1)
    reduced_eq = Gaussian(mean=0.0, cov=reduced.stationary_variance)
    return (original_eq, reduced_eq)
