"""Exact Gaussian law propagation for linear drift-diffusion models.

The model is the Fokker-Planck equation d/dt rho = -div(C x rho) + div(D grad rho),
equivalently the SDE dX = C X dt + B dW with B B^T = 2 D.  A Gaussian initial
law stays Gaussian, with

    mean(t) = e^{tC} mean(0)
    cov(t)  = e^{tC} cov(0) e^{tC^T} + 2 int_0^t e^{sC} D e^{sC^T} ds.

The covariance integral is evaluated in closed form when C is symmetric and
commutes with D, and by adaptive Gauss-Legendre quadrature otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams, NotHurwitz, NotSPD, QuadratureFailure
from .gaussian import Gaussian
from .linalg2 import SYM_TOL, eig2, expm2, solve_lyapunov2, spectral_radius

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)

QUAD_TOL = 1e-12
MAX_PANELS = 2**14


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Constant-coefficient linear drift-diffusion model.

    drift (C) has units 1/time, diffusion (D) units state^2/time; D must be
    symmetric PSD.  dim is 1 or 2; scalars are accepted for dim 1.
    """

    drift: np.ndarray
    diffusion: np.ndarray

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.drift, dtype=float))
        d = np.atleast_2d(np.asarray(self.diffusion, dtype=float))
        if c.shape not in ((1, 1), (2, 2)) or d.shape != c.shape:
            raise InvalidParams(
                f"drift/diffusion must both be 1x1 or 2x2, got {c.shape}, {d.shape}"
            )
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(d))):
            raise InvalidParams("drift and diffusion must be finite")
        scale = float(np.max(np.abs(d)))
        if d.shape == (2, 2) and scale > 0.0:
            if abs(d[0, 1] - d[1, 0]) > SYM_TOL * scale:
                raise NotSPD("diffusion matrix is not symmetric within tolerance")
            if eig2(d)[1] < -SYM_TOL * scale:
                raise NotSPD("diffusion matrix has a negative eigenvalue")
        elif d.shape == (1, 1) and d[0, 0] < -SYM_TOL * scale:
            raise NotSPD("diffusion coefficient must be non-negative")
        object.__setattr__(self, "drift", c)
        object.__setattr__(self, "diffusion", d)

    @property
    def dim(self) -> int:
        return self.drift.shape[0]


def _project_psd(cov: np.ndarray) -> np.ndarray:
    """Symmetrize and clip roundoff-negative eigenvalues to zero."""
    sym = 0.5 * (cov + cov.T)
    if sym.shape == (1, 1):
        return np.array([[max(sym[0, 0], 0.0)]])
    w, vecs = np.linalg.eigh(sym)
    if w[0] >= 0.0:
        return sym
    return (vecs * np.clip(w, 0.0, None)) @ vecs.T


def _expm(c: np.ndarray) -> np.ndarray:
    if c.shape == (1, 1):
        return np.array([[math.exp(c[0, 0])]])
    return expm2(c)


def _exp_integral(two_lam: float, t: float) -> float:
    """int_0^t e^{two_lam * s} ds, exact at two_lam = 0."""
    if two_lam == 0.0:
        return t
    return math.expm1(two_lam * t) / two_lam


def _is_symmetric_commuting(c: np.ndarray, d: np.ndarray) -> bool:
    c_scale = float(np.max(np.abs(c)))
    d_scale = float(np.max(np.abs(d)))
    if abs(c[0, 1] - c[1, 0]) > SYM_TOL * max(c_scale, 1e-300):
        return False
    comm = c @ d - d @ c
    return float(np.max(np.abs(comm))) <= SYM_TOL * max(c_scale * d_scale, 1e-300)


def _cov_integral_closed(c: np.ndarray, d: np.ndarray, t: float) -> np.ndarray:
    """2 int_0^t e^{2sC} ds D for symmetric C commuting with D.

    Splits C = tau I + N with N traceless; N^2 = delta^2 I turns e^{2sC}
    into cosh/sinh combinations of the eigenvalue exponentials, which
    integrate entrywise.
    """
    if c.shape == (1, 1):
        val = 2.0 * d[0, 0] * _exp_integral(2.0 * c[0, 0], t)
        return np.array([[val]])
    mu_hi, mu_lo = eig2(0.5 * (c + c.T))
    tau = 0.5 * (mu_hi + mu_lo)
    int_hi = _exp_integral(2.0 * mu_hi, t)
    int_lo = _exp_integral(2.0 * mu_lo, t)
    base = 0.5 * (int_hi + int_lo) * np.eye(2)
    if mu_hi != mu_lo:
        traceless = 0.5 * (c + c.T) - tau * np.eye(2)
        base = base + ((int_hi - int_lo) / (mu_hi - mu_lo)) * traceless
    return 2.0 * (base @ d)


def _panel(c: np.ndarray, d: np.ndarray, lo: float, hi: float) -> np.ndarray:
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    acc = np.zeros_like(d)
    for node, weight in zip(_GL_NODES, _GL_WEIGHTS):
        s = mid + half * node
        transfer = _expm(s * c)
        acc += weight * (transfer @ d @ transfer.T)
    return half * acc


def _seed_breakpoints(c: np.ndarray, t: float) -> list[float]:
    """Panel seeds at the drift's eigenvalue time scale, doubling out to t.

    The integrand e^{sC} D e^{sC^T} can hide a transient of width 1/rho
    below the leftmost Gauss node of a wide panel, so the fast scale must
    be sampled a priori rather than discovered adaptively.
    """
    rho = spectral_radius(c)
    if rho <= 0.0 or rho * t <= 2.0:
        return [0.0, t]
    points = [0.0]
    h = 1.0 / rho
    while h < t:
        points.append(h)
        h *= 2.0
    points.append(t)
    return points


def _cov_integral_quadrature(
    c: np.ndarray, d: np.ndarray, t: float, tol: float, max_panels: int
) -> np.ndarray:
    eps = float(np.finfo(float).eps)
    total = np.zeros_like(d)
    seeds = _seed_breakpoints(c, t)
    stack = [
        (lo, hi, _panel(c, d, lo, hi))
        for lo, hi in zip(seeds[:-1], seeds[1:])
    ]
    evaluations = len(stack)
    while stack:
        lo, hi, whole = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _panel(c, d, lo, mid)
        right = _panel(c, d, mid, hi)
        evaluations += 2
        if evaluations > max_panels:
            raise QuadratureFailure(
                f"covariance quadrature exceeded {max_panels} panel evaluations"
            )
        refined = left + right
        err = np.abs(whole - refined)
        width = hi - lo
        # accept at the width-proportional budget or at the panel's own
        # roundoff floor, whichever is coarser; the floors sum to ~eps * ||I||
        budget = tol * (width / t) + 32.0 * eps * np.abs(refined)
        if bool(np.all(err <= budget)) or width <= 16.0 * eps * t:
            total += refined
        else:
            stack.append((lo, mid, left))
            stack.append((mid, hi, right))
    return 2.0 * total


def propagate_law(
    model: LinearModel,
    init: Gaussian,
    t: float,
    method: str = "auto",
    tol: float = QUAD_TOL,
    max_panels: int = MAX_PANELS,
) -> Gaussian:
    """Law of the model at time t >= 0 started from the Gaussian ``init``.

    ``method`` selects the covariance-integral route: "auto" picks the
    closed form when C is symmetric and commutes with D, "closed_form"
    forces it, "quadrature" forces adaptive Gauss-Legendre integration
    (absolute tolerance ``tol`` per entry).
    """
    if not (isinstance(t, (int, float)) and math.isfinite(t)) or t < 0.0:
        raise InvalidParams("t must be finite and non-negative")
    if init.dim != model.dim:
        raise InvalidParams("initial law dimension does not match the model")
    if method not in ("auto", "closed_form", "quadrature"):
        raise InvalidParams(f"unknown method {method!r}")
    c, d = model.drift, model.diffusion
    t = float(t)
    transfer = _expm(t * c)
    mean = transfer @ init.mean
    cov = transfer @ init.cov @ transfer.T
    if t > 0.0:
        closed_ok = model.dim == 1 or _is_symmetric_commuting(c, d)
        if method == "closed_form" and not closed_ok:
            raise InvalidParams(
                "closed_form requires symmetric drift commuting with diffusion"
            )
        if method != "quadrature" and closed_ok:
            cov = cov + _cov_integral_closed(c, d, t)
        else:
            cov = cov + _cov_integral_quadrature(c, d, t, tol, max_panels)
        cov = _project_psd(cov)
    return Gaussian(mean=mean, cov=cov)


def stationary_law(model: LinearModel) -> Gaussian:
    """Stationary Gaussian law N(0, S) with C S + S C^T + 2 D = 0."""
    if model.dim == 1:
        c = model.drift[0, 0]
        if c >= 0.0:
            raise NotHurwitz("drift must be negative for a stationary law")
        cov = -model.diffusion[0, 0] / c
        return Gaussian(mean=0.0, cov=cov)
    cov = solve_lyapunov2(model.drift, model.diffusion)
    return Gaussian(mean=np.zeros(2), cov=_project_psd(cov))
