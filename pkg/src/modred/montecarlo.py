"""Euler-Maruyama simulation oracle with reproducible per-path noise streams.

Paths are advanced by X_{n+1} = X_n + C X_n dt + B sqrt(dt) xi_n with
B B^T = 2 D, so the simulator discretizes the same Fokker-Planck convention
used everywhere else.  Each path owns a counter-based random stream keyed by
(seed, path index), which makes results bitwise reproducible regardless of
batching or worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    InvalidParams,
    LengthMismatch,
    NonFinite,
    TooFewSamples,
    UnstableStep,
)
from .gaussian import Gaussian
from .linalg2 import spectral_radius, sqrtm_spd2
from .linear_sde import LinearModel

# Fixed batching constants; values never affect results, only memory/speed.
_BLOCK_PATHS = 1024
_CHUNK_STEPS = 2048


@dataclass(frozen=True)
class SimConfig:
    """Simulation controls: step size, horizon, ensemble size and seed."""

    dt: float
    n_steps: int
    n_paths: int
    seed: int

    def __post_init__(self):
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise InvalidParams("dt must be positive and finite")
        if self.n_steps < 1 or self.n_paths < 1:
            raise InvalidParams("n_steps and n_paths must be positive")
        if self.seed < 0 or self.seed > 2**64 - 1:
            raise InvalidParams("seed must fit in 64 unsigned bits")


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Terminal states of all paths at one record time."""

    t: float
    values: np.ndarray


class MomentEstimates(NamedTuple):
    mean: "float | np.ndarray"
    variance: "float | np.ndarray"
    se_mean: "float | np.ndarray"
    se_variance: "float | np.ndarray"


def _resolve_workers(workers: "int | None") -> int:
    if workers is None:
        env = os.environ.get("MODRED_THREADS", "").strip()
        if not env:
            return 1
        try:
            workers = int(env)
        except ValueError as exc:
            raise InvalidParams(f"MODRED_THREADS must be an integer, got {env!r}") from exc
    if workers < 0:
        raise InvalidParams("worker count must be >= 0")
    if workers == 0:
        return os.cpu_count() or 1
    return workers


def _path_rng(seed: int, index: int) -> np.random.Generator:
    key = np.array([seed, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _record_steps(record_times, cfg: SimConfig) -> list[int]:
    steps = []
    previous = -math.inf
    for t in record_times:
        t = float(t)
        if not (math.isfinite(t) and t >= 0.0):
            raise InvalidParams("record times must be finite and non-negative")
        if t < previous:
            raise InvalidParams("record times must be sorted")
        previous = t
        j = round(t / cfg.dt)
        if abs(t - j * cfg.dt) > 1e-9 * max(cfg.dt, t):
            raise InvalidParams(f"record time {t} is not a multiple of dt={cfg.dt}")
        if j > cfg.n_steps:
            raise InvalidParams(f"record time {t} exceeds the horizon n_steps*dt")
        steps.append(int(j))
    if not steps:
        raise InvalidParams("need at least one record time")
    return steps


def simulate(
    model: LinearModel,
    init,
    cfg: SimConfig,
    record_times,
    workers: "int | None" = None,
) -> list[SampleSet]:
    """Euler-Maruyama ensemble of the model, sampled at the record times.

    ``init`` is either a deterministic state (scalar / length-dim vector) or
    a :class:`Gaussian` law to draw initial states from.  Record times must
    be sorted multiples of dt within [0, n_steps*dt].  Identical
    (model, init, cfg, record_times) inputs reproduce identical output
    bitwise, for any worker count.
    """
    dim = model.dim
    drift = model.drift
    radius = abs(drift[0, 0]) if dim == 1 else spectral_radius(drift)
    if cfg.dt * radius >= 0.5:
        raise UnstableStep(
            f"dt*|stiffest eigenvalue| = {cfg.dt * radius:.3g} >= 0.5; reduce dt"
        )
    steps = _record_steps(record_times, cfg)
    step_map: dict[int, list[int]] = {}
    for r, j in enumerate(steps):
        step_map.setdefault(j, []).append(r)
    n_last = max(steps)

    if isinstance(init, Gaussian):
        if init.dim != dim:
            raise InvalidParams("initial law dimension does not match the model")
        init_mean = init.mean
        init_root = (
            np.array([[math.sqrt(max(init.variance, 0.0))]])
            if dim == 1
            else sqrtm_spd2(init.cov)
        )
    else:
        point = np.atleast_1d(np.asarray(init, dtype=float))
        if point.shape != (dim,):
            raise InvalidParams(f"initial state must have shape ({dim},)")
        if not np.all(np.isfinite(point)):
            raise InvalidParams("initial state must be finite")
        init_mean, init_root = point, None

    if dim == 1:
        noise_root = np.array([[math.sqrt(max(2.0 * model.diffusion[0, 0], 0.0))]])
    else:
        noise_root = sqrtm_spd2(2.0 * model.diffusion)
    step_mat = drift.T * cfg.dt
    noise_mat = noise_root.T * math.sqrt(cfg.dt)

    out = np.empty((len(steps), cfg.n_paths, dim))

    def run_block(i0: int, i1: int):
        n_block = i1 - i0
        rngs = [_path_rng(cfg.seed, i) for i in range(i0, i1)]
        if init_root is not None:
            draws = np.empty((n_block, dim))
            for idx, rng in enumerate(rngs):
                draws[idx] = rng.standard_normal(dim)
            x = init_mean + draws @ init_root.T
        else:
            x = np.tile(init_mean, (n_block, 1))
        for r in step_map.get(0, ()):
            out[r, i0:i1] = x
        # overflow to inf is tolerated here and reported as NonFinite below
        with np.errstate(over="ignore", invalid="ignore"):
            for chunk_start in range(0, n_last, _CHUNK_STEPS):
                m = min(_CHUNK_STEPS, n_last - chunk_start)
                noise = np.empty((n_block, m, dim))
                for idx, rng in enumerate(rngs):
                    noise[idx] = rng.standard_normal((m, dim))
                for j in range(m):
                    x = x + x @ step_mat + noise[:, j, :] @ noise_mat
                    for r in step_map.get(chunk_start + j + 1, ()):
                        out[r, i0:i1] = x

    blocks = [
        (i0, min(i0 + _BLOCK_PATHS, cfg.n_paths))
        for i0 in range(0, cfg.n_paths, _BLOCK_PATHS)
    ]
    n_workers = _resolve_workers(workers)
    if n_workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            list(pool.map(lambda b: run_block(*b), blocks))
    else:
        for b in blocks:
            run_block(*b)

    if not np.all(np.isfinite(out)):
        raise NonFinite("a simulated state overflowed; reduce dt or the horizon")
    result = []
    for r, j in enumerate(steps):
        values = out[r, :, 0] if dim == 1 else out[r]
        result.append(SampleSet(t=j * cfg.dt, values=values.copy()))
    return result


def _values_1d(s) -> np.ndarray:
    values = s.values if isinstance(s, SampleSet) else np.asarray(s, dtype=float)
    values = np.asarray(values, dtype=float)
    if values.ndim != 1:
        raise InvalidParams("expected a one-dimensional sample set")
    return values


def empirical_w2_1d(a, b) -> float:
    """Exact W2 between two equal-size empirical measures on the line.

    Sorting both samples realizes the monotone (optimal) coupling, so this
    is sqrt(mean((a_(i) - b_(i))^2)).
    """
    av = _values_1d(a)
    bv = _values_1d(b)
    if av.size != bv.size:
        raise LengthMismatch(f"sample sizes differ: {av.size} vs {bv.size}")
    diff = np.sort(av) - np.sort(bv)
    return float(np.sqrt(np.mean(diff * diff)))


def moment_estimates(s) -> MomentEstimates:
    """Unbiased mean/variance with normal-theory standard errors.

    se_mean = sqrt(var/n); se_variance = sqrt(2/(n-1)) * var (adequate here,
    every simulated law is Gaussian).  Works per coordinate for 2-D samples.
    """
    values = s.values if isinstance(s, SampleSet) else np.asarray(s, dtype=float)
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if n < 2:
        raise TooFewSamples("need at least two samples")
    mean = values.mean(axis=0)
    variance = values.var(axis=0, ddof=1)
    se_mean = np.sqrt(variance / n)
    se_variance = math.sqrt(2.0 / (n - 1)) * variance
    if values.ndim == 1:
        return MomentEstimates(
            float(mean), float(variance), float(se_mean), float(se_variance)
        )
    return MomentEstimates(mean, variance, se_mean, se_variance)


def bootstrap_w2_se(a, b, n_resamples: int = 200, seed: int = 0) -> float:
    """Bootstrap standard error of the empirical W2 between two sample sets."""
    av = _values_1d(a)
    bv = _values_1d(b)
    if av.size != bv.size:
        raise LengthMismatch(f"sample sizes differ: {av.size} vs {bv.size}")
    if n_resamples < 2:
        raise InvalidParams("need at least two bootstrap resamples")
    rng = _path_rng(seed, 2**32 - 1)
    n = av.size
    stats = np.empty(n_resamples)
    for r in range(n_resamples):
        ra = av[rng.integers(0, n, n)]
        rb = bv[rng.integers(0, n, n)]
        stats[r] = empirical_w2_1d(ra, rb)
    return float(stats.std(ddof=1))
