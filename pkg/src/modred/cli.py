"""Command-line front end: law tables, bound verification, sweeps, simulation.

Every command accepts flags or a JSON config file (flags win), writes CSV or
JSON tables with full-precision numbers, and echoes the effective
configuration into a ``<out>.config.json`` sidecar when writing to a file.
Exit codes: 0 success / all bounds satisfied, 1 bound violation, 2
configuration error.
"""

from __future__ import annotations

import dataclasses
import json
import math
import sys
from dataclasses import dataclass

import click
import numpy as np

from .bounds import (
    coupled_small_k_bound,
    coupled_w2_exact,
    model_time_grid,
    osc_highfriction_bound,
    osc_w2_exact,
    sup_exact_w2_sq,
    verify_bounds,
)
from .errors import ModredError
from .models import (
    coupled_full_law,
    coupled_reduced_law,
    oscillator_marginal_law,
    oscillator_reduced_law,
)
from .montecarlo import (
    SimConfig,
    bootstrap_w2_se,
    empirical_w2_1d,
    moment_estimates,
    simulate,
)
from .reduction import CoupledParams, OscillatorParams, reduce_coupled, reduce_oscillator


class ConfigError(Exception):
    """Raised for any invalid or inconsistent run configuration."""


@dataclass
class RunConfig:
    """Effective run configuration; mirrors the JSON config file keys."""

    model: str | None = None
    gamma: float | None = None
    omega: float | None = None
    beta: float | None = None
    x0: float | None = None
    v0: float | None = None
    a: float | None = None
    k: float | None = None
    x1: float | None = None
    x2: float | None = None
    t_start: float | None = None
    t_end: float | None = None
    t_count: int | None = None
    t_spacing: str | None = None
    sweep: str | None = None
    seed: int | None = None
    dt: float | None = None
    paths: int | None = None
    steps: int | None = None
    out: str | None = None
    format: str | None = None


_FIELDS = {f.name for f in dataclasses.fields(RunConfig)}

_OSC_SWEEPABLE = ("gamma", "omega", "beta", "x0", "v0")
_COUPLED_SWEEPABLE = ("a", "k", "x1", "x2")


def _load_config(path: str | None, flags: dict) -> RunConfig:
    data: dict = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must contain a JSON object")
        data.pop("command", None)  # sidecar files are valid configs
        unknown = set(data) - _FIELDS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if isinstance(data.get("sweep"), dict):
            spec = data["sweep"]
            try:
                values = ",".join(repr(float(v)) for v in spec["values"])
                data["sweep"] = f"{spec['param']}={values}"
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError("sweep object needs 'param' and numeric 'values'") from exc
    merged = dict(data)
    for key, value in flags.items():
        if value is not None:
            merged[key] = value
    try:
        return RunConfig(**merged)
    except TypeError as exc:
        raise ConfigError(f"invalid config: {exc}") from exc


def _make_params(cfg: RunConfig):
    if cfg.model == "oscillator":
        if cfg.gamma is None or cfg.omega is None or cfg.beta is None:
            raise ConfigError("oscillator model needs --gamma, --omega and --beta")
        return OscillatorParams(
            gamma=cfg.gamma,
            omega=cfg.omega,
            beta=cfg.beta,
            x0=cfg.x0 if cfg.x0 is not None else 0.0,
            v0=cfg.v0 if cfg.v0 is not None else 0.0,
        )
    if cfg.model == "coupled":
        if cfg.a is None or cfg.k is None:
            raise ConfigError("coupled model needs --a and --k")
        return CoupledParams(
            a=cfg.a,
            d=cfg.a,
            k=cfg.k,
            x1=cfg.x1 if cfg.x1 is not None else 0.0,
            x2=cfg.x2 if cfg.x2 is not None else 0.0,
        )
    raise ConfigError("--model must be 'oscillator' or 'coupled'")


def _replace_param(cfg: RunConfig, name: str, value: float):
    if cfg.model == "oscillator" and name not in _OSC_SWEEPABLE:
        raise ConfigError(f"cannot sweep {name!r} for the oscillator model")
    if cfg.model == "coupled" and name not in _COUPLED_SWEEPABLE:
        raise ConfigError(f"cannot sweep {name!r} for the coupled model")
    swept = dataclasses.replace(cfg, **{name: value})
    return _make_params(swept)


def _parse_sweep(cfg: RunConfig) -> tuple[str, list[float]]:
    if cfg.sweep is None:
        raise ConfigError("--sweep name=v1,v2,... is required")
    try:
        name, _, raw = cfg.sweep.partition("=")
        values = [float(v) for v in raw.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse sweep spec {cfg.sweep!r}") from exc
    if not name or not values:
        raise ConfigError(f"cannot parse sweep spec {cfg.sweep!r}")
    return name, values


def _make_grid(cfg: RunConfig, params) -> np.ndarray:
    if cfg.t_start is None and cfg.t_end is None and cfg.t_count is None:
        return model_time_grid(params)
    start = cfg.t_start if cfg.t_start is not None else 0.0
    if cfg.t_end is None or cfg.t_count is None:
        raise ConfigError("a custom grid needs --t-end and --t-count")
    end, count = cfg.t_end, cfg.t_count
    spacing = cfg.t_spacing or "linear"
    if count < 1 or end < start or start < 0.0:
        raise ConfigError("need 0 <= t-start <= t-end and t-count >= 1")
    if count == 1:
        return np.array([end])
    if spacing == "linear":
        return np.linspace(start, end, count)
    if spacing == "geometric":
        if start <= 0.0:
            raise ConfigError("geometric spacing needs t-start > 0")
        return np.geomspace(start, end, count)
    if spacing == "composite":
        mid = start + (end - start) / 10.0
        if mid <= 0.0:
            raise ConfigError("composite spacing needs t-end > 0")
        n_lin = count // 2
        linear = np.linspace(start, mid, n_lin)
        geometric = np.geomspace(mid, end, count - n_lin + 1)[1:]
        return np.concatenate([linear, geometric])
    raise ConfigError("t-spacing must be linear, geometric or composite")


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _emit(rows: list[dict], header: list[str], cfg: RunConfig, command: str):
    fmt = cfg.format or "csv"
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(_fmt(row[col]) for col in header) for row in rows]
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        plain = [
            {col: (row[col] if isinstance(row[col], (str, bool)) else float(row[col]))
             for col in header}
            for row in rows
        ]
        text = json.dumps(plain, indent=2) + "\n"
    else:
        raise ConfigError("format must be csv or json")
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        sidecar = dict(dataclasses.asdict(cfg), command=command, format=fmt)
        with open(f"{cfg.out}.config.json", "w", encoding="utf-8", newline="") as fh:
            json.dump(sidecar, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        click.echo(text, nl=False)


def _common_options(fn):
    options = [
        click.option("--config", "config_path", type=click.Path(), default=None,
                     help="JSON config file; flags override its values."),
        click.option("--model", type=click.Choice(["oscillator", "coupled"]), default=None),
        click.option("--gamma", type=float, default=None, help="Oscillator friction."),
        click.option("--omega", type=float, default=None, help="Oscillator frequency."),
        click.option("--beta", type=float, default=None, help="Inverse temperature."),
        click.option("--x0", type=float, default=None, help="Initial position."),
        click.option("--v0", type=float, default=None, help="Initial velocity."),
        click.option("--a", type=float, default=None, help="Coupled self-relaxation rate."),
        click.option("--k", type=float, default=None, help="Coupling strength."),
        click.option("--x1", type=float, default=None, help="Initial position of x1."),
        click.option("--x2", type=float, default=None, help="Initial position of x2."),
        click.option("--t-start", type=float, default=None),
        click.option("--t-end", type=float, default=None),
        click.option("--t-count", type=int, default=None),
        click.option("--t-spacing", type=click.Choice(["linear", "geometric", "composite"]),
                     default=None),
        click.option("--sweep", type=str, default=None, help="Sweep spec name=v1,v2,..."),
        click.option("--seed", type=int, default=None),
        click.option("--dt", type=float, default=None),
        click.option("--paths", type=int, default=None),
        click.option("--steps", type=int, default=None),
        click.option("--out", type=click.Path(), default=None),
        click.option("--format", "format", type=click.Choice(["csv", "json"]), default=None),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _run(command: str, body, config_path: str | None, flags: dict) -> None:
    try:
        cfg = _load_config(config_path, flags)
        code = body(cfg)
    except (ConfigError, ModredError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    sys.exit(code)


@click.group()
def main():
    """Invariant-manifold model reduction with Wasserstein error certificates."""


@main.command(name="law")
@_common_options
def cmd_law(config_path, **flags):
    """Tabulate the exact original and reduced laws over a time grid."""

    def body(cfg: RunConfig) -> int:
        if cfg.sweep is not None:
            raise ConfigError("law does not support --sweep (use the sweep command)")
        params = _make_params(cfg)
        grid = _make_grid(cfg, params)
        rows = []
        for t in grid:
            t = float(t)
            if isinstance(params, OscillatorParams):
                full = oscillator_marginal_law(params, t)
                full_mean, full_var = full.mean[0], full.variance
                reduced = oscillator_reduced_law(params, t)
                w2_sq = osc_w2_exact(params, t)
            else:
                joint = coupled_full_law(params, t)
                full_mean, full_var = joint.mean[0], max(joint.cov[0, 0], 0.0)
                reduced = coupled_reduced_law(params, t)
                w2_sq = coupled_w2_exact(params, t)
            rows.append(
                {
                    "t": t,
                    "mean_full": full_mean,
                    "var_full": full_var,
                    "mean_reduced": reduced.mean[0],
                    "var_reduced": reduced.variance,
                    "w2": math.sqrt(max(w2_sq, 0.0)),
                    "w2_sq": w2_sq,
                }
            )
        header = ["t", "mean_full", "var_full", "mean_reduced", "var_reduced", "w2", "w2_sq"]
        _emit(rows, header, cfg, "law")
        return 0

    _run("law", body, config_path, flags)


@main.command(name="bounds")
@_common_options
def cmd_bounds(config_path, **flags):
    """Verify every error bound on a time grid; exit 1 on any violation."""

    def body(cfg: RunConfig) -> int:
        if cfg.sweep is not None:
            name, values = _parse_sweep(cfg)
            param_sets = [_replace_param(cfg, name, v) for v in values]
        else:
            param_sets = [_make_params(cfg)]
        rows = []
        all_ok = True
        for params in param_sets:
            grid = _make_grid(cfg, params)
            for report in verify_bounds(params, grid):
                all_ok &= report.satisfied
                rows.append(
                    {
                        "bound_name": report.name,
                        "t": report.t,
                        "exact_sq": report.exact_sq,
                        "bound": report.bound,
                        "margin": report.margin,
                        "satisfied": report.satisfied,
                    }
                )
        header = ["bound_name", "t", "exact_sq", "bound", "margin", "satisfied"]
        _emit(rows, header, cfg, "bounds")
        return 0 if all_ok else 1

    _run("bounds", body, config_path, flags)


@main.command(name="sweep")
@_common_options
def cmd_sweep(config_path, **flags):
    """Sweep one parameter; report sup-over-grid exact W2^2 vs its bound."""

    def body(cfg: RunConfig) -> int:
        name, values = _parse_sweep(cfg)
        rows = []
        all_ok = True
        for value in values:
            params = _replace_param(cfg, name, value)
            grid = _make_grid(cfg, params)
            sup = sup_exact_w2_sq(params, grid)
            if isinstance(params, OscillatorParams):
                bound = osc_highfriction_bound(params)
            else:
                bound = coupled_small_k_bound(params)
            ratio = sup / bound
            all_ok &= sup <= bound * (1.0 + 1e-12) + 1e-15
            rows.append(
                {
                    "param": name,
                    "value": value,
                    "sup_w2_sq": sup,
                    "bound": bound,
                    "ratio": ratio,
                }
            )
        _emit(rows, ["param", "value", "sup_w2_sq", "bound", "ratio"], cfg, "sweep")
        return 0 if all_ok else 1

    _run("sweep", body, config_path, flags)


@main.command(name="simulate")
@_common_options
def cmd_simulate(config_path, **flags):
    """Monte-Carlo cross-check of the reduction against closed-form laws."""

    def body(cfg: RunConfig) -> int:
        if cfg.sweep is not None:
            raise ConfigError("simulate does not support --sweep")
        params = _make_params(cfg)
        if cfg.t_start is None and cfg.t_end is None and cfg.t_count is None:
            cfg = dataclasses.replace(
                cfg, t_start=0.5, t_end=2.0, t_count=3, t_spacing="geometric"
            )
        grid = _make_grid(cfg, params)
        dt = cfg.dt if cfg.dt is not None else 1e-3
        seed = cfg.seed if cfg.seed is not None else 0
        paths = cfg.paths if cfg.paths is not None else 10_000
        record = sorted({round(float(t) / dt) * dt for t in grid})
        steps = cfg.steps if cfg.steps is not None else max(
            1, max(round(t / dt) for t in record)
        )
        cfg = dataclasses.replace(cfg, dt=dt, seed=seed, paths=paths, steps=steps)
        sim_cfg = SimConfig(dt=dt, n_steps=steps, n_paths=paths, seed=seed)
        if isinstance(params, OscillatorParams):
            init_full = [params.x0, params.v0]
            init_reduced = [params.x0]
            reduced_model = reduce_oscillator(params)
            analytic_sq = lambda t: osc_w2_exact(params, t)
        else:
            init_full = [params.x1, params.x2]
            init_reduced = [params.x1]
            reduced_model = reduce_coupled(params)
            analytic_sq = lambda t: coupled_w2_exact(params, t)
        full_sets = simulate(params.to_linear_model(), init_full, sim_cfg, record)
        reduced_sets = simulate(reduced_model.to_linear_model(), init_reduced, sim_cfg, record)
        rows = []
        for full_set, reduced_set in zip(full_sets, reduced_sets):
            retained = full_set.values[:, 0]
            moments = moment_estimates(retained)
            emp_w2 = empirical_w2_1d(retained, reduced_set.values)
            se_w2 = bootstrap_w2_se(retained, reduced_set.values, seed=seed)
            analytic = math.sqrt(max(analytic_sq(full_set.t), 0.0))
            diff = emp_w2 - analytic
            if se_w2 > 0.0:
                z_score = diff / se_w2
            else:
                z_score = 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
            rows.append(
                {
                    "t": full_set.t,
                    "emp_mean": moments.mean,
                    "emp_var": moments.variance,
                    "emp_w2_vs_reduced": emp_w2,
                    "se_mean": moments.se_mean,
                    "se_var": moments.se_variance,
                    "se_w2": se_w2,
                    "analytic_w2": analytic,
                    "z_score": z_score,
                }
            )
        header = [
            "t",
            "emp_mean",
            "emp_var",
            "emp_w2_vs_reduced",
            "se_mean",
            "se_var",
            "se_w2",
            "analytic_w2",
            "z_score",
        ]
        _emit(rows, header, cfg, "simulate")
        return 0

    _run("simulate", body, config_path, flags)


if __name__ == "__main__":
    main()
