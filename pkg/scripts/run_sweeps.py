#!/usr/bin/env python3
"""Reproduce the two headline error-decay experiments and bound checks.

Writes three CSV tables under results/:
  gamma_sweep.csv   sup-over-grid W2^2(original, reduced) vs the uniform
                    high-friction bound, friction doubling from 5 to 80
  k_sweep.csv       sup-over-grid W2^2 vs the linear-in-k coupling bound
  bound_margins.csv worst relative margin of every bound family for the
                    baseline parameter sets
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

import numpy as np

from modred import (
    CoupledParams,
    OscillatorParams,
    coupled_small_k_bound,
    model_time_grid,
    osc_highfriction_bound,
    sup_exact_w2_sq,
    verify_bounds,
)

RESULTS = pathlib.Path(__file__).resolve().parents[1] / "results"


def write_csv(path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(f"{v:.17g}" if isinstance(v, float) else str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path} ({len(rows)} rows)")


def gamma_sweep():
    rows = []
    for gamma in [5.0, 10.0, 20.0, 40.0, 80.0]:
        p = OscillatorParams(gamma=gamma, omega=2.0, beta=1.0, x0=1.0, v0=0.0)
        sup = sup_exact_w2_sq(p, model_time_grid(p))
        bound = osc_highfriction_bound(p)
        rows.append((gamma, sup, bound, sup / bound))
    write_csv(RESULTS / "gamma_sweep.csv", ["gamma", "sup_w2_sq", "bound", "ratio"], rows)


def k_sweep():
    rows = []
    for k in [0.4, 0.2, 0.1, 0.05, 0.025]:
        p = CoupledParams(a=-1.0, d=-1.0, k=k, x1=1.0, x2=0.0)
        sup = sup_exact_w2_sq(p, model_time_grid(p))
        bound = coupled_small_k_bound(p)
        rows.append((k, sup, bound, sup / bound))
    write_csv(RESULTS / "k_sweep.csv", ["k", "sup_w2_sq", "bound", "ratio"], rows)


def bound_margins():
    rows = []
    cases = [
        ("oscillator", OscillatorParams(gamma=5.0, omega=2.0, beta=1.0, x0=1.0, v0=0.0)),
        ("coupled", CoupledParams(a=-1.0, d=-1.0, k=1.0, x1=1.0, x2=0.0)),
    ]
    for label, params in cases:
        worst: dict = {}
        for report in verify_bounds(params, model_time_grid(params)):
            rel = report.margin / report.bound if report.bound > 0 else np.inf
            if report.name not in worst or rel < worst[report.name][0]:
                worst[report.name] = (rel, report.t, report.satisfied)
        for name, (rel, t, ok) in sorted(worst.items()):
            rows.append((label, name, t, rel, int(ok)))
    write_csv(
        RESULTS / "bound_margins.csv",
        ["model", "bound_name", "t_at_worst", "relative_margin", "satisfied"],
        rows,
    )


if __name__ == "__main__":
    RESULTS.mkdir(exist_ok=True)
    gamma_sweep()
    k_sweep()
    bound_margins()
