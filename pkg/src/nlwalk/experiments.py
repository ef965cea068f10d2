"""Figure datasets, parameter sweeps, scaling fits, and resource estimates.

Datasets are flat CSV files with a fixed float format (scientific notation,
12 significant digits) so regeneration is bitwise reproducible. Each figure
gets a plain-text manifest listing its curve files, labels, and style roles.
"""
from __future__ import annotations

import concurrent.futures
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from . import analytics
from .core import (
    DomainError,
    EventKind,
    ProblemInstance,
    RegimeKind,
    Trajectory,
    validate,
)
from .dynamics import IntegratorConfig, integrate
from .fitting import FitResult, fit_power

__all__ = [
    "FitResult",
    "fit_power",
    "SweepSpec",
    "SweepResult",
    "run_sweep",
    "figure_dataset",
    "figure_ids",
    "ResourceEstimate",
    "resources",
    "format_float",
    "write_csv",
]


# --------------------------------------------------------------------------
# Serialization

#: scientific notation, 12 significant digits, '.' separator
_FLOAT_FMT = "{:.11e}"


def format_float(value: float) -> str:
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return _FLOAT_FMT.format(value)


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> Path:
    lines = [",".join(header)]
    for row in rows:
        lines.append(
            ",".join(
                format_float(v) if isinstance(v, float) else str(v) for v in row
            )
        )
    path.write_text("\n".join(lines) + "\n")
    return path


def trajectory_rows(traj: Trajectory):
    return [
        (
            float(t),
            float(x),
            float(a.real),
            float(a.imag),
            float(b.real),
            float(b.imag),
            float(gm),
            float(ne),
        )
        for t, x, a, b, gm, ne in zip(
            traj.t, traj.x, traj.alpha, traj.beta, traj.gamma, traj.norm_err
        )
    ]


TRAJECTORY_HEADER = ["t", "x", "alpha_re", "alpha_im", "beta_re", "beta_im", "gamma", "norm_err"]


# --------------------------------------------------------------------------
# Sweeps

#: quantities a sweep may request, with how each is computed
ANALYTIC_OUTPUTS = ("t_star", "t_half", "width", "x_plus", "h_c", "classification")
NUMERIC_OUTPUTS = ("peak_t", "peak_x", "plateau_x")
SWEEP_OUTPUTS = ANALYTIC_OUTPUTS + NUMERIC_OUTPUTS
#: alias: "trajectory" requests the integration-derived trio
TRAJECTORY_ALIAS = NUMERIC_OUTPUTS


@dataclass(frozen=True)
class SweepSpec:
    """One-axis parameter sweep over validated instances."""

    base: ProblemInstance
    axis: str  # one of n, k, g, h
    values: tuple
    outputs: tuple
    t_max: float = 20.0
    epsilon: float = analytics.DEFAULT_EPSILON

    def __post_init__(self):
        if self.axis not in ("n", "k", "g", "h"):
            raise DomainError(f"unknown sweep axis {self.axis!r}")
        if not self.values:
            raise DomainError("sweep values must be nonempty")
        unknown = [o for o in self.outputs if o not in SWEEP_OUTPUTS + ("trajectory",)]
        if unknown:
            raise DomainError(f"unknown sweep outputs {unknown}")

    def instance(self, value) -> ProblemInstance:
        if self.axis in ("n", "k"):
            value = int(value)
        return replace(self.base, **{self.axis: value})

    def resolved_outputs(self) -> tuple:
        out = []
        for o in self.outputs:
            if o == "trajectory":
                out.extend(TRAJECTORY_ALIAS)
            else:
                out.append(o)
        return tuple(dict.fromkeys(out))


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    columns: tuple
    rows: tuple  # one tuple per sweep value, axis value first
    errors: tuple  # (index, message) pairs, aligned with spec.values

    def column(self, name: str):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def _sweep_point(spec: SweepSpec, value) -> tuple:
    outputs = spec.resolved_outputs()
    inst = validate(spec.instance(value))
    results = {}
    if any(o in ANALYTIC_OUTPUTS for o in outputs):
        summary = analytics.summarize(inst, epsilon=spec.epsilon)
        results.update(
            t_star=summary.t_star,
            t_half=summary.t_half,
            width=summary.width,
            x_plus=summary.x_plus,
            h_c=summary.h_c,
            classification=summary.regime.kind.value,
        )
    if any(o in NUMERIC_OUTPUTS for o in outputs):
        traj = integrate(inst, IntegratorConfig(t_max=spec.t_max))
        peak = traj.event(EventKind.FIRST_PEAK)
        plateau = traj.event(EventKind.PLATEAU_DETECTED)
        results.update(
            peak_t=peak.t if peak else None,
            peak_x=peak.x if peak else None,
            plateau_x=plateau.x if plateau else None,
        )
    return tuple([value] + [results.get(o) for o in outputs])


def _sweep_worker(args):
    spec, index, value = args
    try:
        return index, _sweep_point(spec, value), None
    except Exception as exc:  # error isolation: one bad point must not kill the sweep
        return index, None, f"{type(exc).__name__}: {exc}"


def run_sweep(spec: SweepSpec, parallelism: int = 1) -> SweepResult:
    """Evaluate the sweep; results are ordered by the spec's value order and
    are identical for any worker count (each point is a pure function)."""
    columns = (spec.axis,) + spec.resolved_outputs()
    tasks = [(spec, i, v) for i, v in enumerate(spec.values)]
    results: list = [None] * len(tasks)
    errors = []
    if parallelism <= 1:
        outcomes = map(_sweep_worker, tasks)
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=parallelism) as pool:
            outcomes = list(pool.map(_sweep_worker, tasks))
    for index, row, err in outcomes:
        if err is not None:
            errors.append((index, err))
            results[index] = (spec.values[index],) + (None,) * len(spec.resolved_outputs())
        else:
            results[index] = row
    return SweepResult(spec=spec, columns=columns, rows=tuple(results), errors=tuple(errors))


# --------------------------------------------------------------------------
# Figure reproduction


@dataclass(frozen=True)
class _Curve:
    filename: str
    label: str
    style: str  # solid-black | dashed-red | dotted-green | fit-overlay
    build: Callable[[], tuple]  # -> (header, rows)


@dataclass(frozen=True)
class _Figure:
    figure_id: str
    title: str
    xlabel: str
    ylabel: str
    curves: tuple


_PANEL_H = {
    "a": 1.0, "b": 2.0, "c": 2.9, "d": 2.99, "e": 3.0, "f": 3.008,
    "g": 3.0091, "h": 3.08, "i": 3.091, "j": 3.3, "k": 4.0, "l": 5.0,
}

_CURVE_STYLES = ("solid-black", "dashed-red", "dotted-green")


def _trajectory_curve(figure_id, tag, label, style, inst, t_max):
    def build():
        traj = integrate(inst, IntegratorConfig(t_max=t_max))
        return TRAJECTORY_HEADER, trajectory_rows(traj)

    return _Curve(f"{figure_id}_{tag}.csv", label, style, build)


def _prob_figure(figure_id, k, h, t_max=10.0):
    curves = []
    for n, style in ((100, "solid-black"), (1000, "dashed-red")):
        inst = ProblemInstance(n, k, n - 1, h)
        curves.append(
            _trajectory_curve(figure_id, f"n{n}", f"N = {n}", style, inst, t_max)
        )
    return _Figure(
        figure_id,
        f"success probability vs time (k = {k}, h = {h}, g = N-1)",
        "t",
        "success probability",
        tuple(curves),
    )


def _fig4():
    curves = []
    for g, style in ((10, "solid-black"), (20, "dashed-red"), (100, "dotted-green")):
        inst = ProblemInstance(1000, 2, g, 4)
        curves.append(
            _trajectory_curve("fig4", f"g{g}", f"g = {g}", style, inst, 40.0)
        )
    return _Figure(
        "fig4",
        "success probability vs time (N = 1000, k = 2, h = 4)",
        "t",
        "success probability",
        tuple(curves),
    )


def _fig5():
    def build():
        ns = np.unique(np.round(np.logspace(3, 6, 31)).astype(int))
        rows = [
            (int(n), analytics.runtime_peak(ProblemInstance(int(n), 3, int(n) - 1, 2.99)))
            for n in ns
        ]
        return ["n", "t_star"], rows

    return _Figure(
        "fig5",
        "runtime vs graph size (k = 3, h = 2.99, g = N-1)",
        "N",
        "runtime",
        (_Curve("fig5_runtime.csv", "k = 3, h = 2.99, g = N-1", "solid-black", build),),
    )


def _grid(start, stop, step):
    return tuple(int(v) if float(v).is_integer() else float(v)
                 for v in np.arange(start, stop + step / 2, step))


#: Fig. 6 scaling-panel parameter grids, one entry per plot: the varied axis
#: and the fixed parameters. h "=k" means h follows k along the sweep.
FIG6_PANELS = {
    "fig6a": [
        ("n", dict(k=4, g=500, h=4), _grid(1000, 3000, 100)),
        ("g", dict(n=1000, k=4, h=4), _grid(400, 600, 10)),
        ("k", dict(n=1000, g=500, h="=k"), _grid(4, 20, 1)),
    ],
    "fig6b": [
        ("n", dict(k=100, g=4, h=100), _grid(1000, 3000, 100)),
        ("g", dict(n=10000, k=2000, h=2000), _grid(400, 600, 10)),
        ("k", dict(n=10000, g=4, h="=k"), _grid(400, 600, 10)),
    ],
    "fig6c": [
        ("n", dict(k=50, g=500, h=4), _grid(1000, 3000, 100)),
        ("g", dict(n=1000, k=50, h=4), _grid(400, 600, 10)),
        ("k", dict(n=10000, g=500, h=4), _grid(50, 100, 2)),
        ("h", dict(n=10000, k=50, g=500), _grid(4, 20, 1)),
    ],
    "fig6d": [
        ("n", dict(k=200, g=50, h=4), _grid(1000, 3000, 100)),
        ("g", dict(n=100000, k=10000, h=4), _grid(400, 600, 10)),
        ("k", dict(n=10000000, g=1000, h=4), _grid(10000, 30000, 1000)),
        ("h", dict(n=10000, k=500, g=100), _grid(4, 20, 1)),
    ],
    "fig6e": [
        ("n", dict(k=400, g=4, h=200), _grid(1000, 3000, 100)),
        ("g", dict(n=10000, k=500, h=100), _grid(10, 50, 1)),
        ("k", dict(n=100000, g=4, h=100), _grid(1000, 4000, 100)),
        ("h", dict(n=100000, k=1000, g=4), _grid(100, 300, 10)),
    ],
}


def fig6_runtimes(panel_id: str, plot_index: int):
    """(axis, values, runtimes) for one plot of a Fig. 6 panel."""
    axis, fixed, values = FIG6_PANELS[panel_id][plot_index]
    runtimes = []
    for v in values:
        params = dict(fixed)
        params[axis] = v
        if params.get("h") == "=k":
            params["h"] = params["k"]
        inst = ProblemInstance(
            int(params["n"]), int(params["k"]), float(params["g"]), float(params["h"])
        )
        runtimes.append(analytics.runtime_peak(inst))
    return axis, list(values), runtimes


def _fig6(panel_id):
    plots = FIG6_PANELS[panel_id]
    curves = []
    for i, (axis, fixed, values) in enumerate(plots):
        def build(i=i):
            axis, values, runtimes = fig6_runtimes(panel_id, i)
            return [axis, "t_star"], list(zip(values, map(float, runtimes)))

        def build_fit(i=i):
            axis, values, runtimes = fig6_runtimes(panel_id, i)
            fit = fit_power(values, runtimes)
            return (
                ["exponent", "coefficient", "r_squared"],
                [(fit.exponent, fit.coefficient, fit.r_squared)],
            )

        fixed_label = ", ".join(
            "h = k" if v == "=k" else f"{k_} = {v}" for k_, v in fixed.items()
        )
        curves.append(
            _Curve(f"{panel_id}_plot{i + 1}.csv", f"runtime vs {axis} ({fixed_label})",
                   "solid-black", build)
        )
        curves.append(
            _Curve(f"{panel_id}_plot{i + 1}_fit.csv", f"power fit, plot {i + 1}",
                   "fit-overlay", build_fit)
        )
    return _Figure(
        panel_id,
        f"runtime scaling panel {panel_id[-1]}",
        "swept parameter",
        "runtime",
        tuple(curves),
    )


def _figures() -> dict:
    figs = {
        "fig2a": _prob_figure("fig2a", k=1, h=1.0),
        "fig2b": _prob_figure("fig2b", k=2, h=1.0),
        "fig4": _fig4(),
        "fig5": _fig5(),
    }
    for letter, h in _PANEL_H.items():
        fid = f"fig3{letter}"
        # plateau panels need a longer horizon to settle
        t_max = 20.0 if h < _PANEL_H["g"] else 60.0
        figs[fid] = _prob_figure(fid, k=3, h=h, t_max=t_max)
    for panel in FIG6_PANELS:
        figs[panel] = _fig6(panel)
    return figs


def figure_ids() -> tuple:
    return tuple(sorted(_figures().keys()))


def figure_dataset(figure_id: str, out_dir) -> list:
    """Write the CSV curves and manifest for one figure; returns the paths."""
    figs = _figures()
    if figure_id not in figs:
        raise DomainError(f"unknown figure id {figure_id!r}")
    fig = figs[figure_id]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    manifest = [
        f"figure={fig.figure_id}",
        f"title={fig.title}",
        f"xlabel={fig.xlabel}",
        f"ylabel={fig.ylabel}",
        f"source=figure {fig.figure_id[3:]}",
    ]
    for curve in fig.curves:
        header, rows = curve.build()
        paths.append(write_csv(out / curve.filename, header, rows))
        manifest.append(f"curve={curve.filename}|{curve.label}|{curve.style}")
    manifest_path = out / f"{fig.figure_id}_manifest.txt"
    manifest_path.write_text("\n".join(manifest) + "\n")
    paths.append(manifest_path)
    return paths


# --------------------------------------------------------------------------
# Resource estimates


@dataclass(frozen=True)
class ResourceEstimate:
    """Fitted (coefficient, exponent-in-N) classes for an N-family.

    n_bec_lower is the parallel-query atom bound N / t_*^2; n_clock is the
    clock-atom requirement max(1/width, 1) at constant measurement time tau;
    space_time is their product class n_clock * t_*.
    """

    t_star: FitResult
    n_bec_lower: FitResult
    n_clock: FitResult
    space_time: FitResult
    tau: float = 1.0


def resources(
    family: Sequence[ProblemInstance],
    epsilon: float = analytics.DEFAULT_EPSILON,
    tau: float = 1.0,
) -> ResourceEstimate:
    """Fit resource classes over an N-family of instances.

    Peak regimes use the time to reach x = 1; plateau regimes use the time to
    half the plateau. Classes are reported as fits across the family, never
    as single-instance bounds.
    """
    ns, t_stars, n_becs, n_clocks, space_times = [], [], [], [], []
    for inst in family:
        validate(inst)
        regime = analytics.regime_label(inst)
        if regime.kind is RegimeKind.PLATEAU:
            t_star = analytics.time_to_half_plateau(inst)
            width = math.inf
        else:
            t_star = analytics.runtime_peak(inst)
            width = analytics.peak_width(inst, epsilon)
        n_clock = max(1.0 / width, 1.0) if width > 0 else 1.0
        ns.append(float(inst.n))
        t_stars.append(t_star)
        n_becs.append(inst.n / t_star**2)
        n_clocks.append(n_clock)
        space_times.append(n_clock * t_star)
    return ResourceEstimate(
        t_star=fit_power(ns, t_stars),
        n_bec_lower=fit_power(ns, n_becs),
        n_clock=fit_power(ns, n_clocks),
        space_time=fit_power(ns, space_times),
        tau=tau,
    )
