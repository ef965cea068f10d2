"""Command-line interface.

Exit codes: 0 success, 2 usage or domain error, 3 numerical failure.
Every number printed on stdout is re-derivable from the written CSV files.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import analytics, experiments, fullspace
from .core import (
    DomainError,
    EventKind,
    NumericalError,
    ProblemInstance,
    RegimeKind,
    validate,
)
from .dynamics import IntegratorConfig, integrate
from .experiments import (
    SweepSpec,
    figure_dataset,
    figure_ids,
    format_float,
    resources,
    run_sweep,
    write_csv,
)

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_NUMERIC = 3


def _add_instance_args(p):
    p.add_argument("--n", type=int, required=True, help="number of vertices")
    p.add_argument("--k", type=int, required=True, help="number of marked vertices")
    p.add_argument("--g", type=float, required=True, help="nonlinear coefficient")
    p.add_argument("--h", type=float, required=True, help="quintic-to-cubic ratio")
    p.add_argument("--norm-tol", type=float, default=1e-9)


def _instance(args) -> ProblemInstance:
    return validate(
        ProblemInstance(args.n, args.k, args.g, args.h, norm_tol=args.norm_tol)
    )


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("NLWALK_JOBS", "1")))
    except ValueError:
        return 1


def cmd_simulate(args) -> int:
    inst = _instance(args)
    config = IntegratorConfig(t_max=args.t_max, sample_dt=args.sample_dt)
    traj = integrate(inst, config)
    out = Path(args.out)
    write_csv(out, experiments.TRAJECTORY_HEADER, experiments.trajectory_rows(traj))
    regime = analytics.regime_label(inst)
    print(f"regime={regime.kind.value}")
    peak = traj.event(EventKind.FIRST_PEAK)
    plateau = traj.event(EventKind.PLATEAU_DETECTED)
    if peak is not None:
        print(f"event=FirstPeak t={format_float(peak.t)} x={format_float(peak.x)}")
    if plateau is not None:
        print(f"event=PlateauDetected t={format_float(plateau.t)} x={format_float(plateau.x)}")
    if peak is None and plateau is None:
        print("event=none")
    print(f"norm_err_max={format_float(float(traj.norm_err.max()))}")
    print(f"trajectory={out}")
    if args.full_space:
        t, x_full, _ = fullspace.integrate_full(inst, config)
        full_out = out.with_name(out.stem + "_full" + out.suffix)
        write_csv(full_out, ["t", "x"], list(zip(map(float, t), map(float, x_full))))
        y = np.interp(t, traj.t, traj.x)
        print(f"full_space_max_deviation={format_float(float(np.abs(x_full - y).max()))}")
        print(f"full_trajectory={full_out}")
    return EXIT_OK


def cmd_analytic(args) -> int:
    inst = _instance(args)
    summary = analytics.summarize(inst, epsilon=args.epsilon)
    print(f"regime={summary.regime.kind.value}")
    if summary.regime.boundary_note:
        print(f"boundary_note={summary.regime.boundary_note}")
    print(f"h_c={format_float(summary.h_c)}")
    for name in ("x_plus", "x_minus", "x_plus_large_n", "x_minus_large_n",
                 "plateau_height", "width", "t_star", "t_half"):
        value = getattr(summary, name)
        if value is not None:
            print(f"{name}={format_float(value)}")
    if summary.scaling_class is not None:
        print(f"scaling_class={summary.scaling_class.name} {summary.scaling_class.formula}")
    if summary.scaling_note:
        print(f"scaling_note={summary.scaling_note}")
    if args.x is not None:
        print(f"t_at_x={format_float(analytics.analytic_time(inst, args.x))}")
    # defaults, so the record is self-describing
    print(f"epsilon={args.epsilon}")
    print("tau=1")
    print(f"dominance_ratio={analytics.DOMINANCE_RATIO}")
    print(f"norm_tol={inst.norm_tol}")
    return EXIT_OK


def cmd_classify(args) -> int:
    inst = _instance(args)
    regime = analytics.regime_label(inst)
    print(f"regime={regime.kind.value}")
    if regime.boundary_note:
        print(f"boundary_note={regime.boundary_note}")
    try:
        _, scaling = analytics.classify(inst)
        print(f"scaling_class={scaling.name} {scaling.formula} ({scaling.condition})")
    except analytics.AmbiguousScaling as exc:
        print(f"scaling_class=ambiguous ({exc})")
    return EXIT_OK


def cmd_figures(args) -> int:
    paths = figure_dataset(args.id, args.out_dir)
    for p in paths:
        print(p)
    return EXIT_OK


def _parse_sweep_file(path: Path) -> tuple:
    """Flat key=value sweep spec; see README for the format."""
    entries = {}
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DomainError(f"bad sweep spec line: {line!r}")
        key, value = line.split("=", 1)
        entries[key.strip()] = value.strip()
    try:
        base = ProblemInstance(
            int(entries["n"]), int(entries["k"]),
            float(entries["g"]), float(entries["h"]),
        )
        axis = entries["axis"]
        values = tuple(float(v) for v in entries["values"].split(","))
        outputs = tuple(o.strip() for o in entries["outputs"].split(","))
    except KeyError as exc:
        raise DomainError(f"sweep spec missing key {exc}")
    t_max = float(entries.get("t_max", 20.0))
    return SweepSpec(base=base, axis=axis, values=values, outputs=outputs, t_max=t_max)


def cmd_sweep(args) -> int:
    spec = _parse_sweep_file(Path(args.spec_file))
    result = run_sweep(spec, parallelism=args.jobs)
    out = Path(args.out)
    rows = [
        tuple("" if v is None else v for v in row)
        for row in result.rows
    ]
    write_csv(out, result.columns, rows)
    print(f"sweep={out} points={len(result.rows)} errors={len(result.errors)}")
    for index, message in result.errors:
        print(f"error[{index}] value={spec.values[index]}: {message}", file=sys.stderr)
    return EXIT_OK


_FAMILIES = {
    # g = N-1, h = k: constant-runtime wide peak; needs Omega(N) atoms
    "linear-g": lambda n, k, h: ProblemInstance(n, k, n - 1, float(k) if h is None else h),
    # g = sqrt(N): slower runtime, fewer atoms, constant clock
    "sqrt-g": lambda n, k, h: ProblemInstance(n, k, math.sqrt(n), 1.0 if h is None else h),
}


def cmd_resources(args) -> int:
    if args.family not in _FAMILIES:
        raise DomainError(f"unknown family {args.family!r}; choose from {sorted(_FAMILIES)}")
    ns = [int(float(v)) for v in args.n_values.split(",")]
    family = [_FAMILIES[args.family](n, args.k, args.h) for n in ns]
    est = resources(family, epsilon=args.epsilon)
    rows = []
    for name in ("t_star", "n_bec_lower", "n_clock", "space_time"):
        fit = getattr(est, name)
        print(f"{name}: coefficient={format_float(fit.coefficient)} "
              f"exponent={format_float(fit.exponent)} r2={format_float(fit.r_squared)}")
        rows.append((name, fit.coefficient, fit.exponent, fit.r_squared))
    if args.out:
        write_csv(Path(args.out), ["quantity", "coefficient", "exponent", "r_squared"], rows)
        print(f"fits={args.out}")
    print(f"tau={est.tau}")
    return EXIT_OK


def _verify_oracle() -> tuple:
    grid = [
        (64, 3, 63.0, 1.0), (100, 2, 99.0, 3.0), (128, 3, 127.0, 4.0),
        (100, 1, 99.0, 1.0), (200, 5, 50.0, 7.0), (64, 2, 0.0, 0.0),
    ]
    worst = 0.0
    for n, k, g, h in grid:
        dev = fullspace.compare_to_subspace(
            ProblemInstance(n, k, g, h), IntegratorConfig(t_max=5.0)
        )
        worst = max(worst, dev)
    return worst <= 1e-8, worst


def _verify_analytic() -> tuple:
    grid = [
        (1000, 3, 999.0, 1.0, 0.9), (1000, 3, 999.0, 3.0, 0.99),
        (1000, 2, 10.0, 4.0, 0.3), (100, 3, 99.0, 3.05, 0.8),
        (500, 5, 20.0, 2.0, 0.95), (1000, 3, 999.0, 5.0, 0.29),
    ]
    worst = 0.0
    for n, k, g, h, x in grid:
        inst = ProblemInstance(n, k, g, h)
        t_q = analytics.quadrature_time(inst, x)
        t_c = analytics.analytic_time(inst, x)
        worst = max(worst, abs(t_c - t_q) / abs(t_q))
    return worst <= 1e-8, worst


def _verify_fixedpoint() -> tuple:
    from .dynamics import _solve

    worst = 0.0
    for n, k, g, h in [(1000, 3, 999.0, 4.0), (1000, 2, 20.0, 4.0)]:
        inst = ProblemInstance(n, k, g, h)
        x_plus = analytics.stationary_roots(inst).x_plus
        y0 = np.array([math.sqrt(x_plus), math.sqrt(1 - x_plus)], dtype=complex)
        sol = _solve(inst, IntegratorConfig(t_max=10.0), y0=y0)
        t = np.linspace(0, 10, 2001)
        x = np.abs(sol.sol(t)[0]) ** 2
        worst = max(worst, float(np.abs(x - x_plus).max()))
    return worst <= 1e-6, worst


def cmd_verify(args) -> int:
    suites = {
        "oracle": _verify_oracle,
        "analytic": _verify_analytic,
        "fixedpoint": _verify_fixedpoint,
    }
    names = sorted(suites) if args.suite == "all" else [args.suite]
    failed = False
    for name in names:
        if name not in suites:
            raise DomainError(f"unknown suite {name!r}; choose from {sorted(suites)} or all")
        ok, residual = suites[name]()
        print(f"{name}: {'pass' if ok else 'FAIL'} max_residual={format_float(residual)}")
        failed = failed or not ok
    return EXIT_NUMERIC if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlwalk",
        description="Nonlinear continuous-time quantum-walk search on the complete graph",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate a trajectory and write it as CSV")
    _add_instance_args(p)
    p.add_argument("--t-max", type=float, default=20.0)
    p.add_argument("--sample-dt", type=float, default=0.005)
    p.add_argument("--out", required=True, help="trajectory CSV path")
    p.add_argument("--full-space", action="store_true",
                   help="also run the full N-dimensional oracle")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analytic", help="closed-form summary as key=value lines")
    _add_instance_args(p)
    p.add_argument("--x", type=float, default=None, help="also report time to reach x")
    p.add_argument("--epsilon", type=float, default=analytics.DEFAULT_EPSILON)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("classify", help="regime and asymptotic runtime class")
    _add_instance_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("figures", help="reproduce a figure's datasets")
    p.add_argument("--id", required=True, help=f"one of {', '.join(figure_ids())}")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("sweep", help="run a sweep described by a key=value spec file")
    p.add_argument("--spec-file", required=True)
    p.add_argument("--out", required=True, help="sweep dataset CSV path")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("resources", help="fit resource classes over an N-family")
    p.add_argument("--family", required=True, help="linear-g or sqrt-g")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--n-values", default="1e4,3e4,1e5,3e5,1e6,3e6,1e7")
    p.add_argument("--epsilon", type=float, default=analytics.DEFAULT_EPSILON)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_resources)

    p = sub.add_parser("verify", help="run the cross-validation suites")
    p.add_argument("--suite", default="all", help="oracle, analytic, fixedpoint, or all")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
