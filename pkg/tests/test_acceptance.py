"""End-to-end acceptance checks, one per headline claim.

Each test prints a single PASS/FAIL line (with the measured numbers and its
wall-clock cost) before asserting, so a red run still reports every measured
value. Tolerances are fixed here on purpose; do not loosen them to make a
check pass.
"""
import math
import sys
import time

import numpy as np
import pytest

from nlwalk.core import EventKind, ProblemInstance, RegimeKind
from nlwalk.dynamics import IntegratorConfig, _solve, integrate, x_rate
from nlwalk.dynamics import time_to_probability_numeric
from nlwalk import analytics
from nlwalk.experiments import SweepSpec, fig6_runtimes, resources, run_sweep, write_csv
from nlwalk.fitting import fit_power
from nlwalk.fullspace import compare_to_subspace


def _report(name, ok, detail, started, budget=None):
    elapsed = time.perf_counter() - started
    verdict = "PASS" if ok else "FAIL"
    line = f"[acceptance] {name}: {verdict} ({detail}; {elapsed:.1f}s"
    if budget is not None:
        line += f" / budget {budget:.0f}s"
        ok = ok and elapsed < budget
    line += ")"
    print(line, file=sys.stderr)
    assert ok, line


def test_plateau_heights_vs_g():
    # simulated plateaus at (n=1000, k=2, h=4), g in {10, 20, 100}
    started = time.perf_counter()
    expected = {10.0: 0.653, 20.0: 0.585, 100.0: 0.519}
    measured = {}
    for g in expected:
        traj = integrate(ProblemInstance(1000, 2, g, 4.0), IntegratorConfig(t_max=40.0))
        measured[g] = float(traj.x[-1])
    ok = all(abs(measured[g] - expected[g]) <= 0.005 for g in expected)
    detail = ", ".join(f"g={g:g}: {measured[g]:.4f} vs {expected[g]}" for g in expected)
    _report("plateau-heights-vs-g", ok, detail, started, budget=10)


def test_plateau_heights_vs_h():
    # (n=1000, k=3, g=999), h sweep across the plateau family
    started = time.perf_counter()
    expected = {3.0091: 0.997, 3.08: 0.974, 3.091: 0.971, 3.3: 0.909, 4.0: 0.75, 5.0: 0.6}
    measured = {}
    for h in expected:
        traj = integrate(ProblemInstance(1000, 3, 999.0, h), IntegratorConfig(t_max=60.0))
        measured[h] = float(traj.x[-1])
    ok = all(abs(measured[h] - expected[h]) <= 0.01 for h in expected)
    detail = ", ".join(f"h={h:g}: {measured[h]:.4f}" for h in expected)
    _report("plateau-heights-vs-h", ok, detail, started, budget=30)


def test_critical_ratio_and_regime_flip():
    started = time.perf_counter()
    ok = abs(analytics.critical_h(3, 99.0) - (3 + 9 / 99)) <= 1e-9
    ok = ok and abs(analytics.critical_h(3, 999.0) - (3 + 9 / 999)) <= 1e-9

    details = []
    for n, g, t_max in ((100, 99.0, 18.0), (1000, 999.0, 8.0)):
        h_c = analytics.critical_h(3, g)
        below = integrate(ProblemInstance(n, 3, g, h_c - 1e-3), IntegratorConfig(t_max=t_max))
        above = integrate(ProblemInstance(n, 3, g, h_c + 1e-3), IntegratorConfig(t_max=t_max))
        peak_below = float(below.x.max())
        sup_above = float(above.x.max())
        ok = ok and peak_below >= 1 - 1e-4 and sup_above < 1 - 1e-4
        details.append(f"n={n}: max x = {peak_below:.6f} | {sup_above:.6f}")
    _report("critical-ratio-flip", ok, "; ".join(details), started, budget=10)


def test_constant_time_first_peak():
    # first peak at t = pi +- 1e-3 with x >= 1 - 1e-4, for n = 100 and 1000
    started = time.perf_counter()
    details = []
    ok = True
    for n in (100, 1000):
        traj = integrate(ProblemInstance(n, 1, float(n - 1), 1.0), IntegratorConfig(t_max=5.0))
        peak = traj.event(EventKind.FIRST_PEAK)
        ok = ok and peak is not None and abs(peak.t - math.pi) <= 1e-3 and peak.x >= 1 - 1e-4
        details.append(f"n={n}: t={peak.t:.6f} (|t-pi|={abs(peak.t - math.pi):.2e}), x={peak.x:.8f}")
    _report("constant-time-first-peak", ok, "; ".join(details), started, budget=10)


def test_runtime_converges_to_half_pi():
    # runtime for (k=3, h=2.99, g=n-1) within 1% of pi/2 by n = 1e6
    started = time.perf_counter()
    n = 10**6
    t = analytics.runtime_peak(ProblemInstance(n, 3, float(n - 1), 2.99))
    rel = abs(t - math.pi / 2) / (math.pi / 2)
    _report(
        "runtime-to-half-pi",
        rel <= 0.01,
        f"t_star(n=1e6)={t:.6f}, rel err vs pi/2 = {rel:.4f}",
        started,
        budget=10,
    )


def test_plateau_timing_half_pi():
    # time to half plateau within 2% of pi/2, analytic and integrated
    started = time.perf_counter()
    details = []
    ok = True
    for h in (4.0, 5.0):
        inst = ProblemInstance(1000, 3, 999.0, h)
        t_a = analytics.time_to_half_plateau(inst)
        x_half = analytics.stationary_roots(inst).x_plus / 2
        t_n = time_to_probability_numeric(inst, x_half)
        rel_a = abs(t_a - math.pi / 2) / (math.pi / 2)
        rel_n = abs(t_n - math.pi / 2) / (math.pi / 2)
        ok = ok and rel_a <= 0.02 and rel_n <= 0.02
        details.append(f"h={h:g}: analytic {t_a:.4f}, numeric {t_n:.4f}")
    _report("plateau-timing-half-pi", ok, "; ".join(details), started)


def test_closed_form_vs_quadrature_grid():
    # 50 (instance, x) points spanning sharp / wide / plateau, 1e-8 relative
    started = time.perf_counter()
    instances = [
        ProblemInstance(1000, 3, 999.0, 1.0),
        ProblemInstance(2000, 5, 100.0, 2.0),
        ProblemInstance(200, 3, 1.0, 0.5),
        ProblemInstance(1000, 3, 999.0, 3.0),
        ProblemInstance(500, 4, 20.0, 4.5),
        ProblemInstance(1000, 3, 999.0, 4.0),
        ProblemInstance(1000, 2, 10.0, 4.0),
        ProblemInstance(100, 3, 99.0, 3.3),
        ProblemInstance(1000, 3, 999.0, 2.99),
        ProblemInstance(300, 2, 50.0, 6.0),
    ]
    worst = 0.0
    points = 0
    for inst in instances:
        if inst.h >= analytics.critical_h(inst.k, inst.g):
            cap = analytics.stationary_roots(inst).x_plus * 0.95
        else:
            cap = 1.0
        lo = inst.k / inst.n
        for frac in (0.2, 0.4, 0.6, 0.8, 1.0):
            x = lo + frac * (cap - lo)
            t_q = analytics.quadrature_time(inst, x)
            t_c = analytics.analytic_time(inst, x)
            worst = max(worst, abs(t_c - t_q) / abs(t_q))
            points += 1
    _report(
        "closed-form-vs-quadrature",
        points == 50 and worst <= 1e-8,
        f"{points} points, worst rel diff {worst:.2e}",
        started,
        budget=10,
    )


def test_full_space_oracle_equivalence():
    # 20 full-space vs 2-D comparisons across regimes, n <= 1024
    started = time.perf_counter()
    grid = [
        # sharp peaks
        (64, 3, 63.0, 1.0), (100, 2, 99.0, 1.0), (128, 3, 127.0, 2.0),
        (256, 4, 255.0, 1.0), (100, 1, 30.0, 0.5), (512, 3, 511.0, 1.0),
        (1024, 2, 1023.0, 1.0),
        # wide peaks (h = k or just above)
        (64, 3, 63.0, 3.0), (128, 2, 127.0, 2.0), (256, 3, 255.0, 3.0),
        (100, 4, 99.0, 4.0), (512, 2, 511.0, 2.0),
        # plateaus
        (64, 3, 63.0, 5.0), (100, 2, 10.0, 4.0), (128, 3, 127.0, 4.0),
        (256, 2, 255.0, 4.0), (200, 5, 50.0, 7.0), (1024, 3, 1023.0, 4.0),
        # linear / cubic-only
        (64, 2, 0.0, 0.0), (100, 3, 20.0, 0.0),
    ]
    worst = 0.0
    for n, k, g, h in grid:
        dev = compare_to_subspace(ProblemInstance(n, k, g, h), IntegratorConfig(t_max=5.0))
        worst = max(worst, dev)
    _report(
        "full-space-oracle",
        len(grid) == 20 and worst <= 1e-8,
        f"20 instances, worst deviation {worst:.2e}",
        started,
        budget=60,
    )


#: expected exponents per scaling panel, in plot order (axis, exponent)
_FIG6_EXPECTED = {
    "fig6a": [("n", 0.5), ("g", -0.5), ("k", 0.0)],
    "fig6b": [("n", 0.5), ("g", 0.0), ("k", -0.5)],
    "fig6c": [("n", 0.5), ("g", -0.5), ("k", 0.0), ("h", 0.0)],
    "fig6d": [("n", 0.5), ("g", 0.0), ("k", -0.5), ("h", 0.0)],
    "fig6e": [("n", 0.5), ("g", 0.0), ("k", -0.5), ("h", 0.0)],
}


def test_scaling_exponents():
    started = time.perf_counter()
    ok = True
    details = []
    for panel, expected in _FIG6_EXPECTED.items():
        for i, (axis, target) in enumerate(expected):
            got_axis, values, runtimes = fig6_runtimes(panel, i)
            assert got_axis == axis
            fit = fit_power(values, runtimes)
            good = abs(fit.exponent - target) <= 0.05
            ok = ok and good
            if not good or axis == "n":
                details.append(f"{panel}.{axis}={fit.exponent:+.3f} (want {target:+.1f})")
    _report("scaling-exponents", ok, "; ".join(details), started, budget=60)


def _numeric_width(inst, height):
    """Width of the first peak at the given height, from crossing times."""
    from scipy.optimize import brentq

    config = IntegratorConfig(t_max=6.0)
    sol = _solve(inst, config)

    def x_of(t):
        y = sol.sol(t)
        return (y[0] * np.conj(y[0])).real

    grid = np.arange(0.0, config.t_max, 0.002)
    xg = np.array([x_of(t) for t in grid])
    above = np.nonzero(xg >= height)[0]
    assert above.size, f"peak never reaches {height} for {inst}"
    i = above[0]
    t_up = brentq(lambda t: x_of(t) - height, grid[i - 1], grid[i], xtol=1e-10)
    j = above[0] + np.nonzero(xg[above[0]:] < height)[0][0]
    t_down = brentq(lambda t: x_of(t) - height, grid[j - 1], grid[j], xtol=1e-10)
    return t_down - t_up


def test_numeric_width_scaling():
    # measured width at height 1 - 0.01: -0.5 in n for h<k, +0.5 for h=k
    started = time.perf_counter()
    ns = [1000, 3000, 10000]
    details = []
    ok = True
    for h, target in ((1.0, -0.5), (3.0, +0.5)):
        widths = [_numeric_width(ProblemInstance(n, 3, float(n - 1), h), 0.99) for n in ns]
        slope = np.polyfit(np.log(ns), np.log(widths), 1)[0]
        good = abs(slope - target) <= 0.05
        ok = ok and good
        details.append(f"h={h:g}: exponent {slope:+.3f} (want {target:+.1f})")
    _report("numeric-width-scaling", ok, "; ".join(details), started, budget=120)


def test_resource_fits():
    started = time.perf_counter()
    ns = [10**4, 3 * 10**4, 10**5, 3 * 10**5, 10**6, 3 * 10**6, 10**7]
    linear_g = resources([ProblemInstance(n, 3, float(n - 1), 3.0) for n in ns])
    sqrt_g = resources([ProblemInstance(n, 3, math.sqrt(n), 1.0) for n in ns])
    checks = [
        ("linear-g n_bec", linear_g.n_bec_lower.exponent, 1.0),
        ("sqrt-g t_star", sqrt_g.t_star.exponent, 0.25),
        ("sqrt-g n_bec", sqrt_g.n_bec_lower.exponent, 0.5),
        ("sqrt-g space*time", sqrt_g.space_time.exponent, 0.25),
    ]
    ok = all(abs(got - want) <= 0.05 for _, got, want in checks)
    detail = ", ".join(f"{name} {got:+.3f} (want {want:+.2f})" for name, got, want in checks)
    _report("resource-fits", ok, detail, started)


def _random_instances(count, rng):
    out = []
    while len(out) < count:
        n = int(round(10 ** rng.uniform(1.5, 4)))
        k = rng.randrange(1, 8)
        if 2 * k >= n:
            continue
        g = rng.choice([0.0, rng.uniform(0.1, n)])
        h = rng.uniform(0.0, 6.0)
        out.append(ProblemInstance(n, k, float(g), float(h)))
    return out


def test_property_suite_standalone():
    # norm conservation, fixed-point residuals, parallel determinism,
    # monotone rise before the first peak -- no figure/render machinery needed
    import random

    from nlwalk.core import SubspaceState

    started = time.perf_counter()
    rng = random.Random(20240817)
    config = IntegratorConfig(t_max=10.0)

    worst_norm = 0.0
    worst_dip = 0.0
    for inst in _random_instances(20, rng):
        traj = integrate(inst, config)
        worst_norm = max(worst_norm, float(traj.norm_err.max()))
        peak = traj.event(EventKind.FIRST_PEAK)
        stop = peak.t if peak else traj.t[-1]
        for i in range(0, len(traj.t), 20):
            if traj.t[i] >= stop:
                break
            state = SubspaceState(complex(traj.alpha[i]), complex(traj.beta[i]))
            worst_dip = min(worst_dip, x_rate(state, inst))
    norm_ok = worst_norm <= 1e-9
    rise_ok = worst_dip >= -1e-12

    # fixed point: start exactly at x_plus, stay there
    worst_fp = 0.0
    for n, k, g, h in ((1000, 3, 999.0, 4.0), (1000, 2, 20.0, 4.0)):
        inst = ProblemInstance(n, k, g, h)
        x_plus = analytics.stationary_roots(inst).x_plus
        y0 = np.array([math.sqrt(x_plus), math.sqrt(1 - x_plus)], dtype=complex)
        sol = _solve(inst, config, y0=y0)
        t = np.linspace(0, 10, 2001)
        worst_fp = max(worst_fp, float(np.abs(np.abs(sol.sol(t)[0]) ** 2 - x_plus).max()))
    fp_ok = worst_fp <= 1e-9

    # parallel determinism, bitwise at the serialization boundary
    spec = SweepSpec(
        base=ProblemInstance(1000, 3, 999.0, 1.0),
        axis="h",
        values=(1.0, 2.0, 3.0, 4.0, 5.0),
        outputs=("t_star", "x_plus"),
    )
    det_ok = run_sweep(spec, parallelism=1).rows == run_sweep(spec, parallelism=4).rows

    ok = norm_ok and rise_ok and fp_ok and det_ok
    _report(
        "property-suite",
        ok,
        f"norm {worst_norm:.1e}, min dx/dt {worst_dip:.1e}, "
        f"fixed-point {worst_fp:.1e}, determinism {'bitwise' if det_ok else 'BROKEN'}",
        started,
    )
