"""Integration of the reduced two-dimensional equations of motion.

The state is (alpha, beta) with the jumping rate held at its critical value
gamma_c, which is re-evaluated from the instantaneous success probability at
every integrator stage. The norm is never renormalized; drift is a
diagnostic that must stay below the instance's norm_tol.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .core import (
    EventKind,
    EventRecord,
    HorizonError,
    NormDriftError,
    ProblemInstance,
    SubspaceState,
    Trajectory,
    Unreachable,
    strengths,
    validate,
)


@dataclass(frozen=True)
class IntegratorConfig:
    """Step control, horizon, and output sampling for the RK integrator."""

    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_step: float = 0.01
    t_max: float = 20.0
    sample_dt: float = 0.005
    # plateau detection thresholds (see detect_plateau)
    plateau_rate_tol: float = 1e-8
    plateau_gamma_n_tol: float = 1e-4
    plateau_window: float = 1.0

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "max_step", "t_max", "sample_dt"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.sample_dt > self.t_max:
            raise ValueError("sample_dt must not exceed t_max")


def rhs(state: SubspaceState, instance: ProblemInstance) -> Tuple[complex, complex]:
    """Time derivative (dalpha/dt, dbeta/dt) at the critical jumping rate."""
    n, k, g = instance.n, instance.k, instance.g
    x = abs(state.alpha) ** 2
    s = strengths(x, instance)
    gamma = s.gamma_c
    off = gamma * math.sqrt(k) * math.sqrt(n - k)
    dalpha = 1j * ((gamma * k + 1.0 + g * s.f_alpha) * state.alpha + off * state.beta)
    dbeta = 1j * (off * state.alpha + (gamma * (n - k) + g * s.f_beta) * state.beta)
    return dalpha, dbeta


def x_rate(state: SubspaceState, instance: ProblemInstance) -> float:
    """d|alpha|^2/dt evaluated from the equations of motion."""
    dalpha, _ = rhs(state, instance)
    return 2.0 * (state.alpha.conjugate() * dalpha).real


def _ivp_fun(instance: ProblemInstance):
    n, k, g = instance.n, instance.k, instance.g
    sqkk = math.sqrt(k) * math.sqrt(n - k)

    def fun(t, y):
        alpha, beta = y
        x = (alpha * alpha.conjugate()).real
        s = strengths(x, instance)
        gamma = s.gamma_c
        off = gamma * sqkk
        return [
            1j * ((gamma * k + 1.0 + g * s.f_alpha) * alpha + off * beta),
            1j * (off * alpha + (gamma * (n - k) + g * s.f_beta) * beta),
        ]

    return fun


def _solve(instance: ProblemInstance, config: IntegratorConfig, y0=None, t_max=None):
    if y0 is None:
        s0 = SubspaceState.uniform(instance)
        y0 = np.array([s0.alpha, s0.beta], dtype=complex)
    horizon = config.t_max if t_max is None else t_max
    sol = solve_ivp(
        _ivp_fun(instance),
        (0.0, horizon),
        y0,
        method="DOP853",
        rtol=config.rel_tol,
        atol=config.abs_tol,
        max_step=config.max_step,
        dense_output=True,
    )
    if not sol.success:
        raise NormDriftError(f"integration failed: {sol.message}")
    return sol


def _x_of(sol, t):
    y = sol.sol(t)
    return (y[0] * np.conj(y[0])).real


def _rate_of(sol, instance):
    def rate(t):
        y = sol.sol(np.atleast_1d(t))
        state = SubspaceState(complex(y[0, 0]), complex(y[1, 0]))
        return x_rate(state, instance)

    return rate


def _first_peak(sol, instance, t_grid) -> Optional[EventRecord]:
    """First local maximum of x(t): sign change of dx/dt, refined on dense output."""
    rate = _rate_of(sol, instance)
    rates = np.array([rate(t) for t in t_grid])
    sign = np.sign(rates)
    for i in range(1, len(t_grid)):
        if sign[i - 1] > 0 and sign[i] <= 0:
            t_peak = brentq(rate, t_grid[i - 1], t_grid[i], xtol=1e-12)
            return EventRecord(EventKind.FIRST_PEAK, float(t_peak), float(_x_of(sol, t_peak)))
    return None


def detect_plateau(t, x, gamma, instance, config) -> Optional[EventRecord]:
    """Earliest sample after which dx/dt and gamma*n stay below threshold.

    The rate must stay below plateau_rate_tol and gamma*n below
    plateau_gamma_n_tol over a sustained window of plateau_window time units.
    """
    n = instance.n
    dxdt = np.gradient(x, t)
    quiet = (np.abs(dxdt) < config.plateau_rate_tol) & (
        np.abs(gamma) * n < config.plateau_gamma_n_tol
    )
    window = max(1, int(round(config.plateau_window / (t[1] - t[0]))))
    for i in range(len(t) - window):
        if quiet[i : i + window + 1].all():
            return EventRecord(EventKind.PLATEAU_DETECTED, float(t[i]), float(x[-1]))
    return None


def integrate(instance: ProblemInstance, config: Optional[IntegratorConfig] = None) -> Trajectory:
    """Integrate from the uniform state, with dense-output event detection.

    Raises NormDriftError when |norm - 1| exceeds instance.norm_tol at any
    sample.
    """
    validate(instance)
    config = config or IntegratorConfig()
    sol = _solve(instance, config)
    n_samples = int(math.floor(config.t_max / config.sample_dt)) + 1
    t = np.linspace(0.0, n_samples * config.sample_dt - config.sample_dt, n_samples)
    if t[-1] < config.t_max - 1e-12:
        t = np.append(t, config.t_max)
    y = sol.sol(t)
    alpha, beta = y[0], y[1]
    x = (alpha * np.conj(alpha)).real
    norm = x + (beta * np.conj(beta)).real
    norm_err = np.abs(norm - 1.0)
    if norm_err.max() > instance.norm_tol:
        raise NormDriftError(
            f"norm drift {norm_err.max():.3e} exceeds norm_tol {instance.norm_tol:.1e}"
        )
    gamma = np.array([strengths(float(xi), instance).gamma_c for xi in x])

    events = []
    peak = _first_peak(sol, instance, t)
    if peak is not None:
        events.append(peak)
    plateau = detect_plateau(t, x, gamma, instance, config)
    if plateau is not None:
        events.append(plateau)
    return Trajectory(t=t, alpha=alpha, beta=beta, x=x, gamma=gamma, norm_err=norm_err,
                      events=tuple(events))


def _auto_horizon(instance: ProblemInstance, x_target: float) -> float:
    """Integration horizon estimate from the time-to-probability quadrature."""
    from .analytics import quadrature_time, stationary_roots

    k, n, g, h = instance.k, instance.n, instance.g, instance.h
    cap = 1.0
    if g > 0 and h > 0:
        roots = stationary_roots(instance)
        if instance.k / instance.n < roots.x_plus <= 1.0:
            cap = roots.x_plus
    target = min(x_target, cap - 1e-9 * cap) if cap < 1.0 else min(x_target, 1.0)
    try:
        import warnings

        from scipy.integrate import IntegrationWarning

        with warnings.catch_warnings():
            # only a horizon estimate; near x_plus the integrand is nearly
            # singular and quad's roundoff warning is expected
            warnings.simplefilter("ignore", IntegrationWarning)
            t_est = quadrature_time(instance, min(target, 1.0 - 1e-12))
    except Exception:
        t_est = 20.0
    return max(2.0, 1.5 * t_est + 1.0)


def time_to_probability_numeric(
    instance: ProblemInstance,
    x_target: float,
    config: Optional[IntegratorConfig] = None,
) -> float:
    """First time the integrated success probability reaches x_target.

    The crossing is refined on the dense output to 1e-10 in t. Raises
    Unreachable when x_target exceeds the peak maximum or plateau height,
    HorizonError when the crossing exists but lies beyond t_max.
    """
    validate(instance)
    if not (instance.k / instance.n < x_target <= 1.0):
        raise Unreachable(f"x_target={x_target} outside (k/n, 1]")
    if config is None:
        config = IntegratorConfig(t_max=_auto_horizon(instance, x_target))
    sol = _solve(instance, config)
    t_grid = np.arange(0.0, config.t_max, config.sample_dt)
    x_grid = np.array([_x_of(sol, t) for t in t_grid])

    above = np.nonzero(x_grid >= x_target)[0]
    if above.size and above[0] > 0:
        i = above[0]
        t_cross = brentq(lambda t: _x_of(sol, t) - x_target, t_grid[i - 1], t_grid[i],
                         xtol=1e-12)
        return float(t_cross)

    # No grid crossing: either a tangent approach at the peak, or unreachable.
    peak = _first_peak(sol, instance, t_grid)
    if peak is not None and peak.x >= x_target - 1e-6:
        return peak.t
    x_sup = float(x_grid.max())
    if x_sup < x_target:
        # Distinguish "still rising at t_max" from "asymptote below target".
        tail_rate = _rate_of(sol, instance)(t_grid[-1])
        if tail_rate > 1e-8:
            raise HorizonError(
                f"x_target={x_target} not reached by t_max={config.t_max}"
            )
        raise Unreachable(
            f"x_target={x_target} above attainable maximum ~{x_sup:.6f}"
        )
    raise HorizonError(f"no crossing of x_target={x_target} before t_max={config.t_max}")
