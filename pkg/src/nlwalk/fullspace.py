"""Brute-force oracle: the full N-dimensional nonlinear walk on the
complete graph, used to validate the two-dimensional subspace reduction.

The uniform-projector application costs O(N) via the amplitude sum, so the
right-hand side is linear in N. The integrator engine and tolerances are
shared with the 2-D path so any deviation isolates representation error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .core import (
    DomainError,
    NormDriftError,
    ProblemInstance,
    nonlinearity,
    strengths,
    validate,
)
from .dynamics import IntegratorConfig, _solve as _solve_2d

#: hard cap on the oracle dimension; beyond desk scale the exact 2-D
#: reduction adds nothing.
MAX_FULL_N = 4096


@dataclass(frozen=True)
class FullState:
    """Length-N amplitude vector plus the marked vertex set."""

    amplitudes: np.ndarray
    marked: frozenset

    @property
    def x(self) -> float:
        """Success probability: total weight on the marked vertices."""
        idx = np.fromiter(self.marked, dtype=int)
        return float(np.sum(np.abs(self.amplitudes[idx]) ** 2))

    @staticmethod
    def uniform(instance: ProblemInstance, marked: Optional[Sequence[int]] = None) -> "FullState":
        n, k = instance.n, instance.k
        if marked is None:
            marked = range(k)
        marked = frozenset(int(i) for i in marked)
        if len(marked) != k or any(not (0 <= i < n) for i in marked):
            raise DomainError(f"marked set must contain k={k} distinct vertices in [0, n)")
        psi = np.full(n, 1.0 / math.sqrt(n), dtype=complex)
        return FullState(psi, marked)


def full_rhs(state: FullState, instance: ProblemInstance) -> np.ndarray:
    """d(psi)/dt for the full nonlinear walk at the critical jumping rate."""
    validate(instance)
    if instance.n > MAX_FULL_N:
        raise DomainError(f"full-space oracle capped at n <= {MAX_FULL_N}")
    psi = state.amplitudes
    mask = np.zeros(instance.n, dtype=bool)
    mask[np.fromiter(state.marked, dtype=int)] = True
    return _rhs_arrays(psi, mask, instance)


def _rhs_arrays(psi: np.ndarray, marked_mask: np.ndarray, instance: ProblemInstance) -> np.ndarray:
    g, h = instance.g, instance.h
    x = float(np.sum(np.abs(psi[marked_mask]) ** 2))
    gamma = strengths(x, instance).gamma_c
    dens = np.abs(psi) ** 2
    f = dens - h * dens * dens  # nonlinearity(p, h), vectorized
    out = gamma * psi.sum() + g * f * psi
    out = out + np.where(marked_mask, psi, 0.0)
    return 1j * out


def integrate_full(
    instance: ProblemInstance,
    config: Optional[IntegratorConfig] = None,
    marked: Optional[Sequence[int]] = None,
):
    """Integrate the full walk from the uniform state.

    Returns (t, x, psi) sampled on the config grid; raises NormDriftError on
    norm-tolerance violation.
    """
    validate(instance)
    if instance.n > MAX_FULL_N:
        raise DomainError(f"full-space oracle capped at n <= {MAX_FULL_N}")
    config = config or IntegratorConfig()
    state0 = FullState.uniform(instance, marked)
    mask = np.zeros(instance.n, dtype=bool)
    mask[np.fromiter(state0.marked, dtype=int)] = True

    def fun(t, psi):
        return _rhs_arrays(psi, mask, instance)

    sol = solve_ivp(
        fun,
        (0.0, config.t_max),
        state0.amplitudes,
        method="DOP853",
        rtol=config.rel_tol,
        atol=config.abs_tol,
        max_step=config.max_step,
        dense_output=True,
    )
    if not sol.success:
        raise NormDriftError(f"full-space integration failed: {sol.message}")
    t = np.arange(0.0, config.t_max + 0.5 * config.sample_dt, config.sample_dt)
    psi = sol.sol(t)
    norm = np.sum(np.abs(psi) ** 2, axis=0)
    if np.abs(norm - 1.0).max() > instance.norm_tol:
        raise NormDriftError(
            f"full-space norm drift {np.abs(norm - 1.0).max():.3e} exceeds tolerance"
        )
    x = np.sum(np.abs(psi[mask, :]) ** 2, axis=0)
    return t, x, psi


def subspace_spread(psi: np.ndarray, marked_mask: np.ndarray) -> float:
    """Largest amplitude spread within the marked and unmarked groups.

    Zero (to integration error) certifies that the state stays in the 2-D
    symmetric subspace.
    """
    spread = 0.0
    for sel in (marked_mask, ~marked_mask):
        block = psi[sel, :]
        spread = max(
            spread,
            float(np.abs(block - block[0:1, :]).max()) if block.size else 0.0,
        )
    return spread


def compare_to_subspace(
    instance: ProblemInstance, config: Optional[IntegratorConfig] = None
) -> float:
    """Max deviation in x(t) between full-space and 2-D integrations."""
    validate(instance)
    if instance.n > 1024:
        raise DomainError("subspace comparison capped at n <= 1024")
    config = config or IntegratorConfig()
    t, x_full, _ = integrate_full(instance, config)
    sol2d = _solve_2d(instance, config)
    y = sol2d.sol(t)
    x_2d = (y[0] * np.conj(y[0])).real
    return float(np.abs(x_full - x_2d).max())
