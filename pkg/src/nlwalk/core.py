"""Domain types and nonlinearity primitives shared by the whole package.

Everything here is a plain value object: instances are immutable and safe to
share between processes in a sweep.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


# --------------------------------------------------------------------------
# Errors


class DomainError(ValueError):
    """A problem instance (or argument) is outside the supported domain."""


class NumericalError(RuntimeError):
    """A numerical routine failed to stay inside its validated regime."""


class NormDriftError(NumericalError):
    """Integrator step control failed to conserve the state norm."""


class HorizonError(NumericalError):
    """A requested event was not found before the integration horizon."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class Unreachable(ValueError):
    """The requested success probability is above the peak or plateau."""


class RegimeError(ValueError):
    """A quantity was requested in a regime where it is not defined."""


class BranchError(NumericalError):
    """Complex evaluation left a nonzero imaginary residue (branch-cut bug)."""


class AmbiguousScaling(ValueError):
    """No dominance ratio is decisive; refusing to guess an asymptotic class."""


class DegenerateFit(ValueError):
    """Power-law fit input is unusable (nonpositive values or too few points)."""


# --------------------------------------------------------------------------
# Problem instance


@dataclass(frozen=True)
class ProblemInstance:
    """Search configuration: complete graph size, marked count, nonlinearity.

    n         -- number of vertices (integer >= 3)
    k         -- number of marked vertices (1 <= k, 2k < n)
    g         -- nonlinear coefficient (>= 0, dimensionless, hbar = 1)
    h         -- quintic-to-cubic ratio (>= 0)
    norm_tol  -- allowed |norm - 1| drift along trajectories
    """

    n: int
    k: int
    g: float
    h: float
    norm_tol: float = 1e-9


def validate(instance: ProblemInstance) -> ProblemInstance:
    """Check all instance invariants, returning the instance unchanged.

    Raises DomainError naming the violated constraint.
    """
    n, k = instance.n, instance.k
    if int(n) != n or int(k) != k:
        raise DomainError("n and k must be integers")
    if n < 3:
        raise DomainError(f"n >= 3 required, got n={n}")
    if k < 1:
        raise DomainError(f"k < 1 unsupported, got k={k}")
    if 2 * k >= n:
        raise DomainError(f"2k >= n unsupported (k={k}, n={n})")
    for name in ("g", "h"):
        value = getattr(instance, name)
        if not math.isfinite(value) or value < 0:
            raise DomainError(f"{name} must be a finite non-negative real, got {value}")
    if not (instance.norm_tol > 0):
        raise DomainError(f"norm_tol must be positive, got {instance.norm_tol}")
    return instance


# --------------------------------------------------------------------------
# Subspace state


@dataclass(frozen=True)
class SubspaceState:
    """Complex amplitudes of the marked (alpha) and unmarked (beta) subspaces."""

    alpha: complex
    beta: complex

    @property
    def x(self) -> float:
        """Success probability |alpha|^2."""
        return abs(self.alpha) ** 2

    @property
    def norm_err(self) -> float:
        return abs(abs(self.alpha) ** 2 + abs(self.beta) ** 2 - 1.0)

    @staticmethod
    def uniform(instance: ProblemInstance) -> "SubspaceState":
        """Uniform superposition over all vertices."""
        n, k = instance.n, instance.k
        return SubspaceState(complex(math.sqrt(k / n)), complex(math.sqrt((n - k) / n)))


# --------------------------------------------------------------------------
# Nonlinearity primitives


def nonlinearity(p: float, h: float) -> float:
    """Cubic-quintic self-potential profile: p - h*p**2 at vertex density p."""
    return p - h * p * p


@dataclass(frozen=True)
class NonlinearStrengths:
    """Per-vertex self-potential strengths and the critical jumping rate."""

    f_alpha: float
    f_beta: float
    gamma_c: float


def strengths(x: float, instance: ProblemInstance) -> NonlinearStrengths:
    """Self-potential strengths at success probability x, and gamma_c.

    f_alpha is evaluated at the per-vertex density x/k of a marked vertex,
    f_beta at (1-x)/(n-k) of an unmarked one.
    """
    n, k, g, h = instance.n, instance.k, instance.g, instance.h
    f_alpha = nonlinearity(x / k, h)
    f_beta = nonlinearity((1.0 - x) / (n - k), h)
    gamma_c = (1.0 + g * (f_alpha - f_beta)) / n
    return NonlinearStrengths(f_alpha, f_beta, gamma_c)


# --------------------------------------------------------------------------
# Regimes


class RegimeKind(Enum):
    SHARP_PEAK = "SharpPeak"
    WIDE_PEAK = "WidePeak"
    PLATEAU = "Plateau"


@dataclass(frozen=True)
class RegimeLabel:
    """Behavior classification, with a note when h sits on the critical ratio."""

    kind: RegimeKind
    boundary_note: Optional[str] = None


# --------------------------------------------------------------------------
# Trajectories and events


class EventKind(Enum):
    FIRST_PEAK = "FirstPeak"
    CROSSING_UP = "CrossingUp"
    HALF_PLATEAU = "HalfPlateau"
    PLATEAU_DETECTED = "PlateauDetected"


@dataclass(frozen=True)
class EventRecord:
    kind: EventKind
    t: float
    x: float
    x_target: Optional[float] = None


@dataclass(frozen=True)
class Trajectory:
    """Sampled time series of the 2-D (or reduced full-space) evolution.

    Arrays are aligned: t[i] is the sample time, alpha/beta the amplitudes,
    x the success probability, gamma the jumping rate, norm_err = ||psi|^2-1|.
    """

    t: "object"  # np.ndarray, kept loose to avoid importing numpy here
    alpha: "object"
    beta: "object"
    x: "object"
    gamma: "object"
    norm_err: "object"
    events: tuple = field(default_factory=tuple)

    def event(self, kind: EventKind) -> Optional[EventRecord]:
        """First recorded event of the given kind, or None."""
        for ev in self.events:
            if ev.kind is kind:
                return ev
        return None
