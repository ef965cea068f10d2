"""Closed-form quantities: stationary roots, critical ratio, regime
classification, time-to-probability, runtimes, and peak widths.

The two-arctangent time-to-probability formula is evaluated in complex
arithmetic throughout; the real part is the answer and the imaginary residue
is asserted small. The degenerate cases g = 0 and h = 0 fall back to the
numeric quadrature path.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from scipy.integrate import quad

from .core import (
    AmbiguousScaling,
    BranchError,
    DomainError,
    NumericalError,
    ProblemInstance,
    RegimeError,
    RegimeKind,
    RegimeLabel,
    Unreachable,
    strengths,
    validate,
)
from .fitting import FitResult, fit_power

#: dominance ratio: "a >> b" is taken to mean a/b >= DOMINANCE_RATIO
DOMINANCE_RATIO = 100.0

#: relative half-width of the boundary band around h_c
BOUNDARY_BAND = 1e-6

DEFAULT_EPSILON = 0.01


# --------------------------------------------------------------------------
# Quadratic coefficients of the time integrand denominator


@dataclass(frozen=True)
class QuadraticCoefficients:
    """Coefficients a, b, c of the stationary quadratic and the derived
    combinations Delta = b^2 - 4ac, Sigma = a + b + c,
    xi = 2ak + 2cN + b(N+k), stored in their factored (stable) forms."""

    a: float
    b: float
    c: float
    delta: float
    sigma: float
    xi: float


def quadratic_coefficients(instance: ProblemInstance) -> QuadraticCoefficients:
    n, k, g, h = instance.n, instance.k, float(instance.g), float(instance.h)
    a = -g * h * n * (n - 2 * k)
    b = g * k * (n * n - k * n - 2 * h * k)
    c = -g * k * k * (n - k - h) + k * k * (n - k) ** 2
    delta = k * k * (n - k) ** 2 * (g * g * (n - 2 * h) ** 2 + 4 * g * h * n * (n - 2 * k))
    sigma = (n - k) ** 2 * (k * k + g * (k - h))
    xi = k * (n - k) ** 2 * (2 * n * k + g * (n - 2 * h))
    return QuadraticCoefficients(a, b, c, delta, sigma, xi)


# --------------------------------------------------------------------------
# Stationary roots and critical ratio


@dataclass(frozen=True)
class StationaryRoots:
    """Roots of the stationary quadratic where the jumping rate vanishes."""

    x_plus: float
    x_minus: float
    x_plus_large_n: float
    x_minus_large_n: float


def stationary_roots(instance: ProblemInstance) -> StationaryRoots:
    """Exact and leading-order stationary success probabilities."""
    validate(instance)
    n, k, g, h = instance.n, instance.k, float(instance.g), float(instance.h)
    if g <= 0 or h <= 0:
        raise DomainError("stationary roots require g > 0 and h > 0")
    disc = (n - 2 * h) ** 2 + 4 * h * n * (n - 2 * k) / g
    if disc <= 0:
        raise NumericalError(f"stationary quadratic discriminant {disc} <= 0")
    root = k * (n - k) * math.sqrt(disc)
    lead = k * n * (n - k) - 2 * h * k * k
    denom = 2 * h * n * (n - 2 * k)
    ratio = math.sqrt((g + 4 * h) / g)
    return StationaryRoots(
        x_plus=(lead + root) / denom,
        x_minus=(lead - root) / denom,
        x_plus_large_n=(1 + ratio) * k / (2 * h),
        x_minus_large_n=(1 - ratio) * k / (2 * h),
    )


def critical_h(k: int, g: float) -> float:
    """Quintic-to-cubic ratio separating periodic peaks from plateaus."""
    if k < 1:
        raise DomainError(f"k < 1 unsupported, got k={k}")
    if g < 0:
        raise DomainError(f"g must be non-negative, got g={g}")
    if g == 0:
        return math.inf
    return k * (1.0 + k / g)


# --------------------------------------------------------------------------
# Classification


class ScalingClass(Enum):
    """Asymptotic runtime classes for the peak regimes (h effectively <= k)."""

    CASE1 = ("sqrt(N/g)", "h = k, g >> h")
    CASE2 = ("sqrt(N/k)", "h = k, g << h")
    CASE3 = ("sqrt(N/g)", "h < k, g >> h, g >> k")
    CASE4 = ("sqrt(N/k)", "h < k, g >> h, g << k")
    CASE5 = ("sqrt(N/k)", "h < k, g << h")
    LINEAR = ("sqrt(N/k)", "g = 0")

    @property
    def formula(self) -> str:
        return self.value[0]

    @property
    def condition(self) -> str:
        return self.value[1]


def _dominates(a: float, b: float, ratio: float) -> bool:
    if b == 0:
        return a > 0
    return a / b >= ratio


def regime_label(instance: ProblemInstance) -> RegimeLabel:
    """Sharp-peak / wide-peak / plateau classification from h against k, h_c."""
    validate(instance)
    k, g, h = instance.k, float(instance.g), float(instance.h)
    h_c = critical_h(k, g)
    boundary = None
    if math.isfinite(h_c) and h_c > 0 and abs(h - h_c) / h_c < BOUNDARY_BAND:
        boundary = f"h within {BOUNDARY_BAND:.0e} relative of h_c={h_c!r}"
    if h >= h_c:
        kind = RegimeKind.PLATEAU
    elif h < k:
        kind = RegimeKind.SHARP_PEAK
    else:
        kind = RegimeKind.WIDE_PEAK
    return RegimeLabel(kind, boundary)


def classify(
    instance: ProblemInstance, dominance_ratio: float = DOMINANCE_RATIO
) -> tuple[RegimeLabel, ScalingClass]:
    """Regime label plus the asymptotic runtime class.

    Raises AmbiguousScaling when neither parameter dominates the other at the
    configured ratio. For h > k the h = k class is reused: the wide peak (or
    plateau cliff) is already near its top at the h = k runtime.
    """
    label = regime_label(instance)
    k, g, h = instance.k, float(instance.g), float(instance.h)

    if g == 0:
        return label, ScalingClass.LINEAR

    if h >= k:
        # reuse the h = k classes; compare g against h = k
        if _dominates(g, k, dominance_ratio):
            return label, ScalingClass.CASE1
        if _dominates(k, g, dominance_ratio):
            return label, ScalingClass.CASE2
        raise AmbiguousScaling(
            f"g={g} vs k={k}: no ratio >= {dominance_ratio}, class undecided"
        )
    # h < k
    if _dominates(g, h, dominance_ratio):
        if _dominates(g, k, dominance_ratio):
            return label, ScalingClass.CASE3
        if _dominates(k, g, dominance_ratio):
            return label, ScalingClass.CASE4
        raise AmbiguousScaling(
            f"g={g} vs k={k}: no ratio >= {dominance_ratio}, class undecided"
        )
    if _dominates(h, g, dominance_ratio):
        return label, ScalingClass.CASE5
    raise AmbiguousScaling(
        f"g={g} vs h={h}: no ratio >= {dominance_ratio}, class undecided"
    )


# --------------------------------------------------------------------------
# Time to probability: numeric quadrature (oracle path)


def quadrature_time(instance: ProblemInstance, x: float) -> float:
    """Adaptive quadrature of the time-to-probability integral.

    Uses the substitution x' = (1+k/n)/2 + (1-k/n)/2 * sin(phi), which removes
    the inverse-square-root endpoint singularities exactly; the remaining
    integrand is 1/(1 + g (f_alpha - f_beta)), smooth on the open interval.
    """
    validate(instance)
    n, k = instance.n, instance.k
    kappa = k / n
    if not (kappa < x <= 1.0):
        raise DomainError(f"x={x} outside (k/n, 1]")

    def integrand(phi):
        xp = 0.5 * (1 + kappa) + 0.5 * (1 - kappa) * math.sin(phi)
        s = strengths(xp, instance)
        return 1.0 / (1.0 + instance.g * (s.f_alpha - s.f_beta))

    arg = (2 * x - 1 - kappa) / (1 - kappa)
    phi_hi = math.asin(max(-1.0, min(1.0, arg)))
    val, err = quad(integrand, -math.pi / 2, phi_hi, epsabs=1e-13, epsrel=1e-12,
                    limit=400)
    if not math.isfinite(val):
        raise NumericalError("quadrature diverged")
    return 0.5 * math.sqrt(n / k) * val


# --------------------------------------------------------------------------
# Time to probability: closed form


def _closed_form_pieces(instance: ProblemInstance):
    """Stable building blocks of the two-arctangent formula.

    The denominator xi - sqrt(Delta)(N-k) suffers catastrophic cancellation
    for g >> k; it is rationalized exactly against Sigma:
        xi - sqrt(Delta)(N-k) = 4 k N^2 Sigma / (2Nk + g(N-2h) + sqrt(...)).
    """
    n, k, g, h = instance.n, instance.k, float(instance.g), float(instance.h)
    q = quadratic_coefficients(instance)
    root = math.sqrt(g * g * (n - 2 * h) ** 2 + 4 * g * h * n * (n - 2 * k))
    sqrt_delta = k * (n - k) * root
    bracket_plus = 2 * n * k + g * (n - 2 * h) + root
    d_plus = k * (n - k) ** 2 * bracket_plus
    d_minus = 4.0 * k * n * n * q.sigma / bracket_plus
    # numerators, in the factored form 2a+b = g(N-k)(kN - 2h(N-k))
    base = g * (n - k) * (k * n - 2 * h * (n - k))
    num_minus = base + sqrt_delta  # 2a + b + sqrt(Delta)
    num_plus = -base + sqrt_delta  # -2a - b + sqrt(Delta)
    prefactor = (
        n * k * k * (n - k) ** 2 / (2.0 * math.sqrt(k))
    ) * cmath.sqrt(2.0 / (complex(q.sigma) * q.delta))
    return q, prefactor, num_minus, num_plus, d_minus, d_plus


def _arctan_terms(instance, r, pieces):
    q, prefactor, num_minus, num_plus, d_minus, d_plus = pieces
    a_minus = cmath.sqrt(2.0 * q.sigma / complex(d_minus))
    a_plus = cmath.sqrt(2.0 * q.sigma / complex(d_plus))
    if r is None:  # x = 1: both arctangents are pi/2
        at_minus = at_plus = math.pi / 2
    else:
        at_minus = _catan(a_minus * r)
        at_plus = _catan(a_plus * r)
    return prefactor * (
        num_minus / cmath.sqrt(complex(d_minus)) * at_minus
        + num_plus / cmath.sqrt(complex(d_plus)) * at_plus
    )


def _catan(z: complex) -> complex:
    """Principal-branch complex arctangent via logarithms."""
    return (1j / 2.0) * (cmath.log(1 - 1j * z) - cmath.log(1 + 1j * z))


def _real_part(t: complex, context: str) -> float:
    scale = max(1.0, abs(t.real))
    if abs(t.imag) > 1e-8 * scale:
        raise BranchError(f"{context}: imaginary residue {t.imag:.3e}")
    return t.real


def analytic_time(instance: ProblemInstance, x: float) -> float:
    """Closed-form time for the success probability to reach x.

    Valid for g > 0, h > 0; the g = 0 / h = 0 degenerate coefficients are
    handled by the quadrature path instead.
    """
    validate(instance)
    n, k, g, h = instance.n, instance.k, float(instance.g), float(instance.h)
    if g == 0 or h == 0:
        return quadrature_time(instance, x)
    if not (k / n < x <= 1.0):
        raise DomainError(f"x={x} outside (k/n, 1]")
    h_c = critical_h(k, g)
    if h >= h_c:
        x_plus = stationary_roots(instance).x_plus
        if x >= x_plus:
            raise Unreachable(
                f"x={x} at or above the plateau height x_plus={x_plus:.6f}"
            )
    pieces = _closed_form_pieces(instance)
    r = None if x == 1.0 else math.sqrt((n * x - k) / (1.0 - x))
    t = _arctan_terms(instance, r, pieces)
    return _real_part(t, f"analytic_time(x={x})")


def runtime_peak(instance: ProblemInstance) -> float:
    """Time to reach success probability 1 (peak regimes only)."""
    validate(instance)
    k, g, h = instance.k, float(instance.g), float(instance.h)
    if h >= critical_h(k, g):
        raise RegimeError(f"h={h} >= h_c: runtime to x=1 diverges in the plateau regime")
    if g == 0 or h == 0:
        return quadrature_time(instance, 1.0)
    pieces = _closed_form_pieces(instance)
    t = _arctan_terms(instance, None, pieces)
    return _real_part(t, "runtime_peak")


def time_to_half_plateau(instance: ProblemInstance) -> float:
    """Time to reach half the exact plateau height x_plus / 2.

    The large-N shorthand for the target is k/(2h); the exact root is used.
    """
    validate(instance)
    k, g, h = instance.k, float(instance.g), float(instance.h)
    if h < critical_h(k, g):
        raise RegimeError(f"h={h} < h_c: no plateau in the peak regime")
    x_half = stationary_roots(instance).x_plus / 2.0
    return analytic_time(instance, x_half)


# --------------------------------------------------------------------------
# Peak widths


def peak_width(instance: ProblemInstance, epsilon: float = DEFAULT_EPSILON) -> float:
    """Closed-form width of the success-probability peak at height 1 - epsilon.

    Returns math.inf in the plateau regime (h >= h_c), where the width around
    x = 1 diverges.
    """
    validate(instance)
    if not (0.0 < epsilon < 1.0):
        raise DomainError(f"epsilon={epsilon} outside (0, 1)")
    n, k, g, h = instance.n, instance.k, float(instance.g), float(instance.h)
    if h >= critical_h(k, g):
        return math.inf
    denom = 1.0 + (g / k) * (1.0 - h / k)
    return 2.0 * n / denom * math.sqrt(epsilon / (k * (n - k)))


def width_scaling(
    instances: Sequence[ProblemInstance],
    axis_values: Sequence[float],
    epsilon: float = DEFAULT_EPSILON,
) -> FitResult:
    """Log-log power-law fit of the closed-form peak width across a family."""
    widths = [peak_width(inst, epsilon) for inst in instances]
    return fit_power(axis_values, widths)


# --------------------------------------------------------------------------
# Summary


@dataclass(frozen=True)
class AnalyticSummary:
    """All closed-form quantities for one instance."""

    h_c: float
    regime: RegimeLabel
    scaling_class: Optional[ScalingClass]
    x_plus: Optional[float] = None
    x_minus: Optional[float] = None
    x_plus_large_n: Optional[float] = None
    x_minus_large_n: Optional[float] = None
    plateau_height: Optional[float] = None
    width: Optional[float] = None
    t_star: Optional[float] = None
    t_half: Optional[float] = None
    epsilon: float = DEFAULT_EPSILON
    scaling_note: Optional[str] = None


def summarize(instance: ProblemInstance, epsilon: float = DEFAULT_EPSILON) -> AnalyticSummary:
    """Evaluate every applicable closed-form quantity for the instance.

    Near the critical ratio (boundary_note set) both the diverging peak
    runtime and the plateau quantities are reported.
    """
    validate(instance)
    k, g, h = instance.k, float(instance.g), float(instance.h)
    h_c = critical_h(k, g)
    regime = regime_label(instance)
    try:
        _, scaling = classify(instance)
        scaling_note = None
    except AmbiguousScaling as exc:
        scaling = None
        scaling_note = str(exc)

    roots = None
    if g > 0 and h > 0:
        roots = stationary_roots(instance)

    plateau = regime.kind is RegimeKind.PLATEAU
    near_boundary = regime.boundary_note is not None

    t_star = None
    width = None
    if not plateau or near_boundary:
        if h < h_c:
            t_star = runtime_peak(instance)
            width = peak_width(instance, epsilon)
        else:
            width = math.inf
    t_half = None
    plateau_height = None
    if plateau or near_boundary:
        if roots is not None and h >= h_c:
            plateau_height = k / h
            t_half = time_to_half_plateau(instance)
        if plateau:
            width = math.inf

    return AnalyticSummary(
        h_c=h_c,
        regime=regime,
        scaling_class=scaling,
        x_plus=roots.x_plus if roots else None,
        x_minus=roots.x_minus if roots else None,
        x_plus_large_n=roots.x_plus_large_n if roots else None,
        x_minus_large_n=roots.x_minus_large_n if roots else None,
        plateau_height=plateau_height,
        width=width,
        t_star=t_star,
        t_half=t_half,
        epsilon=epsilon,
        scaling_note=scaling_note,
    )
