"""Nonlinear continuous-time quantum-walk search on the complete graph.

Simulation of the cubic-quintic walk in its two-dimensional symmetric
subspace, a full-space brute-force oracle, closed-form analytics
(stationary roots, regimes, time-to-probability, runtimes, widths),
sweep/figure dataset generation, and physical-resource estimates.
"""

from .core import (
    AmbiguousScaling,
    BranchError,
    DegenerateFit,
    DomainError,
    EventKind,
    EventRecord,
    HorizonError,
    NormDriftError,
    NumericalError,
    ProblemInstance,
    RegimeError,
    RegimeKind,
    RegimeLabel,
    SubspaceState,
    Trajectory,
    Unreachable,
    nonlinearity,
    strengths,
    validate,
)
from .dynamics import IntegratorConfig, integrate, rhs, time_to_probability_numeric, x_rate
from .analytics import (
    AnalyticSummary,
    ScalingClass,
    StationaryRoots,
    analytic_time,
    classify,
    critical_h,
    peak_width,
    quadrature_time,
    regime_label,
    runtime_peak,
    stationary_roots,
    summarize,
    time_to_half_plateau,
    width_scaling,
)
from .fitting import FitResult, fit_power
from .fullspace import FullState, compare_to_subspace, full_rhs, integrate_full
from .experiments import (
    ResourceEstimate,
    SweepResult,
    SweepSpec,
    figure_dataset,
    figure_ids,
    resources,
    run_sweep,
)

__version__ = "0.1.0"
