"""Log-log power-law fitting shared by analytics and experiments."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import DegenerateFit


@dataclass(frozen=True)
class FitResult:
    """Least-squares power law y = coefficient * x ** exponent."""

    exponent: float
    coefficient: float
    r_squared: float


def fit_power(xs: Sequence[float], ys: Sequence[float]) -> FitResult:
    """Least squares in log-log space. Requires >= 5 strictly positive points."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size < 5:
        raise DegenerateFit(f"need at least 5 points, got {xs.size}")
    if xs.size != ys.size:
        raise DegenerateFit(f"length mismatch: {xs.size} vs {ys.size}")
    if np.any(xs <= 0) or np.any(ys <= 0) or not np.all(np.isfinite(ys)):
        raise DegenerateFit("all values must be positive and finite for a log-log fit")
    lx, ly = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    fitted = slope * lx + intercept
    ss_res = float(np.sum((ly - fitted) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    return FitResult(exponent=float(slope), coefficient=float(np.exp(intercept)),
                     r_squared=min(1.0, r2))
