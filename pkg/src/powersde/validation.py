"""Sampling-based falsification of coefficient assumptions.

A finite sample can refute a claimed Lipschitz or Hoelder constant but never
certify one, so every report is labeled heuristic.  Declared constants are
checked with a fixed relative slack tol_rel, since observed ratios sit a few
ulps above the analytic constant whenever the supremum is attained.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .models import CoefficientFn

__all__ = ["ValidationReport", "validate_assumptions"]

TOL_REL = 1e-9


@dataclass(frozen=True)
class ValidationReport:
    """Observed regularity ratios for one coefficient on one sampling box."""

    holder_ratio: float
    lipschitz_ratio: float
    min_value: float
    holder_ok: Optional[bool]
    lipschitz_ok: Optional[bool]
    nonnegative_ok: Optional[bool]
    n_samples: int
    heuristic: bool = True

    @property
    def all_declared_ok(self) -> bool:
        return all(v is not False for v in (self.holder_ok, self.lipschitz_ok, self.nonnegative_ok))


def validate_assumptions(
    f: CoefficientFn,
    box: tuple[tuple[float, float], tuple[float, float]],
    n_samples: int = 20000,
    seed: int = 0,
) -> ValidationReport:
    """Sample the two difference ratios of f on box = ((t_lo, t_hi), (x_lo, x_hi)).

    Reports the largest observed values of

        |f(t,x) - f(s,x)| / ((1 + |x|) |t - s|^{1/2})     (time regularity)
        |f(t,x) - f(t,y)| / |x - y|                       (space regularity)

    together with the smallest sampled value of f.  When the coefficient's
    meta declares constants (or nonnegativity), each observed quantity is
    compared against its claim; None means nothing was declared.
    """
    (t_lo, t_hi), (x_lo, x_hi) = box
    if not (t_lo < t_hi and x_lo < x_hi):
        raise ValueError("sampling box must have positive extent")
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")

    rng = np.random.default_rng(seed)
    t = rng.uniform(t_lo, t_hi, n_samples)
    s = rng.uniform(t_lo, t_hi, n_samples)
    x = rng.uniform(x_lo, x_hi, n_samples)
    y = rng.uniform(x_lo, x_hi, n_samples)

    f_tx = np.asarray(f(t, x), dtype=float)
    f_sx = np.asarray(f(s, x), dtype=float)
    f_ty = np.asarray(f(t, y), dtype=float)

    dt = np.abs(t - s)
    mask_t = dt > 0.0
    holder = np.abs(f_tx - f_sx)[mask_t] / ((1.0 + np.abs(x[mask_t])) * np.sqrt(dt[mask_t]))
    holder_ratio = float(holder.max()) if holder.size else 0.0

    dx = np.abs(x - y)
    mask_x = dx > 0.0
    lipschitz = np.abs(f_tx - f_ty)[mask_x] / dx[mask_x]
    lipschitz_ratio = float(lipschitz.max()) if lipschitz.size else 0.0

    min_value = float(min(f_tx.min(), f_sx.min(), f_ty.min()))

    meta = f.meta
    holder_ok = None
    if meta.holder_half_K is not None:
        holder_ok = holder_ratio <= meta.holder_half_K * (1.0 + TOL_REL)
    lipschitz_ok = None
    if meta.lipschitz_K is not None:
        lipschitz_ok = lipschitz_ratio <= meta.lipschitz_K * (1.0 + TOL_REL)
    nonnegative_ok = None
    if meta.nonnegative:
        nonnegative_ok = min_value >= 0.0

    return ValidationReport(
        holder_ratio=holder_ratio,
        lipschitz_ratio=lipschitz_ratio,
        min_value=min_value,
        holder_ok=holder_ok,
        lipschitz_ok=lipschitz_ok,
        nonnegative_ok=nonnegative_ok,
        n_samples=n_samples,
    )
