"""Deterministic quadrature helpers: adaptive Simpson and monotone inversion.

Everything here is fixed-rule and tolerance-driven so that two runs, or two
implementations following the same description, produce the same tables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PowerSdeError

__all__ = ["QuadratureError", "adaptive_simpson", "CumulativeTable", "build_cumulative"]


class QuadratureError(PowerSdeError):
    """Integrand misbehaved (non-finite values or no convergence)."""


def _simpson(fa, fm, fb, h):
    return (fa + 4.0 * fm + fb) * h / 6.0


def adaptive_simpson(f, a, b, tol, max_depth=50):
    """Adaptive Simpson integral of f over [a, b] to absolute tolerance tol.

    Classic bisection with Richardson correction; deterministic evaluation
    order.  Non-finite integrand values raise QuadratureError.
    """
    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    if not (np.isfinite(fa) and np.isfinite(fm) and np.isfinite(fb)):
        raise QuadratureError(f"non-finite integrand on [{a}, {b}]")
    whole = _simpson(fa, fm, fb, b - a)
    return _adaptive(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _adaptive(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    if not (np.isfinite(flm) and np.isfinite(frm)):
        raise QuadratureError(f"non-finite integrand near [{a}, {b}]")
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    delta = left + right - whole
    if depth <= 0:
        raise QuadratureError(f"adaptive refinement exhausted on [{a}, {b}]")
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return _adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + _adaptive(
        f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1
    )


@dataclass(frozen=True)
class CumulativeTable:
    """Strictly increasing cumulative integral F(x) = F(x_0) + int_{x_0}^x f.

    xs are uniform table nodes, ys the cumulative values.  Evaluation between
    nodes re-integrates the stored integrand from the bracketing node, so
    accuracy between nodes matches the table itself.
    """

    xs: np.ndarray
    ys: np.ndarray
    integrand: object
    seg_tol: float

    def __post_init__(self):
        if len(self.xs) != len(self.ys) or len(self.xs) < 2:
            raise ValueError("table needs matching xs/ys with at least 2 nodes")
        if np.any(np.diff(self.ys) <= 0.0):
            raise ValueError("cumulative values must be strictly increasing")
        self.xs.setflags(write=False)
        self.ys.setflags(write=False)

    @property
    def span(self) -> tuple[float, float]:
        return float(self.xs[0]), float(self.xs[-1])

    @property
    def total(self) -> float:
        return float(self.ys[-1])

    def forward(self, x: float) -> float:
        lo, hi = self.span
        if not lo <= x <= hi:
            raise ValueError(f"{x} outside [{lo}, {hi}]")
        i = min(int(np.searchsorted(self.xs, x, side="right")) - 1, len(self.xs) - 2)
        i = max(i, 0)
        if x == self.xs[i]:
            return float(self.ys[i])
        return float(self.ys[i]) + adaptive_simpson(self.integrand, float(self.xs[i]), x, self.seg_tol)

    def inverse(self, y: float, tol: float) -> float:
        """Solve F(x) = y by bracketed Newton with bisection fallback."""
        if not self.ys[0] <= y <= self.ys[-1]:
            raise ValueError(f"{y} outside cumulative range [{self.ys[0]}, {self.ys[-1]}]")
        i = min(int(np.searchsorted(self.ys, y, side="right")) - 1, len(self.ys) - 2)
        i = max(i, 0)
        lo, hi = float(self.xs[i]), float(self.xs[i + 1])
        flo, fhi = float(self.ys[i]), float(self.ys[i + 1])
        # linear seed, then Newton; derivative is the integrand itself
        x = lo + (hi - lo) * (y - flo) / (fhi - flo)
        for _ in range(100):
            fx = self.forward(x)
            err = fx - y
            d = self.integrand(x)
            if hi - lo <= tol or (d > 0.0 and abs(err) <= d * tol):
                break
            if err > 0.0:
                hi = x
            else:
                lo = x
            if d > 0.0:
                step = x - err / d
                x = step if lo < step < hi else 0.5 * (lo + hi)
            else:
                x = 0.5 * (lo + hi)
        return min(max(x, self.span[0]), self.span[1])


def build_cumulative(f, a, b, rel_tol=1e-12, segments=1024) -> CumulativeTable:
    """Tabulate F(x) = int_a^x f on uniform segments of [a, b].

    Each segment is integrated adaptively to an absolute tolerance that keeps
    the accumulated error below rel_tol times a rough estimate of the total.
    f must be positive (the cumulative must be strictly increasing).
    """
    xs = np.linspace(a, b, segments + 1)
    rough = abs(adaptive_simpson(f, a, b, 1e-6 * max(abs(b - a), 1.0)))
    seg_tol = rel_tol * max(rough, 1e-300) / segments
    ys = np.empty(segments + 1)
    ys[0] = 0.0
    for i in range(segments):
        ys[i + 1] = ys[i] + adaptive_simpson(f, float(xs[i]), float(xs[i + 1]), seg_tol)
    return CumulativeTable(xs=xs, ys=ys, integrand=f, seg_tol=seg_tol)
