"""Elementary power inequalities used throughout the error analysis.

For 1/2 <= gamma < 1 the map u -> u^gamma is only gamma-Hoelder at the origin,
but away from zero it is locally Lipschitz.  The bound exposed here
interpolates between the two regimes:

    |x^gamma - y^gamma| <= 2 x^{-(1-gamma) beta} |x - y|^{beta + gamma (1 - beta)}

for x > 0, y >= 0 and beta in (0, 1].  beta = 1 is the locally-Lipschitz
endpoint; as beta decreases the right side trades smoothness in |x - y| for a
weaker singularity in x.  The concavity bound |x^gamma - y^gamma| <= |x-y|^gamma
holds for all x, y >= 0 and is exposed separately.

Both helpers return (lhs, rhs) pairs so that property tests can assert
lhs <= rhs directly over randomized sweeps.
"""

from __future__ import annotations

import numpy as np

__all__ = ["power_gap_bound", "concave_power_gap"]


def _check_domain(x, y, gamma, beta):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if np.any(x <= 0.0):
        raise ValueError("x must be positive")
    if np.any(y < 0.0):
        raise ValueError("y must be nonnegative")
    if np.any((gamma < 0.5) | (gamma >= 1.0)):
        raise ValueError("gamma must lie in [1/2, 1)")
    if np.any((beta <= 0.0) | (beta > 1.0)):
        raise ValueError("beta must lie in (0, 1]")
    return x, y, gamma, beta


def power_gap_bound(x, y, gamma, beta=1.0):
    """Both sides of the interpolated power-gap inequality.

    Parameters broadcast against each other.  Returns (lhs, rhs) with

        lhs = |x^gamma - y^gamma|
        rhs = 2 x^{-(1-gamma) beta} |x - y|^{beta + gamma (1 - beta)}

    Scalars in, scalars out.
    """
    x, y, gamma, beta = _check_domain(x, y, gamma, beta)
    lhs = np.abs(x**gamma - y**gamma)
    expo = beta + gamma * (1.0 - beta)
    rhs = 2.0 * x ** (-(1.0 - gamma) * beta) * np.abs(x - y) ** expo
    if lhs.ndim == 0:
        return float(lhs), float(rhs)
    return lhs, rhs


def concave_power_gap(x, y, gamma):
    """(lhs, rhs) for the subadditivity bound |x^g - y^g| <= |x - y|^g, x, y >= 0."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    if np.any(x < 0.0) or np.any(y < 0.0):
        raise ValueError("x and y must be nonnegative")
    if np.any((gamma < 0.5) | (gamma >= 1.0)):
        raise ValueError("gamma must lie in [1/2, 1)")
    lhs = np.abs(x**gamma - y**gamma)
    rhs = np.abs(x - y) ** gamma
    if lhs.ndim == 0:
        return float(lhs), float(rhs)
    return lhs, rhs
