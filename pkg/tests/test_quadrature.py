import math

import numpy as np
import pytest

from powersde.quadrature import (
    QuadratureError,
    adaptive_simpson,
    build_cumulative,
)


def test_polynomial_integral():
    v = adaptive_simpson(lambda x: x * x, 0.0, 1.0, 1e-12)
    assert v == pytest.approx(1.0 / 3.0, abs=1e-11)


def test_oscillatory_integral():
    v = adaptive_simpson(np.sin, 0.0, math.pi, 1e-12)
    assert v == pytest.approx(2.0, abs=1e-10)


def test_reversed_bounds_negate():
    a = adaptive_simpson(lambda x: x, 0.0, 2.0, 1e-12)
    b = adaptive_simpson(lambda x: x, 2.0, 0.0, 1e-12)
    assert b == pytest.approx(-a)


def test_depth_exhaustion_raises():
    nasty = lambda x: math.sin(1.0 / (abs(x) + 1e-14))
    with pytest.raises(QuadratureError):
        adaptive_simpson(nasty, 0.0, 1.0, 1e-14, max_depth=3)


class TestCumulativeTable:
    def setup_method(self):
        theta = lambda t: 1.0 + 0.5 * np.sin(2.0 * math.pi * t)
        self.table = build_cumulative(lambda t: theta(t) ** 2, 0.0, 1.0)

    def test_total_matches_closed_form(self):
        # int_0^1 (1 + 0.5 sin(2 pi t))^2 dt = 1 + 0.25/2 = 1.125
        assert self.table.total == pytest.approx(1.125, abs=1e-10)

    def test_forward_at_origin_and_end(self):
        assert self.table.forward(0.0) == 0.0
        assert self.table.forward(1.0) == pytest.approx(self.table.total)

    def test_forward_is_monotone(self):
        ts = np.linspace(0.0, 1.0, 200)
        vals = [self.table.forward(t) for t in ts]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_inverse_round_trip(self):
        rng = np.random.default_rng(8)
        for t in rng.uniform(0.0, 1.0, 50):
            y = self.table.forward(t)
            t_back = self.table.inverse(y, tol=1e-12)
            assert t_back == pytest.approx(t, abs=1e-9)

    def test_inverse_rejects_values_outside_image(self):
        with pytest.raises(ValueError):
            self.table.inverse(-0.5, tol=1e-10)
        with pytest.raises(ValueError):
            self.table.inverse(self.table.total * 1.5, tol=1e-10)


def test_nonuniform_density_round_trip():
    table = build_cumulative(lambda t: np.exp(3.0 * t), 0.0, 1.0)
    expected = (math.exp(3.0) - 1.0) / 3.0
    assert table.total == pytest.approx(expected, rel=1e-10)
    for t in (0.1, 0.5, 0.93):
        y = table.forward(t)
        assert table.inverse(y, tol=1e-12) == pytest.approx(t, abs=1e-9)
