import numpy as np
import pytest

from powersde.brownian import derive_seed
from powersde.errors import HypothesisError, SimulationAbort
from powersde.models import CoefficientFn, CoefficientMeta, PrototypeParams, SdeModel, make_prototype
from powersde.montecarlo import (
    ComparisonReport,
    ExperimentConfig,
    MomentCondition,
    comparison_check,
    estimate_inverse_moment,
    estimate_strong_error,
    timechange_check,
)


def _const(v):
    return CoefficientFn(
        lambda t, x: v + 0.0 * np.asarray(x, dtype=float),
        CoefficientMeta(lipschitz_K=0.0, holder_half_K=0.0, nonnegative=v >= 0.0),
    )


def _neg_x():
    return CoefficientFn(
        lambda t, x: -np.asarray(x, dtype=float),
        CoefficientMeta(lipschitz_K=1.0, holder_half_K=0.0),
    )


def small_config(model, **kw):
    defaults = dict(
        model=model,
        horizon=1.0,
        levels=(4, 5, 6),
        ref_level=10,
        paths=256,
        master_seed=11,
        batch_size=64,
    )
    defaults.update(kw)
    return ExperimentConfig(**defaults)


class TestExperimentConfig:
    def test_gap_rule(self, cir_model):
        with pytest.raises(ValueError, match="ref_level"):
            ExperimentConfig(
                model=cir_model, horizon=1.0, levels=(4, 9), ref_level=10, paths=10, master_seed=0
            )

    def test_levels_are_sorted_and_deduplicated(self, cir_model):
        cfg = ExperimentConfig(
            model=cir_model, horizon=1.0, levels=(6, 4, 6, 5), ref_level=10, paths=10, master_seed=0
        )
        assert cfg.levels == (4, 5, 6)

    def test_memory_guard(self, cir_model):
        with pytest.raises(ValueError, match="memory guard"):
            ExperimentConfig(
                model=cir_model, horizon=1.0, levels=(4,), ref_level=27, paths=10, master_seed=0
            )

    @pytest.mark.parametrize(
        "field,value",
        [("paths", 0), ("batch_size", 0), ("horizon", 0.0), ("on_explosion", "ignore"), ("error_metric", "L2")],
    )
    def test_invalid_fields(self, cir_model, field, value):
        kw = dict(
            model=cir_model, horizon=1.0, levels=(4,), ref_level=10, paths=10, master_seed=0
        )
        kw[field] = value
        with pytest.raises(ValueError):
            ExperimentConfig(**kw)


class TestStrongError:
    def test_worker_count_does_not_change_results(self, cir_model):
        cfg = small_config(cir_model)
        r1 = estimate_strong_error(cfg, workers=1)
        r3 = estimate_strong_error(cfg, workers=3)
        np.testing.assert_array_equal(r1.errors, r3.errors)
        np.testing.assert_array_equal(r1.stderrs, r3.stderrs)
        assert r1.lambda_hat == r3.lambda_hat
        assert r1.argmax_nodes == r3.argmax_nodes

    def test_batch_size_only_reorders_the_summation(self, cir_model):
        # byte-identity is promised per worker count, not per batch size:
        # regrouping the partial sums moves the result by rounding only
        a = estimate_strong_error(small_config(cir_model, batch_size=64), workers=1)
        b = estimate_strong_error(small_config(cir_model, batch_size=100), workers=1)
        np.testing.assert_allclose(a.errors, b.errors, rtol=1e-12)

    def test_additive_noise_has_no_discretization_error(self):
        m = SdeModel(drift=_const(0.0), base_sigma=_const(1.0), gamma=0.5, x0=0.0)
        r = estimate_strong_error(small_config(m, paths=64), workers=1)
        assert np.max(r.errors) <= 1e-12

    def test_deterministic_ode_has_order_one(self):
        m = SdeModel(drift=_neg_x(), base_sigma=_const(0.0), gamma=0.5, x0=1.0)
        cfg = ExperimentConfig(
            model=m, horizon=1.0, levels=tuple(range(4, 11)), ref_level=15, paths=1, master_seed=0
        )
        r = estimate_strong_error(cfg, workers=1)
        assert r.lambda_hat == pytest.approx(1.0, abs=0.05)
        assert r.stderrs.max() == 0.0

    def test_errors_shrink_with_level(self, cir_model):
        r = estimate_strong_error(small_config(cir_model), workers=1)
        assert np.all(np.diff(r.errors) < 0.0)
        assert np.all(r.errors > 0.0)
        assert r.paths == 256
        assert r.dropped == 0

    def test_report_arrays_are_frozen(self, cir_model):
        r = estimate_strong_error(small_config(cir_model, levels=(4,), paths=32), workers=1)
        with pytest.raises(ValueError):
            r.errors[0] = 0.0


def barrier_model():
    """Drift jumps to infinity once the path crosses 1/2: a controllable
    explosion whose timing depends on the noise."""

    def drift(t, x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0.5, np.inf, 0.0)

    return SdeModel(
        drift=CoefficientFn(drift, CoefficientMeta()),
        base_sigma=_const(1.0),
        gamma=0.5,
        x0=0.0,
    )


class TestExplosionPolicy:
    def test_abort_raises_with_count(self):
        cfg = small_config(barrier_model(), levels=(4,), ref_level=8, paths=128)
        with pytest.raises(SimulationAbort) as exc_info:
            estimate_strong_error(cfg, workers=1)
        assert exc_info.value.n_flagged > 0

    def test_drop_keeps_survivors(self):
        cfg = small_config(
            barrier_model(), levels=(4,), ref_level=8, paths=128, on_explosion="drop"
        )
        r = estimate_strong_error(cfg, workers=1)
        assert 0 < r.dropped < 128
        assert np.isfinite(r.errors).all()


class TestMomentCondition:
    def test_q_formula(self):
        c = MomentCondition(s_exponent=0.25, gamma=0.5)
        assert c.q == pytest.approx(-0.5)
        assert 0.0 < c.beta_doc < 1.0

    def test_q_zero_at_no_compensation(self):
        assert MomentCondition(s_exponent=0.5, gamma=0.5).q == 0.0

    @pytest.mark.parametrize("s,gamma", [(0.6, 0.5), (-0.1, 0.5), (0.3, 0.75)])
    def test_invalid_combinations(self, s, gamma):
        with pytest.raises(ValueError):
            MomentCondition(s_exponent=s, gamma=gamma)


class TestInverseMoment:
    def test_q_zero_returns_horizon_exactly(self, cir_model):
        est = estimate_inverse_moment(cir_model, 0.0, 1.5, 8, 100, 1)
        assert np.all(est.estimates == 1.5)
        assert np.all(est.stderrs == 0.0)
        assert est.cap_hits == (0, 0, 0)
        assert not est.divergence_flag

    def test_rows_cover_three_reference_levels(self, cir_model):
        est = estimate_inverse_moment(cir_model, -0.5, 1.0, 9, 64, 2)
        assert est.ref_levels == (7, 8, 9)
        assert est.estimates.shape == (3,)

    def test_default_cap_scales_with_resolution(self, cir_model):
        est = estimate_inverse_moment(cir_model, -0.5, 1.0, 9, 32, 2)
        assert est.caps == (float(1 << 7), float(1 << 8), float(1 << 9))

    def test_fixed_cap_applies_at_every_level(self):
        m = SdeModel(drift=_const(0.0), base_sigma=_const(0.0), gamma=0.5, x0=1.0)
        est = estimate_inverse_moment(m, -1.0, 1.0, 6, 16, 0, cap=5.0)
        # sigma == 0 everywhere: every node hits the cap, integral = cap * T
        np.testing.assert_allclose(est.estimates, 5.0)
        assert est.caps == (5.0, 5.0, 5.0)
        assert est.cap_hits == (16 * 16, 16 * 32, 16 * 64)

    def test_positive_q_rejected(self, cir_model):
        with pytest.raises(ValueError):
            estimate_inverse_moment(cir_model, 0.5, 1.0, 8, 16, 0)

    def test_worker_determinism(self, cir_model):
        a = estimate_inverse_moment(cir_model, -1.0, 1.0, 9, 128, 5, workers=1)
        b = estimate_inverse_moment(cir_model, -1.0, 1.0, 9, 128, 5, workers=3)
        np.testing.assert_array_equal(a.estimates, b.estimates)
        assert a.cap_hits == b.cap_hits


class TestComparison:
    def test_identical_models_never_violate(self, cir_model):
        rep = comparison_check(cir_model, cir_model, 1.0, 6, 128, 3)
        assert rep.n_violating == 0
        assert rep.max_violation == 0.0
        assert rep.violation_fraction == 0.0

    def test_ordered_drifts_rarely_cross(self, cir_model):
        lo = make_prototype(PrototypeParams(kind="cir", kappa=1.0, lam=0.25, theta=1.0, x0=1.0))
        rep = comparison_check(lo, cir_model, 1.0, 9, 256, 3)
        assert rep.violation_fraction < 0.05

    def test_x0_ordering_enforced(self, cir_model):
        hi = make_prototype(PrototypeParams(kind="cir", kappa=1.0, lam=1.0, theta=1.0, x0=0.5))
        with pytest.raises(HypothesisError):
            comparison_check(cir_model, hi, 1.0, 6, 16, 0)

    def test_sigma_mismatch_enforced(self, cir_model):
        other = make_prototype(PrototypeParams(kind="cir", kappa=1.0, lam=1.0, theta=2.0, x0=1.0))
        with pytest.raises(HypothesisError):
            comparison_check(cir_model, other, 1.0, 6, 16, 0)

    def test_drift_ordering_enforced(self, cir_model):
        lo = make_prototype(PrototypeParams(kind="cir", kappa=1.0, lam=0.25, theta=1.0, x0=1.0))
        with pytest.raises(HypothesisError):
            comparison_check(cir_model, lo, 1.0, 6, 16, 0)

    def test_fraction_property(self):
        rep = ComparisonReport(level=5, paths=200, tolerance=1e-3, n_violating=3, max_violation=0.01)
        assert rep.violation_fraction == pytest.approx(0.015)


class TestTimeChangeCheck:
    def test_constant_theta_passes(self, cir_params):
        rep = timechange_check(cir_params, 7, 4000, derive_seed(1, "t"), workers=1)
        assert rep.passed
        assert rep.horizon_image == pytest.approx(1.0)
        assert abs(rep.z_mean) <= rep.threshold
        assert abs(rep.z_var) <= rep.threshold

    def test_threshold_matches_significance(self, cir_params):
        rep = timechange_check(cir_params, 6, 500, 9, significance=0.05)
        assert rep.threshold == pytest.approx(1.959964, abs=1e-5)


class TestWrightFisherContainment:
    def test_paths_never_leave_the_widened_interval(self, wf_model):
        cfg = ExperimentConfig(
            model=wf_model, horizon=1.0, levels=(6,), ref_level=10, paths=200, master_seed=4
        )
        r = estimate_strong_error(cfg, workers=1)
        assert np.isfinite(r.errors).all()
        from powersde.brownian import sample_increment_batch
        from powersde.schemes import euler_batch

        inc = sample_increment_batch(4, 0, 200, 10, 1.0)
        kept, bad = euler_batch(wf_model, inc, 1.0)
        assert np.all(bad < 0)
        assert kept.min() > -0.5
        assert kept.max() < 1.5
