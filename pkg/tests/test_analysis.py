"""Verdict logic, long-time statistics, recurrences and timescale arithmetic."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinbath.analysis import (
    HBAR_EV_S,
    NEVER,
    DecoherenceVerdict,
    TimescaleReport,
    decoherence_time,
    fluctuation_stats,
    n_scaling_sweep,
    r_trajectory,
    recurrence_check,
    timescale_estimate,
    timescale_report,
    weak_limit_residual,
)
from spinbath.engine import overlap_r
from spinbath.ensemble import commensurate_model, sample_model, sample_observable
from spinbath.model import Trajectory, eid_observable, make_model

INV = 1.0 / math.sqrt(2.0)


class TestVerdictInvariants:
    def test_decohered_requires_small_sup(self):
        with pytest.raises(ValueError, match="sup_late"):
            DecoherenceVerdict(t_d=1.0, threshold=0.1, window=5.0, sup_late=0.5, decohered=True)

    def test_not_decohered_requires_never_marker(self):
        with pytest.raises(ValueError, match="NEVER"):
            DecoherenceVerdict(t_d=1.0, threshold=0.1, window=5.0, sup_late=0.5, decohered=False)

    def test_threshold_range(self):
        with pytest.raises(ValueError, match="threshold"):
            DecoherenceVerdict(t_d=NEVER, threshold=1.5, window=5.0, sup_late=0.5, decohered=False)

    def test_valid_verdicts_construct(self):
        DecoherenceVerdict(t_d=2.0, threshold=0.1, window=5.0, sup_late=0.05, decohered=True)
        DecoherenceVerdict(t_d=NEVER, threshold=0.1, window=5.0, sup_late=0.9, decohered=False)


class TestDecoherenceTime:
    def test_constant_unit_modulus_never_decoheres(self):
        model = make_model(INV, INV, [(1.0, 0.0, 1.0)])
        verdict = decoherence_time(r_trajectory(model, 100.0, 500), 0.1, 20.0)
        assert not verdict.decohered
        assert math.isinf(verdict.t_d)
        assert verdict.sup_late == pytest.approx(1.0, abs=1e-12)

    def test_large_bath_decoheres_quickly(self):
        model = sample_model(100, 0)
        gbar = model.mean_coupling
        verdict = decoherence_time(
            r_trajectory(model, 100.0 / gbar, 2000), 0.1, 20.0 / gbar
        )
        assert verdict.decohered
        assert verdict.t_d < 5.0 / gbar
        assert verdict.sup_late <= 0.1

    def test_oscillation_above_threshold_never_qualifies(self):
        times = np.linspace(0.0, 200.0, 4001)
        traj = Trajectory(times=times, values=np.cos(0.7 * times))
        verdict = decoherence_time(traj, 0.5, 20.0)
        assert not verdict.decohered

    def test_first_qualifying_grid_point_is_reported(self):
        times = np.arange(0.0, 11.0)
        values = np.array([1.0, 1.0, 1.0, 0.05, 0.04, 0.03, 0.02, 0.05, 0.06, 0.04, 0.05])
        verdict = decoherence_time(Trajectory(times=times, values=values), 0.1, 2.0)
        assert verdict.t_d == 3.0
        assert verdict.sup_late == 0.05

    def test_hold_is_required_not_first_crossing(self):
        # Dips below threshold but climbs back inside every window.
        times = np.arange(0.0, 21.0)
        values = np.where(times % 3 == 0, 0.01, 0.9)
        verdict = decoherence_time(Trajectory(times=times, values=values), 0.1, 4.0)
        assert not verdict.decohered

    def test_window_must_fit_twice(self):
        model = sample_model(20, 0)
        traj = r_trajectory(model, 10.0, 100)
        with pytest.raises(ValueError, match="span"):
            decoherence_time(traj, 0.1, 6.0)

    def test_threshold_validation(self):
        traj = r_trajectory(sample_model(5, 0), 100.0, 200)
        with pytest.raises(ValueError, match="threshold"):
            decoherence_time(traj, 0.0, 10.0)
        with pytest.raises(ValueError, match="window"):
            decoherence_time(traj, 0.5, -1.0)

    def test_complex_values_use_modulus(self):
        times = np.linspace(0.0, 10.0, 101)
        values = 0.05j * np.ones_like(times)
        verdict = decoherence_time(Trajectory(times=times, values=values), 0.1, 2.0)
        assert verdict.decohered
        assert verdict.t_d == 0.0


class TestRTrajectory:
    def test_metadata_and_grid(self):
        traj = r_trajectory(sample_model(10, 4), 50.0, 101, config_digest="abc")
        assert traj.label == "overlap_r"
        assert traj.config_digest == "abc"
        assert traj.times[0] == 0.0 and traj.times[-1] == 50.0
        assert traj.values[0] == pytest.approx(1.0 + 0.0j, abs=1e-12)

    def test_validation(self):
        model = sample_model(2, 0)
        with pytest.raises(ValueError, match="grid"):
            r_trajectory(model, 10.0, 1)
        with pytest.raises(ValueError, match="t_max"):
            r_trajectory(model, -5.0, 100)


class TestFluctuationStats:
    def test_degenerate_bath_is_exactly_one(self):
        model = make_model(INV, INV, [(1.0, 0.0, 1.0)])
        mean_r2, predicted = fluctuation_stats(model, (10.0, 20.0), samples=200, seed=1)
        assert mean_r2 == pytest.approx(1.0, abs=1e-12)
        assert predicted == pytest.approx(1.0, abs=1e-12)

    def test_balanced_single_site_averages_to_half(self):
        model = make_model(INV, INV, [(0.5 + 0.5j, 0.5 - 0.5j, 1.0)])
        window = (0.0, 2.0 * math.pi * 40)
        mean_r2, predicted = fluctuation_stats(model, window, samples=4000, seed=2)
        assert predicted == pytest.approx(0.5, abs=1e-12)
        assert mean_r2 == pytest.approx(0.5, abs=0.02)

    def test_seeded_bath_within_factor_two(self):
        model = sample_model(20, 0)
        gbar = model.mean_coupling
        mean_r2, predicted = fluctuation_stats(
            model, (50.0 / gbar, 550.0 / gbar), samples=400, seed=777
        )
        assert 0.5 <= mean_r2 / predicted <= 2.0

    def test_degenerate_window_rejected(self):
        model = sample_model(3, 0)
        with pytest.raises(ValueError, match="degenerate"):
            fluctuation_stats(model, (5.0, 5.0), samples=200)

    def test_minimum_samples(self):
        model = sample_model(3, 0)
        with pytest.raises(ValueError, match="samples"):
            fluctuation_stats(model, (5.0, 10.0), samples=50)


class TestRecurrence:
    def test_five_site_arithmetic_ladder(self):
        model = commensurate_model(5, 1.0, 42)
        assert recurrence_check(model, 2.0 * math.pi) == pytest.approx(1.0, abs=1e-10)

    def test_quarter_period_is_not_revived(self):
        model = commensurate_model(5, 1.0, 42)
        assert abs(overlap_r(model, math.pi / 2.0)) < 1.0 - 1e-6

    def test_single_site_any_multiple(self):
        model = commensurate_model(1, 3.0, 7)
        assert recurrence_check(model, 2.0 * math.pi / 3.0) == pytest.approx(1.0, abs=1e-10)

    def test_incommensurate_couplings_rejected(self):
        model = sample_model(5, 3)
        with pytest.raises(ValueError, match="commensurate"):
            recurrence_check(model, 2.0 * math.pi)

    def test_bad_period(self):
        model = commensurate_model(2, 1.0, 0)
        with pytest.raises(ValueError, match="positive"):
            recurrence_check(model, 0.0)


class TestWeakLimitResidual:
    def test_pure_up_branch_has_zero_residual(self):
        model = sample_model(6, 1, a=1.0, b=0.0)
        obs = eid_observable(0.3, 0.9 - 0.2j, -0.5, 6)
        for t in (0.0, 3.0, 17.0):
            assert weak_limit_residual(model, obs, t) == pytest.approx(0.0, abs=1e-12)

    def test_pure_coherence_at_time_zero(self):
        model = sample_model(4, 2)
        obs = eid_observable(0.0, 1.0, 0.0, 4)
        assert weak_limit_residual(model, obs, 0.0) == pytest.approx(1.0, abs=1e-12)

    def test_large_bath_late_time_residual_is_tiny(self):
        model = sample_model(100, 0)
        obs = eid_observable(0.4, 0.8, -0.4, 100)
        late = 50.0 / model.mean_coupling
        assert weak_limit_residual(model, obs, late) <= 1e-3

    @given(
        seed=st.integers(min_value=0, max_value=2**32 - 1),
        t=st.floats(min_value=0, max_value=100, allow_nan=False),
    )
    @settings(max_examples=30, deadline=None)
    def test_residual_bounded_by_overlap(self, seed, t):
        model = sample_model(8, seed)
        s01 = 0.6 - 0.3j
        obs = eid_observable(0.2, s01, -0.7, 8)
        bound = 2.0 * abs(model.a) * abs(model.b) * abs(s01) * abs(overlap_r(model, t))
        assert weak_limit_residual(model, obs, t) <= bound + 1e-12

    def test_non_eid_observable_rejected(self):
        model = sample_model(3, 0)
        with pytest.raises(ValueError, match="identity"):
            weak_limit_residual(model, sample_observable(3, 1), 0.0)

    def test_array_time(self):
        model = sample_model(5, 9)
        obs = eid_observable(1.0, 0.5, -1.0, 5)
        ts = np.linspace(0.0, 10.0, 11)
        res = weak_limit_residual(model, obs, ts)
        assert res.shape == ts.shape


class TestTimescales:
    def test_one_ev(self):
        assert 6.5e-16 <= timescale_estimate(1.0) <= 6.7e-16

    def test_strong_coupling_band(self):
        assert 6.5e-39 <= timescale_estimate(1e23) <= 6.7e-39

    def test_monotone_in_strength(self):
        assert timescale_estimate(10.0) < timescale_estimate(2.0)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError, match="positive"):
            timescale_estimate(0.0)
        with pytest.raises(ValueError, match="positive"):
            timescale_estimate(-3.0)

    def test_report_hierarchy(self):
        report = timescale_report(1e23, 1.0)
        assert report.hierarchy_ok
        assert report.t_ds_s == HBAR_EV_S / 1e23
        assert report.t_du_s == HBAR_EV_S / 1.0
        assert report.t_ds_s < report.t_du_s

    def test_report_equal_strengths(self):
        assert timescale_report(2.0, 2.0).hierarchy_ok

    def test_report_invariants_enforced(self):
        with pytest.raises(ValueError, match="exactly"):
            TimescaleReport(v1_ev=1.0, v2_ev=1.0, t_ds_s=1.0, t_du_s=HBAR_EV_S, hierarchy_ok=True)
        with pytest.raises(ValueError, match="hierarchy"):
            TimescaleReport(
                v1_ev=2.0,
                v2_ev=1.0,
                t_ds_s=HBAR_EV_S / 2.0,
                t_du_s=HBAR_EV_S,
                hierarchy_ok=False,
            )


class TestScalingSweep:
    def test_single_spin_never_decoheres(self):
        (row,) = n_scaling_sweep([1], seed=0)
        assert not row.decohered
        assert math.isinf(row.t_d)

    def test_sup_late_decreases_with_bath_size(self):
        rows = n_scaling_sweep([1, 20, 100], seed=0)
        sups = [row.sup_late for row in rows]
        assert sups[0] > sups[1] > sups[2]

    def test_large_baths_decohere(self):
        rows = n_scaling_sweep([20, 100], seed=0)
        assert all(row.decohered for row in rows)
        assert all(math.isfinite(row.t_d) for row in rows)

    def test_empty_list_rejected(self):
        with pytest.raises(ValueError, match="at least one"):
            n_scaling_sweep([], seed=0)

    def test_explicit_window_and_span(self):
        rows = n_scaling_sweep([20], seed=0, window=40.0, t_max=200.0, points=1000, n_seeds=2)
        assert rows[0].n_sites == 20
