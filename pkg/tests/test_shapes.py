import numpy as np
import pytest

from memfuzz import (
    CalibrationError,
    DeviceParams,
    DomainError,
    InputDomain,
    PulseTrainSpec,
    ShapeSpec,
    calibrate_k_drift,
    fresh_state,
    memristance,
    new_crossbar,
    pulse_response,
    pulse_train,
    sample_shape,
    simulate,
    solve_pulse_schedule,
    synthesize,
    targets_to_memristance,
)
from memfuzz.shapes import REPORT_CSV_HEADER

TRI8 = [0.125, 0.375, 0.625, 0.875, 0.875, 0.625, 0.375, 0.125]


class TestShapeSpec:
    def test_triangular_evaluate(self):
        tri = ShapeSpec.triangular(0.0, 0.5, 1.0)
        assert tri.evaluate(0.5) == 1.0
        assert tri.evaluate(0.25) == 0.5
        assert tri.evaluate(0.75) == 0.5
        assert tri.evaluate(-1.0) == 0.0
        assert tri.evaluate(2.0) == 0.0

    def test_triangular_right_angle_left(self):
        tri = ShapeSpec.triangular(0.0, 0.0, 1.0)
        assert tri.evaluate(0.0) == 1.0
        assert tri.evaluate(0.5) == 0.5
        assert tri.evaluate(1.0) == 0.0

    def test_triangular_right_angle_right(self):
        tri = ShapeSpec.triangular(0.0, 1.0, 1.0)
        assert tri.evaluate(0.0) == 0.0
        assert tri.evaluate(0.5) == 0.5
        assert tri.evaluate(1.0) == 1.0

    def test_trapezoidal_evaluate(self):
        trap = ShapeSpec.trapezoidal(0.0, 0.2, 0.8, 1.0)
        assert trap.evaluate(0.1) == 0.5
        assert trap.evaluate(0.5) == 1.0
        assert trap.evaluate(0.9) == pytest.approx(0.5, abs=1e-15)
        assert trap.evaluate(0.0) == 0.0
        assert trap.evaluate(1.0) == 0.0

    def test_gaussian_evaluate(self):
        g = ShapeSpec.gaussian(0.5, 0.2)
        assert g.evaluate(0.5) == 1.0
        assert g.evaluate(0.3) == pytest.approx(0.6065306597126334,
                                                rel=1e-12)
        assert g.evaluate(0.7) == pytest.approx(g.evaluate(0.3), rel=1e-15)

    def test_array_evaluation(self):
        tri = ShapeSpec.triangular(0.0, 0.5, 1.0)
        xs = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
        np.testing.assert_allclose(tri.evaluate(xs),
                                   [0.0, 0.5, 1.0, 0.5, 0.0], atol=0.0)

    def test_values_bounded(self, rng):
        shapes = [ShapeSpec.triangular(0.1, 0.4, 0.9),
                  ShapeSpec.trapezoidal(-1.0, 0.0, 0.5, 2.0),
                  ShapeSpec.gaussian(0.3, 0.05)]
        xs = rng.uniform(-2.0, 3.0, size=500)
        for spec in shapes:
            y = spec.evaluate(xs)
            assert np.all(y >= 0.0) and np.all(y <= 1.0)

    @pytest.mark.parametrize("ctor,args", [
        (ShapeSpec.triangular, (1.0, 0.5, 0.0)),
        (ShapeSpec.triangular, (0.0, 0.0, 0.0)),
        (ShapeSpec.trapezoidal, (0.0, 0.9, 0.5, 1.0)),
        (ShapeSpec.trapezoidal, (1.0, 1.0, 1.0, 1.0)),
        (ShapeSpec.gaussian, (0.5, 0.0)),
        (ShapeSpec.gaussian, (0.5, -0.1)),
    ])
    def test_invalid_params_rejected(self, ctor, args):
        with pytest.raises(DomainError):
            ctor(*args)

    def test_unknown_kind_rejected(self):
        with pytest.raises(DomainError):
            ShapeSpec("bell", (0.5, 0.2))


class TestSampling:
    def test_symmetric_triangle_on_eight_bins(self):
        dom = InputDomain(0.0, 1.0, 8)
        mu = sample_shape(ShapeSpec.triangular(0.0, 0.5, 1.0), dom)
        assert mu.tolist() == TRI8

    def test_sample_count_matches_levels(self):
        dom = InputDomain(-3.0, 7.0, 13)
        mu = sample_shape(ShapeSpec.gaussian(1.0, 2.0), dom)
        assert mu.shape == (13,)


class TestTargetConversion:
    def test_extremes_map_to_resistance_bounds(self, params):
        m = targets_to_memristance([0.0, 1.0], params)
        assert m[0] == 62000.0
        assert m[1] == 3000.0

    def test_half_membership_target(self, params):
        m = targets_to_memristance([0.5], params)
        assert m[0] == pytest.approx(5723.076923076923, rel=1e-15)

    def test_round_trip_through_conductance(self, params, rng):
        mu = rng.uniform(0.0, 1.0, size=50)
        m = targets_to_memristance(mu, params)
        g_min, g_max = 1.0 / params.r_off, 1.0 / params.r_on
        back = (1.0 / m - g_min) / (g_max - g_min)
        np.testing.assert_allclose(back, mu, rtol=1e-12)

    def test_monotone_decreasing_in_membership(self, params):
        mu = np.linspace(0.0, 1.0, 101)
        m = targets_to_memristance(mu, params)
        assert np.all(np.diff(m) < 0.0)

    @pytest.mark.parametrize("bad", [[-0.1], [1.1], [0.5, 2.0]])
    def test_out_of_range_rejected(self, params, bad):
        with pytest.raises(DomainError):
            targets_to_memristance(bad, params)


class TestPulseResponse:
    def test_starts_at_high_resistance(self, params, write_tpl):
        curve = pulse_response(params, write_tpl, 5, 1e-3)
        assert curve.shape == (6,)
        assert curve[0] == 62000.0

    def test_monotone_nonincreasing(self, params, write_tpl):
        curve = pulse_response(params, write_tpl, 24, 1e-3)
        assert np.all(np.diff(curve) <= 0.0)
        assert curve[1] < curve[0]

    def test_matches_fresh_simulations_bit_exact(self, params, write_tpl):
        from dataclasses import replace
        dt = 1e-3
        curve = pulse_response(params, write_tpl, 6, dt)
        for n in range(7):
            wf = pulse_train(replace(write_tpl, count=n), dt)
            end = simulate(params, fresh_state(params), wf).final_state
            assert curve[n] == memristance(params, end.x)

    def test_negative_n_max_rejected(self, params, write_tpl):
        with pytest.raises(DomainError):
            pulse_response(params, write_tpl, -1, 1e-3)


class TestSolver:
    def test_high_resistance_target_needs_no_pulses(self, params, write_tpl):
        assert solve_pulse_schedule(params, write_tpl, 62000.0, 24,
                                    1e-3) == 0

    def test_low_resistance_target_saturates(self, params, write_tpl):
        n = solve_pulse_schedule(params, write_tpl, 3000.0, 24, 1e-3)
        curve = pulse_response(params, write_tpl, 24, 1e-3)
        assert curve[n] == 3000.0
        # ties break toward fewer pulses: n is the first saturated count
        assert n == 0 or curve[n - 1] != 3000.0

    def test_matches_first_minimum_oracle(self, params, write_tpl, rng):
        curve = pulse_response(params, write_tpl, 24, 1e-3)
        targets = list(rng.uniform(3000.0, 62000.0, size=20))
        # a constructed near-tie between two adjacent counts
        targets.append(float(0.5 * (curve[3] + curve[4])))
        for target in targets:
            expect = min(range(25),
                         key=lambda n: (abs(float(curve[n]) - target), n))
            got = solve_pulse_schedule(params, write_tpl, target, 24, 1e-3)
            assert got == expect

    def test_matches_exhaustive_per_count_simulation(self, params,
                                                     write_tpl, rng):
        from dataclasses import replace
        dt = 1e-3
        n_max = 24
        ladder = []
        for n in range(n_max + 1):
            wf = pulse_train(replace(write_tpl, count=n), dt)
            end = simulate(params, fresh_state(params), wf).final_state
            ladder.append(memristance(params, end.x))
        for target in rng.uniform(3000.0, 62000.0, size=20):
            expect = min(range(n_max + 1),
                         key=lambda n: (abs(ladder[n] - target), n))
            got = solve_pulse_schedule(params, write_tpl, float(target),
                                       n_max, dt)
            assert got == expect

    @pytest.mark.parametrize("target", [2999.0, 62001.0, 0.0, -5.0])
    def test_target_outside_device_range_rejected(self, params, write_tpl,
                                                  target):
        with pytest.raises(DomainError):
            solve_pulse_schedule(params, write_tpl, target, 24, 1e-3)


class TestCalibration:
    def test_returned_coefficient_saturates_in_exactly_n(self, write_tpl):
        from dataclasses import replace
        base = DeviceParams()
        dt = 2e-3
        k = calibrate_k_drift(base, write_tpl, 4, dt)
        probe = replace(base, k_drift=k)
        wf4 = pulse_train(replace(write_tpl, count=4), dt)
        wf3 = pulse_train(replace(write_tpl, count=3), dt)
        x4 = simulate(probe, fresh_state(probe), wf4).final_state.x
        x3 = simulate(probe, fresh_state(probe), wf3).final_state.x
        assert x4 >= 0.999
        assert x3 < 0.999

    def test_coefficient_scales_inversely_with_pulse_budget(self, write_tpl):
        base = DeviceParams()
        k2 = calibrate_k_drift(base, write_tpl, 2, 1e-3)
        k8 = calibrate_k_drift(base, write_tpl, 8, 1e-3)
        assert abs(k2 / k8 - 4.0) < 0.5

    def test_ignores_k_drift_of_input_params(self, write_tpl):
        from dataclasses import replace
        a = calibrate_k_drift(DeviceParams(), write_tpl, 4, 2e-3)
        b = calibrate_k_drift(replace(DeviceParams(), k_drift=1.0),
                              write_tpl, 4, 2e-3)
        assert a == b

    def test_sub_threshold_template_cannot_calibrate(self):
        tpl = PulseTrainSpec(0.5, 0.05, 0.1, 0)
        with pytest.raises(CalibrationError):
            calibrate_k_drift(DeviceParams(), tpl, 4, 2e-3)

    def test_zero_drive_template_cannot_calibrate(self):
        tpl = PulseTrainSpec(0.0, 0.05, 0.1, 0)
        with pytest.raises(CalibrationError):
            calibrate_k_drift(DeviceParams(), tpl, 4, 2e-3)

    def test_budget_below_two_rejected(self, write_tpl):
        with pytest.raises(DomainError):
            calibrate_k_drift(DeviceParams(), write_tpl, 1, 2e-3)

    def test_deterministic(self, write_tpl):
        a = calibrate_k_drift(DeviceParams(), write_tpl, 4, 2e-3)
        b = calibrate_k_drift(DeviceParams(), write_tpl, 4, 2e-3)
        assert a == b


class TestSynthesize:
    def test_zero_shape_writes_nothing(self, params, write_tpl, readout):
        # support entirely outside the domain: every target is 0
        xbar = new_crossbar(8, 1, params)
        dom = InputDomain(0.0, 1.0, 8)
        spec = ShapeSpec.trapezoidal(2.0, 3.0, 4.0, 5.0)
        report = synthesize(xbar, 0, spec, dom, write_tpl, 24, readout,
                            1e-3)
        assert np.all(report.pulse_counts == 0)
        assert np.all(xbar.x == 0.0)
        assert report.max_abs_error == 0.0

    def test_plateau_saturates_center_cells(self, params, write_tpl,
                                            readout):
        xbar = new_crossbar(8, 1, params)
        dom = InputDomain(0.0, 1.0, 8)
        spec = ShapeSpec.trapezoidal(0.0, 0.25, 0.75, 1.0)
        report = synthesize(xbar, 0, spec, dom, write_tpl, 24, readout,
                            1e-3)
        # bins 2..5 have membership 1 -> saturated cells
        for level in (2, 3, 4, 5):
            assert report.levels[level].target_mu == 1.0
            assert xbar.x[level, 0] == 1.0
            assert report.levels[level].achieved_mu == 1.0

    def test_symmetric_triangle_counts_are_palindromic(self, params,
                                                       write_tpl, readout):
        xbar = new_crossbar(8, 1, params)
        dom = InputDomain(0.0, 1.0, 8)
        spec = ShapeSpec.triangular(0.0, 0.5, 1.0)
        report = synthesize(xbar, 0, spec, dom, write_tpl, 24, readout,
                            1e-3)
        counts = report.pulse_counts
        assert counts.tolist() == counts.tolist()[::-1]
        mu = report.achieved_mu
        peak = int(np.argmax(mu))
        assert np.all(np.diff(mu[:peak + 1]) >= 0.0)
        assert np.all(np.diff(mu[peak:]) <= 0.0)

    def test_error_bounded_by_response_curve_quantum(self, params,
                                                     write_tpl, readout):
        xbar = new_crossbar(8, 1, params)
        dom = InputDomain(0.0, 1.0, 8)
        spec = ShapeSpec.triangular(0.0, 0.5, 1.0)
        report = synthesize(xbar, 0, spec, dom, write_tpl, 24, readout,
                            1e-3)
        curve = pulse_response(params, write_tpl, 24, 1e-3)
        g_min, g_max = 1.0 / params.r_off, 1.0 / params.r_on
        mu_curve = (1.0 / curve - g_min) / (g_max - g_min)
        quantum = float(np.max(np.abs(np.diff(mu_curve))))
        assert report.max_abs_error <= quantum + 1e-12

    def test_achieved_state_matches_response_curve(self, params, write_tpl,
                                                   readout):
        xbar = new_crossbar(8, 1, params)
        dom = InputDomain(0.0, 1.0, 8)
        spec = ShapeSpec.triangular(0.0, 0.5, 1.0)
        report = synthesize(xbar, 0, spec, dom, write_tpl, 24, readout,
                            1e-3)
        curve = pulse_response(params, write_tpl, 24, 1e-3)
        for r in report.levels:
            assert r.achieved_m == curve[r.pulses]

    def test_overwrites_previous_programming(self, params, write_tpl,
                                             readout):
        from memfuzz import program_cell
        dom = InputDomain(0.0, 1.0, 8)
        spec = ShapeSpec.gaussian(0.5, 0.2)
        fresh = new_crossbar(8, 1, params)
        dirty = new_crossbar(8, 1, params)
        for row in range(8):
            program_cell(dirty, row, 0, PulseTrainSpec(1.2, 0.05, 0.1, 7),
                         1e-3)
        a = synthesize(fresh, 0, spec, dom, write_tpl, 24, readout, 1e-3)
        b = synthesize(dirty, 0, spec, dom, write_tpl, 24, readout, 1e-3)
        assert fresh.x.tobytes() == dirty.x.tobytes()
        assert a.pulse_counts.tolist() == b.pulse_counts.tolist()

    def test_level_count_mismatch_rejected(self, params, write_tpl,
                                           readout):
        xbar = new_crossbar(8, 1, params)
        dom = InputDomain(0.0, 1.0, 6)
        with pytest.raises(DomainError):
            synthesize(xbar, 0, ShapeSpec.triangular(0.0, 0.5, 1.0), dom,
                       write_tpl, 24, readout, 1e-3)

    def test_report_csv(self, params, write_tpl, readout, tmp_path):
        xbar = new_crossbar(8, 1, params)
        dom = InputDomain(0.0, 1.0, 8)
        report = synthesize(xbar, 0, ShapeSpec.triangular(0.0, 0.5, 1.0),
                            dom, write_tpl, 24, readout, 1e-3)
        path = tmp_path / "report.csv"
        report.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == REPORT_CSV_HEADER
        assert len(lines) == 9
        fields = lines[1].split(",")
        assert int(fields[0]) == 0
        assert float(fields[1]) == report.levels[0].target_mu
        assert int(fields[3]) == report.levels[0].pulses
