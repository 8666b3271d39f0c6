import math

import numpy as np
import pytest

from quench_complexity.chain_spectrum import ChainSpec, periodic_schedule, single_quench
from quench_complexity.complexity_logic import (
    LambdaPolicy, OmegaValue, boundary_discontinuities, bounds_curve, complexity_bounds,
    complexity_curve, critical_zero_mode_closed_form, early_time_coefficients,
    mode_phase_functions, multi_quench_offset, oracle_complexity_curve, perturbative_delta_response,
    successive_complexity, successive_curve, total_complexity, upper_bound_terms,
)
from quench_complexity.emp_solver import AuxiliaryState
from quench_complexity.errors import UnsupportedProtocolError, WindowError
from quench_complexity.figure_presets import figure_preset


class TestOmegaValue:
    def test_reference_state(self):
        omega = OmegaValue.from_state(AuxiliaryState(1.0, 0.0), 9.0)
        assert omega.modulus == pytest.approx(3.0)

    def test_rejects_non_normalizable(self):
        with pytest.raises(ValueError):
            OmegaValue(re=0.0, im=1.0)


class TestModePhaseFunctions:
    def test_reference_state(self):
        assert mode_phase_functions(AuxiliaryState(1.0, 0.0), 4.0, 4.0) == (0.0, 0.0)

    def test_hand_value(self):
        state = AuxiliaryState.from_moments(0.68, -1.6)
        a, b = mode_phase_functions(state, 9.0, 9.0)
        assert a == pytest.approx(math.log(3.4 / 2.04), abs=1e-12)
        assert a == pytest.approx(0.51083, abs=1e-5)
        assert b == pytest.approx(-0.48996, abs=1e-5)

    def test_critical_zero_mode(self):
        w, t = 0.5, 3.0
        state = AuxiliaryState.from_moments(1 + (w * t) ** 2, w * w * t)
        a, b = mode_phase_functions(state, w * w, w * w)
        assert a == pytest.approx(-0.5 * math.log(1 + (w * t) ** 2), rel=1e-12)
        assert b == pytest.approx(math.atan(w * t), rel=1e-12)

    def test_critical_literal_slot_diverges(self):
        a, _ = mode_phase_functions(AuxiliaryState(1.0, 0.0), 1.0, 0.0)
        assert a == -math.inf


class TestTotalComplexity:
    def test_zero_at_start(self, small_chain, critical_multi):
        assert total_complexity(small_chain, 0.0).total == 0.0
        assert total_complexity(critical_multi, 0.0).total == 0.0

    def test_zero_at_start_when_start_value_rounds(self):
        # mode 1: λ0 = 13, λ = 7.79
        schedule = single_quench(ChainSpec(4, 3.0, 2.0), 0.3, 3.85)
        result = total_complexity(schedule, 0.0)
        assert result.total == 0.0
        assert np.all(result.a == 0.0) and np.all(result.b == 0.0)
        assert multi_quench_offset(schedule, 1) == 0.0

    def test_literal_policy_starts_at_zero(self, critical_multi):
        assert total_complexity(critical_multi, 0.0, LambdaPolicy.LITERAL_SEGMENT).total == 0.0

    @pytest.mark.parametrize("variant", [1, 2])
    def test_literal_preset_starts_at_zero(self, variant):
        scenario = figure_preset("fig8", variant)
        assert total_complexity(scenario.schedule, 0.0, scenario.policy).total == 0.0

    def test_policies_agree_until_second_quench(self, critical_multi):
        times = np.linspace(0.0, 4.99, 100)
        fixed = complexity_curve(critical_multi, times, LambdaPolicy.FIXED_INITIAL)
        literal = complexity_curve(critical_multi, times, LambdaPolicy.LITERAL_SEGMENT)
        np.testing.assert_array_equal(fixed.total, literal.total)

    def test_identity_quench(self, identity_quench):
        curve = complexity_curve(identity_quench, np.linspace(0, 200, 401))
        assert np.max(curve.total) <= 1e-12

    def test_n1_half_period(self, n1_quench):
        result = total_complexity(n1_quench, math.pi / 10)
        assert result.a[0] == pytest.approx(math.log(25 / 9), rel=1e-12)
        assert result.b[0] == pytest.approx(0.0, abs=1e-12)
        assert result.total == pytest.approx(0.51083, abs=1e-5)

    def test_decomposition(self, small_chain):
        curve = complexity_curve(small_chain, np.linspace(0, 50, 101))
        np.testing.assert_allclose(curve.total ** 2, curve.zero_mode ** 2 + curve.rest ** 2, rtol=1e-12)
        direct = 0.5 * np.sqrt(np.sum(curve.a ** 2 + curve.b ** 2, axis=0))
        np.testing.assert_allclose(curve.total, direct, rtol=1e-12)
        assert np.all(np.abs(curve.b) < math.pi / 2)

    def test_policies_share_first_segment_b(self, small_chain):
        times = np.linspace(0, 20, 41)
        fixed = complexity_curve(small_chain, times, LambdaPolicy.FIXED_INITIAL)
        literal = complexity_curve(small_chain, times, LambdaPolicy.LITERAL_SEGMENT)
        np.testing.assert_array_equal(fixed.b, literal.b)

    def test_mode_revivals(self, small_chain):
        spectrum = small_chain.segment_spectra()[0].lambdas
        for j, lam in enumerate(spectrum):
            times = np.arange(1, 11) * math.pi / math.sqrt(lam)
            curve = complexity_curve(small_chain, times)
            assert np.max(np.abs(curve.a[j])) <= 1e-10
            assert np.max(np.abs(curve.b[j])) <= 1e-10

    def test_oracle_agreement(self, small_chain):
        times = np.linspace(0, 5, 11)
        analytic = complexity_curve(small_chain, times)
        oracle = oracle_complexity_curve(small_chain, times, step=1e-4)
        assert np.max(np.abs(analytic.total - oracle.total)) <= 1e-6


class TestBounds:
    def test_quarter_phase_terms(self):
        a_u, b_u = upper_bound_terms(0.32, 0.68, 25.0, 9.0, envelope="quarter-phase")
        assert a_u == pytest.approx(0.51083, abs=1e-5)
        assert b_u == pytest.approx(0.48996, abs=1e-5)

    def test_supremum_terms(self):
        a_u, b_u = upper_bound_terms(0.32, 0.68, 25.0, 9.0)
        assert a_u == pytest.approx(math.log(25 / 9), rel=1e-12)
        assert b_u == pytest.approx(math.atan(1.6 / 3.0), rel=1e-12)

    def test_unknown_envelope(self):
        with pytest.raises(ValueError):
            upper_bound_terms(0.32, 0.68, 25.0, 9.0, envelope="loose")

    def test_start(self, small_chain):
        lower, upper = complexity_bounds(small_chain, 0.0)
        assert lower == 0.0
        assert upper >= 0.0

    def test_bounds_hold(self, small_chain):
        times = np.linspace(0, 1000, 2001)
        curve = complexity_curve(small_chain, times)
        lower, upper = bounds_curve(small_chain, times)
        assert np.all(lower <= curve.total + 1e-12)
        assert np.all(curve.total <= upper + 1e-12)

    def test_multi_quench_rejected(self, critical_multi):
        with pytest.raises(UnsupportedProtocolError):
            complexity_bounds(critical_multi, 1.0)

    def test_literal_policy_rejected(self, small_chain):
        with pytest.raises(UnsupportedProtocolError):
            complexity_bounds(small_chain, 1.0, LambdaPolicy.LITERAL_SEGMENT)


class TestCriticalQuench:
    def test_closed_form_values(self):
        assert critical_zero_mode_closed_form(1.0, 0.0) == 0.0
        assert critical_zero_mode_closed_form(1.0, 1.0) == pytest.approx(0.42923, abs=1e-5)
        assert critical_zero_mode_closed_form(0.5, 200.0) == pytest.approx(2.4313, abs=1e-4)

    def test_zero_mode_matches_closed_form(self):
        schedule = single_quench(ChainSpec(5, 0.2, 1.0), 0.0, 1.0)
        times = np.linspace(0, 500, 1001)
        curve = complexity_curve(schedule, times)
        closed = critical_zero_mode_closed_form(0.2, times)
        assert np.max(np.abs(curve.zero_mode - closed)) <= 1e-10


class TestSeries:
    def test_identity(self, identity_quench):
        series = early_time_coefficients(identity_quench.spec, identity_quench.segments[0])
        assert (series.a2, series.a4) == (0.0, 0.0)

    def test_hand_values(self, n1_quench):
        series = early_time_coefficients(n1_quench.spec, n1_quench.segments[0])
        assert series.a2 == pytest.approx(256 / 36, rel=1e-12)
        assert series.a4 == pytest.approx(-256 * 2180 / (48 * 81), rel=1e-12)

    @pytest.mark.parametrize("fixture", ["n1_quench", "small_chain"])
    def test_series_tracks_complexity(self, fixture, request):
        schedule = request.getfixturevalue(fixture)
        series = early_time_coefficients(schedule.spec, schedule.segments[0])
        lam_max = max(schedule.spec.initial_spectrum.lambdas.max(), schedule.segment_spectra()[0].lambdas.max())
        t = 1e-3 / math.sqrt(lam_max)
        c_sq = total_complexity(schedule, t).total ** 2
        assert c_sq / (series.a2 * t ** 2 + series.a4 * t ** 4) == pytest.approx(1.0, abs=1e-3)
        assert (c_sq - series.a2 * t ** 2) / t ** 4 == pytest.approx(series.a4, rel=1e-2)


class TestPerturbativeResponse:
    def test_start(self):
        assert perturbative_delta_response(9.0, 3.0, 0.01, 0.0) == (0.0, 0.0)

    def test_quarter_period(self):
        a, b = perturbative_delta_response(9.0, 3.0, 0.01, math.pi / 6)
        assert a == pytest.approx(0.06 / 9.0, rel=1e-12)
        assert b == pytest.approx(0.0, abs=1e-15)

    def test_zero_reference_frequency(self):
        assert perturbative_delta_response(4.0, 0.0, 0.01, 1.3) == (0.0, 0.0)

    def test_matches_exact_response(self, n1_spec):
        exact = total_complexity(single_quench(n1_spec, 3.01, 0.0), 0.5)
        a, b = perturbative_delta_response(9.0, 3.0, 0.01, 0.5)
        assert exact.a[0] == pytest.approx(a, abs=1e-4)
        assert exact.b[0] == pytest.approx(b, abs=1e-4)

    def test_vectorised(self):
        a, b = perturbative_delta_response(9.0, 3.0, 0.01, np.array([0.0, math.pi / 6]))
        assert a.shape == b.shape == (2,)


class TestMultiQuench:
    def test_first_offset_is_zero(self, critical_multi):
        assert multi_quench_offset(critical_multi, 1) == 0.0

    def test_first_offset_is_zero_for_literal_policy(self, critical_multi):
        assert multi_quench_offset(critical_multi, 1, LambdaPolicy.LITERAL_SEGMENT) == 0.0

    def test_hand_value(self, n1_return_quench):
        assert multi_quench_offset(n1_return_quench, 2) == pytest.approx(0.12525, abs=1e-4)

    def test_full_period(self, n1_spec):
        schedule = periodic_schedule(n1_spec, [5.0, 3.0], 0.0, math.pi / 5)
        assert multi_quench_offset(schedule, 2) <= 1e-12

    def test_index_range(self, critical_multi):
        with pytest.raises(ValueError):
            multi_quench_offset(critical_multi, 4)

    def test_fixed_policy_is_continuous(self, critical_multi):
        for jump in boundary_discontinuities(critical_multi):
            assert jump.total_jump <= 1e-9
            assert jump.zero_jump <= 1e-9

    def test_literal_policy_jumps_at_critical_quench(self, critical_multi):
        jumps = boundary_discontinuities(critical_multi, LambdaPolicy.LITERAL_SEGMENT)
        assert [j.index for j in jumps] == [2, 3]
        assert jumps[-1].time == 10.0
        assert jumps[-1].zero_jump > 0.0


class TestSuccessive:
    def test_hand_value(self, n1_quench):
        result = successive_complexity(n1_quench, math.pi / 20, math.pi / 10)
        assert result.a[0] == pytest.approx(0.51083, abs=1e-5)
        assert result.b[0] == pytest.approx(-0.48996, abs=1e-5)
        assert result.total == pytest.approx(0.35391, abs=1e-5)

    def test_same_instant(self, critical_multi):
        assert successive_complexity(critical_multi, 3.0, 3.0).total == 0.0

    def test_target_before_reference(self, critical_multi):
        with pytest.raises(WindowError):
            successive_complexity(critical_multi, 3.0, 2.0)

    def test_target_beyond_next_segment(self, critical_multi):
        successive_complexity(critical_multi, 1.0, 10.0)
        with pytest.raises(WindowError):
            successive_complexity(critical_multi, 1.0, 11.0)

    def test_literal_rejected_on_critical_segment(self, critical_multi):
        with pytest.raises(UnsupportedProtocolError):
            successive_curve(critical_multi, 11.0, [12.0], LambdaPolicy.LITERAL_SEGMENT)

    def test_curve_flags(self, critical_multi):
        curve = successive_curve(critical_multi, 1.0, np.linspace(1.0, 10.0, 91))
        assert curve.total[0] == 0.0
        assert curve.nonpositive_denominators >= 0
        assert np.all(np.abs(curve.b) < math.pi / 2)


class TestCriticalQuenchPolicies:
    @pytest.mark.parametrize("variant", [1, 2])
    def test_literal_zero_mode_jump(self, variant):
        schedule = figure_preset("fig7", variant).schedule
        literal = boundary_discontinuities(schedule, LambdaPolicy.LITERAL_SEGMENT)[-1]
        fixed = boundary_discontinuities(schedule, LambdaPolicy.FIXED_INITIAL)[-1]
        assert literal.time == schedule.boundary_times[schedule.n_segments - 1]
        assert literal.zero_jump > 1e-6
        assert fixed.zero_jump <= 1e-9

    def test_first_boundary_shared_left_limit(self, critical_multi):
        literal = boundary_discontinuities(critical_multi, LambdaPolicy.LITERAL_SEGMENT)[0]
        fixed = boundary_discontinuities(critical_multi, LambdaPolicy.FIXED_INITIAL)[0]
        assert literal.total_left == fixed.total_left
