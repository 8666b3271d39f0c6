import math

import numpy as np
import pytest

from quench_complexity.chain_spectrum import (
    ChainSpec, QuenchSchedule, QuenchSegment, is_critical, mode_eigenvalues,
    periodic_schedule, segment_at, segment_indices, single_quench,
)
from quench_complexity.errors import ScheduleRangeError


class TestModeEigenvalues:
    def test_small_chain(self):
        spectrum = mode_eigenvalues(3.0, 2.0, 4)
        assert spectrum.lambdas == pytest.approx([13.0, 17.0, 13.0, 9.0], rel=1e-14)

    def test_coupling_free_chain(self):
        assert np.all(mode_eigenvalues(5.0, 0.0, 7).lambdas == 25.0)

    def test_critical_zero_mode(self):
        spectrum = mode_eigenvalues(0.0, 1.0, 2)
        assert spectrum.lambdas == pytest.approx([4.0, 0.0], abs=1e-15)
        assert spectrum.zero_mode == 0.0

    def test_zero_mode_is_exact_and_minimal(self):
        spectrum = mode_eigenvalues(0.3, 10.0, 100)
        assert spectrum[100] == 0.3 ** 2
        assert spectrum.lambdas.min() == spectrum.zero_mode
        assert spectrum.lambdas.max() <= 0.09 + 40.0

    @pytest.mark.parametrize("n", [2, 5, 100, 10_000])
    def test_pair_degeneracy(self, n):
        lam = mode_eigenvalues(0.7, 3.0, n).lambdas
        j = np.arange(1, n)
        assert np.max(np.abs(lam[j - 1] - lam[n - j - 1])) <= 1e-12

    def test_rejects_empty_chain(self):
        with pytest.raises(ValueError):
            mode_eigenvalues(1.0, 1.0, 0)

    def test_one_based_access(self):
        spectrum = mode_eigenvalues(3.0, 2.0, 4)
        assert spectrum[2] == pytest.approx(17.0)
        with pytest.raises(IndexError):
            spectrum[0]


class TestSchedule:
    def test_chain_needs_zero_mode_ground_state(self):
        with pytest.raises(ValueError):
            ChainSpec(4, 0.0, 1.0)
        with pytest.raises(ValueError):
            ChainSpec(0, 1.0, 1.0)

    def test_only_last_segment_open(self):
        spec = ChainSpec(2, 1.0, 1.0)
        with pytest.raises(ValueError):
            QuenchSchedule(spec=spec, segments=(QuenchSegment(1.0, 1.0), QuenchSegment(2.0, 1.0, 3.0)))

    def test_negative_duration_rejected(self):
        with pytest.raises(ValueError):
            QuenchSegment(1.0, 1.0, -1.0)

    def test_boundary_times(self):
        schedule = periodic_schedule(ChainSpec(2, 3.0, 4.0), [5.0, 3.0, 5.0], 4.0, 4.0)
        assert schedule.boundary_times == (0.0, 4.0, 8.0, math.inf)
        assert schedule.segment_start(3) == 8.0
        assert not schedule.is_single_quench

    def test_single_quench(self):
        schedule = single_quench(ChainSpec(2, 3.0, 4.0), 5.0, 4.0)
        assert schedule.is_single_quench
        assert schedule.end_time == math.inf


class TestSegmentAt:
    def test_start(self, two_segments):
        i, _, tau = segment_at(two_segments, 0.0)
        assert (i, tau) == (1, 0.0)

    def test_boundary_belongs_to_later_segment(self, two_segments):
        i, segment, tau = segment_at(two_segments, 4.0)
        assert (i, tau) == (2, 0.0)
        assert segment.omega == 1.0

    def test_local_time(self, two_segments):
        i, _, tau = segment_at(two_segments, 5.5)
        assert i == 2
        assert tau == pytest.approx(1.5)

    def test_end_of_finite_schedule(self, two_segments):
        i, _, tau = segment_at(two_segments, 8.0)
        assert (i, tau) == (2, 4.0)

    def test_beyond_end(self, two_segments):
        with pytest.raises(ScheduleRangeError):
            segment_at(two_segments, 8.5)
        with pytest.raises(ScheduleRangeError):
            segment_at(two_segments, -0.1)

    def test_vectorised_matches_scalar(self, two_segments):
        times = np.array([0.0, 1.0, 3.999, 4.0, 5.5, 8.0])
        expected = [segment_at(two_segments, t)[0] - 1 for t in times]
        assert segment_indices(two_segments, times).tolist() == expected


class TestIsCritical:
    def test_exact_zero(self):
        assert is_critical(QuenchSegment(0.0, 1.0))

    def test_regular(self):
        assert not is_critical(QuenchSegment(0.3, 10.0))

    def test_below_threshold(self):
        assert is_critical(QuenchSegment(1e-13, 1.0))
