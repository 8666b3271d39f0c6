"""
chain_spectrum.py — Chain description, quench schedule, and normal-mode eigenvalues.

The periodic chain H = ½Σ[p_j² + ω²x_j² + k(x_j − x_{j+1})²] decouples into
N normal modes with eigenvalues λ_j = ω² + 2k[1 − cos(2πj/N)], j = 1..N.
Mode j = N is the zero mode (λ_N = ω²).
"""

import bisect
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from config import LAMBDA_EPSILON
from quench_complexity.errors import ScheduleRangeError


@dataclass(frozen=True, eq=False)
class ModeSpectrum:
    """Normal-mode eigenvalues λ_1..λ_N of one parameter set."""
    lambdas: np.ndarray  # shape (N,), index j-1

    @property
    def n(self) -> int:
        return int(self.lambdas.shape[0])

    @property
    def zero_mode(self) -> float:
        return float(self.lambdas[-1])

    def __getitem__(self, j: int) -> float:
        """1-based mode access, matching the physics indexing."""
        if not 1 <= j <= self.n:
            raise IndexError(f"mode index {j} outside 1..{self.n}")
        return float(self.lambdas[j - 1])


def mode_eigenvalues(omega: float, coupling: float, n: int) -> ModeSpectrum:
    """
    λ_j = ω² + 2k(1 − cos(2πj/N)) for j = 1..N.

    Evaluated as ω² + 4k sin²(π·m/N) with m = min(j, N − j), which keeps the
    pair degeneracy λ_j = λ_{N−j} exact and λ_N = ω² exact.
    """
    if n < 1:
        raise ValueError(f"n_oscillators must be >= 1, got {n}")
    if omega < 0 or coupling < 0:
        raise ValueError(f"omega and coupling must be >= 0, got omega={omega}, coupling={coupling}")

    j = np.arange(1, n + 1)
    m = np.minimum(j, n - j)
    lambdas = omega * omega + 4.0 * coupling * np.sin(np.pi * m / n) ** 2
    return ModeSpectrum(lambdas=lambdas)


@dataclass(frozen=True)
class ChainSpec:
    """The t < 0 chain: oscillator count plus pre-quench frequency and coupling."""
    n_oscillators: int
    omega0: float
    coupling0: float

    def __post_init__(self):
        if self.n_oscillators < 1:
            raise ValueError(f"n_oscillators must be >= 1, got {self.n_oscillators}")
        if self.omega0 < 0 or self.coupling0 < 0:
            raise ValueError("omega0 and coupling0 must be >= 0")
        # The zero mode needs ω0 > 0 for a pre-quench ground state.
        if self.omega0 * self.omega0 <= LAMBDA_EPSILON:
            raise ValueError(
                f"pre-quench zero mode λ_N(0) = omega0² = {self.omega0 ** 2:g} "
                "has no ground state; omega0 must be positive"
            )

    @property
    def initial_spectrum(self) -> ModeSpectrum:
        return mode_eigenvalues(self.omega0, self.coupling0, self.n_oscillators)


@dataclass(frozen=True)
class QuenchSegment:
    """Constant (ω, k) held for `duration`; None means open-ended."""
    omega: float
    coupling: float
    duration: Optional[float] = None

    def __post_init__(self):
        if self.omega < 0 or self.coupling < 0:
            raise ValueError(f"segment omega/coupling must be >= 0, got {self.omega}, {self.coupling}")
        if self.duration is not None and not (self.duration > 0 and math.isfinite(self.duration)):
            raise ValueError(f"segment duration must be a positive finite time, got {self.duration}")

    @property
    def is_open_ended(self) -> bool:
        return self.duration is None

    def spectrum(self, n: int) -> ModeSpectrum:
        return mode_eigenvalues(self.omega, self.coupling, n)


@dataclass(frozen=True)
class QuenchSchedule:
    """
    Ordered piecewise-constant protocol starting at t = 0.

    Segment i (1-based) occupies [t_{i-1}, t_i). The last segment may be open-ended,
    in which case the final boundary time is +inf.
    """
    spec: ChainSpec
    segments: tuple[QuenchSegment, ...]
    boundary_times: tuple[float, ...] = field(init=False, compare=False)

    def __post_init__(self):
        segments = tuple(self.segments)
        if not segments:
            raise ValueError("a schedule needs at least one segment")
        for seg in segments[:-1]:
            if seg.is_open_ended:
                raise ValueError("only the last segment may be open-ended")
        object.__setattr__(self, "segments", segments)

        times = [0.0]
        for seg in segments:
            times.append(math.inf if seg.is_open_ended else times[-1] + seg.duration)
        object.__setattr__(self, "boundary_times", tuple(times))

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    @property
    def end_time(self) -> float:
        return self.boundary_times[-1]

    @property
    def is_single_quench(self) -> bool:
        return len(self.segments) == 1

    def segment_start(self, i: int) -> float:
        """Global start time of 1-based segment i."""
        return self.boundary_times[i - 1]

    def segment_spectra(self) -> list[ModeSpectrum]:
        return [seg.spectrum(self.spec.n_oscillators) for seg in self.segments]


def single_quench(spec: ChainSpec, omega: float, coupling: float) -> QuenchSchedule:
    """One quench at t = 0 to (omega, coupling), held forever."""
    return QuenchSchedule(spec=spec, segments=(QuenchSegment(omega, coupling, None),))


def periodic_schedule(
    spec: ChainSpec,
    omegas: Sequence[float],
    coupling: float,
    period: float,
) -> QuenchSchedule:
    """Successive quenches at t = 0, T, 2T, ...; the last frequency is held open-ended."""
    segments = [QuenchSegment(w, coupling, period) for w in omegas[:-1]]
    segments.append(QuenchSegment(omegas[-1], coupling, None))
    return QuenchSchedule(spec=spec, segments=tuple(segments))


def segment_at(schedule: QuenchSchedule, t: float) -> tuple[int, QuenchSegment, float]:
    """
    Locate the segment holding global time t.

    Returns (1-based index, segment, local time τ = t − t_{i-1}). Boundary
    instants belong to the later segment; the closing instant of a finite
    schedule is reported in its last segment with τ = duration.
    """
    if t < 0:
        raise ScheduleRangeError(f"t must be >= 0, got {t}")
    if t > schedule.end_time:
        raise ScheduleRangeError(
            f"t = {t} lies beyond the schedule end {schedule.end_time}"
        )
    starts = schedule.boundary_times[:-1]
    idx = bisect.bisect_right(starts, t) - 1
    return idx + 1, schedule.segments[idx], t - starts[idx]


def segment_indices(schedule: QuenchSchedule, times: np.ndarray) -> np.ndarray:
    """Vectorised segment_at: 0-based segment index for every time in `times`."""
    times = np.asarray(times, dtype=float)
    if times.size and (times.min() < 0 or times.max() > schedule.end_time):
        raise ScheduleRangeError(
            f"times span [{times.min()}, {times.max()}] outside [0, {schedule.end_time}]"
        )
    starts = np.asarray(schedule.boundary_times[:-1])
    return np.searchsorted(starts, times, side="right") - 1


def is_critical(segment: QuenchSegment) -> bool:
    """True iff the zero mode λ_N = ω² of this segment is treated as exactly zero."""
    return segment.omega * segment.omega <= LAMBDA_EPSILON
