"""
experiments.py — Scenarios, curve sampling and the curve-level analyses
(derivatives, revival periods, crossovers, bound sweeps).
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from config import BOUNDS_SLACK, DEFAULT_SAMPLES, ORACLE_STEP
from quench_complexity.chain_spectrum import QuenchSchedule
from quench_complexity.complexity_logic import (
    ComplexityCurve, LambdaPolicy, bounds_curve, complexity_curve,
    oracle_complexity_curve, oracle_successive_curve, successive_curve,
)
from quench_complexity.errors import UnsupportedProtocolError

logger = logging.getLogger(__name__)

# Column groups a scenario can request, in emission order
OUTPUT_KINDS = ("total", "zero-mode", "bounds", "modes")
DEFAULT_OUTPUTS = ("total", "zero-mode")


@dataclass(frozen=True)
class GridSpec:
    """Uniform time grid: `samples` points from start to end inclusive."""
    start: float
    end: float
    samples: int = DEFAULT_SAMPLES

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError(f"grid needs at least 2 samples, got {self.samples}")
        if not self.start < self.end:
            raise ValueError(f"grid start {self.start} must be below end {self.end}")
        if self.start < 0:
            raise ValueError(f"grid start must be >= 0, got {self.start}")

    def times(self) -> np.ndarray:
        return np.linspace(self.start, self.end, self.samples)


@dataclass(frozen=True)
class Scenario:
    """A schedule, where to sample it, and what to report."""
    schedule: QuenchSchedule
    grid: GridSpec
    policy: LambdaPolicy = LambdaPolicy.FIXED_INITIAL
    outputs: tuple[str, ...] = DEFAULT_OUTPUTS
    successive_t0: Optional[float] = None

    def __post_init__(self):
        unknown = set(self.outputs) - set(OUTPUT_KINDS)
        if unknown:
            raise ValueError(f"unknown outputs {sorted(unknown)}; expected a subset of {OUTPUT_KINDS}")
        # canonical order so equal requests compare equal
        object.__setattr__(self, "outputs", tuple(k for k in OUTPUT_KINDS if k in self.outputs))

    @property
    def is_successive(self) -> bool:
        return self.successive_t0 is not None

    @property
    def wants_bounds(self) -> bool:
        return "bounds" in self.outputs

    @property
    def wants_modes(self) -> bool:
        return "modes" in self.outputs


@dataclass(frozen=True)
class CurveSample:
    """One grid point of an emitted curve."""
    t: float
    c_total: float
    c_zero: float
    c_rest: float
    c_lower: Optional[float] = None
    c_upper: Optional[float] = None
    a: Optional[tuple[float, ...]] = None
    b: Optional[tuple[float, ...]] = None


@dataclass(frozen=True)
class SampledScenario:
    """Grid samples of a scenario plus the successive-branch flag count."""
    samples: list[CurveSample]
    nonpositive_denominators: int = 0


@dataclass(frozen=True)
class BoundsReport:
    violations: int
    worst_margin: float  # min over samples of the bound slack; negative means violated
    n_samples: int


# ──────────────────────────────────────────────
# Evaluation
# ──────────────────────────────────────────────

def scenario_curve(
    scenario: Scenario, oracle: bool = False, times: Optional[np.ndarray] = None,
    step: float = ORACLE_STEP,
) -> ComplexityCurve:
    """Analytic (or RK4-oracle) complexity of a scenario on its grid, or on `times`."""
    if times is None:
        times = scenario.grid.times()
    if scenario.is_successive:
        if oracle:
            return oracle_successive_curve(
                scenario.schedule, scenario.successive_t0, times, scenario.policy, step)
        return successive_curve(scenario.schedule, scenario.successive_t0, times, scenario.policy)
    if oracle:
        return oracle_complexity_curve(scenario.schedule, times, scenario.policy, step)
    return complexity_curve(scenario.schedule, times, scenario.policy)


def _bounds_applicable(scenario: Scenario) -> bool:
    return (
        not scenario.is_successive
        and scenario.schedule.is_single_quench
        and scenario.policy is LambdaPolicy.FIXED_INITIAL
    )


def evaluate_scenario(scenario: Scenario) -> SampledScenario:
    """Evaluate the scenario on its grid once, in grid order."""
    curve = scenario_curve(scenario)
    lower = upper = None
    if scenario.wants_bounds:
        if _bounds_applicable(scenario):
            lower, upper = bounds_curve(scenario.schedule, curve.times, scenario.policy, curve=curve)
        else:
            logger.warning("Bounds requested but only defined for fixed-initial single quenches; omitted")

    samples = []
    for k, t in enumerate(curve.times):
        samples.append(CurveSample(
            t=float(t),
            c_total=float(curve.total[k]),
            c_zero=float(curve.zero_mode[k]),
            c_rest=float(curve.rest[k]),
            c_lower=None if lower is None else float(lower[k]),
            c_upper=None if upper is None else float(upper[k]),
            a=tuple(curve.a[:, k].tolist()) if scenario.wants_modes else None,
            b=tuple(curve.b[:, k].tolist()) if scenario.wants_modes else None,
        ))
    logger.info("Sampled %d points on [%g, %g]", len(samples), scenario.grid.start, scenario.grid.end)
    return SampledScenario(samples=samples, nonpositive_denominators=curve.nonpositive_denominators)


def sample_curve(scenario: Scenario) -> list[CurveSample]:
    return evaluate_scenario(scenario).samples


def _column(curve: Sequence[CurveSample], name: str) -> tuple[np.ndarray, np.ndarray]:
    times = np.array([s.t for s in curve], dtype=float)
    values = np.array([getattr(s, name) for s in curve], dtype=float)
    return times, values


# ──────────────────────────────────────────────
# Curve analyses
# ──────────────────────────────────────────────

def numeric_derivative(curve: Sequence[CurveSample], column: str = "c_total") -> tuple[np.ndarray, np.ndarray]:
    """(t, dC/dt): central differences inside, one-sided at both ends."""
    if len(curve) < 3:
        raise ValueError(f"numeric derivative needs at least 3 samples, got {len(curve)}")
    times, values = _column(curve, column)
    return times, np.gradient(values, times)


def extract_revival_period(curve: Sequence[CurveSample], zero_mode: bool = False) -> float:
    """
    Median spacing of the deep minima of C (or C₀).

    A deep minimum is the lowest sample of each contiguous run below
    min + ¼(max − min).
    """
    times, values = _column(curve, "c_zero" if zero_mode else "c_total")
    lo, hi = float(values.min()), float(values.max())
    below = values <= lo + 0.25 * (hi - lo)

    minima = []
    k = 0
    while k < len(values):
        if below[k]:
            end = k
            while end + 1 < len(values) and below[end + 1]:
                end += 1
            minima.append(times[k + int(np.argmin(values[k:end + 1]))])
            k = end + 1
        else:
            k += 1
    if len(minima) < 2:
        raise ValueError(f"found {len(minima)} deep minima; the curve must span at least two revivals")
    return float(np.median(np.diff(minima)))


def detect_crossover(
    curve_a: Sequence[CurveSample],
    curve_b: Sequence[CurveSample],
    window: tuple[float, float],
    shift_b: float = 0.0,
    column: str = "c_total",
) -> list[float]:
    """
    Times in `window` where a − b changes sign, by linear interpolation.

    curve_b's times are moved by −shift_b before comparison; both curves must
    then share the same grid.
    """
    t_a, a = _column(curve_a, column)
    t_b, b = _column(curve_b, column)
    t_b = t_b - shift_b
    if t_a.shape != t_b.shape:
        raise ValueError(f"curves have {t_a.size} and {t_b.size} samples")
    if t_a.size and not np.allclose(t_a, t_b, rtol=0.0, atol=1e-9 * (1.0 + np.abs(t_a).max())):
        raise ValueError("curves do not share a grid after shifting")

    mask = (t_a >= window[0]) & (t_a <= window[1])
    t, diff = t_a[mask], (a - b)[mask]
    crossings = []
    last_k = None
    for k in range(len(diff)):
        if diff[k] == 0:
            continue
        if last_k is not None and np.sign(diff[k]) != np.sign(diff[last_k]):
            t0, t1 = t[last_k], t[k]
            d0, d1 = diff[last_k], diff[k]
            crossings.append(float(t0 + (t1 - t0) * d0 / (d0 - d1)))
        last_k = k
    return crossings


def verify_bounds_sweep(scenario: Scenario, lower_only: bool = False) -> BoundsReport:
    """Count samples where C₀ ≤ C ≤ C_u fails (beyond BOUNDS_SLACK)."""
    if not scenario.schedule.is_single_quench or scenario.is_successive:
        raise UnsupportedProtocolError("bounds sweeps need a single-quench scenario")
    curve = scenario_curve(scenario)
    lower, upper = bounds_curve(scenario.schedule, curve.times, scenario.policy, curve=curve)
    margin = curve.total - lower
    if not lower_only:
        margin = np.minimum(margin, upper - curve.total)
    violations = int(np.count_nonzero(margin < -BOUNDS_SLACK))
    if violations:
        logger.warning("Bounds sweep: %d violations, worst margin %.3e", violations, margin.min())
    return BoundsReport(violations=violations, worst_margin=float(margin.min()), n_samples=int(margin.size))
