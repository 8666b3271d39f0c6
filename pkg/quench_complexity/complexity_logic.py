"""
complexity_logic.py — Nielsen complexity of the evolved Gaussian state.

Each mode contributes through its complex Gaussian frequency
Ω_j = √λ_j(0)/b² − i ḃ/b, giving

    A_j = ln(|Ω_j|/√λ_j(0)),   B_j = arctan(Im Ω_j / Re Ω_j),
    C   = ½ √Σ_j (A_j² + B_j²).

Everything here is computed from the pair (b², b·ḃ) produced by emp_solver
(or by the RK4 oracle), so both pipelines share the same formulas.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from config import LAMBDA_EPSILON, ORACLE_STEP
from quench_complexity.chain_spectrum import (
    ChainSpec, QuenchSchedule, QuenchSegment, segment_indices,
)
from quench_complexity.emp_oracle import integrate_emp_trajectory
from quench_complexity.emp_solver import (
    AuxiliaryState, ModeSolution,
    auxiliary_moments, build_chain_solutions, mode_moments,
)
from quench_complexity.errors import UnsupportedProtocolError, WindowError

logger = logging.getLogger(__name__)


class LambdaPolicy(str, Enum):
    """
    Which eigenvalue fills the numerator slot of A_j.

    FIXED_INITIAL uses λ_j(0) everywhere (continuous C, exact single-quench formulas).
    LITERAL_SEGMENT uses λ_j(0) on the first segment and the current segment's λ_j
    from the second segment on, so both policies agree until the second quench.
    """
    FIXED_INITIAL = "fixed-initial"
    LITERAL_SEGMENT = "literal-segment"

    def slot(self, lambda0, lambda_seg, seg_idx):
        """Numerator eigenvalue for 0-based segment index(es) seg_idx."""
        if self is LambdaPolicy.FIXED_INITIAL:
            return lambda0
        return np.where(np.asarray(seg_idx) == 0, lambda0, lambda_seg)


@dataclass(frozen=True)
class OmegaValue:
    """Complex Gaussian frequency Ω = re + i·im of one mode."""
    re: float
    im: float

    def __post_init__(self):
        if not self.re > 0:
            raise ValueError(f"Re Ω must be positive for a normalizable Gaussian, got {self.re}")

    @classmethod
    def from_state(cls, state: AuxiliaryState, lambda_ref: float) -> "OmegaValue":
        return cls(re=math.sqrt(lambda_ref) / state.b_squared, im=-state.b_dot / state.b)

    @property
    def modulus(self) -> float:
        return math.hypot(self.re, self.im)


@dataclass(frozen=True, eq=False)
class ComplexityBreakdown:
    """C at one instant, split into zero mode (j = N) and the rest."""
    total: float
    zero_mode: float
    rest: float
    a: np.ndarray  # A_j, index j-1
    b: np.ndarray  # B_j, index j-1


@dataclass(frozen=True, eq=False)
class ComplexityCurve:
    """Vectorised complexity on a time grid; a and b have shape (N, len(times))."""
    times: np.ndarray
    total: np.ndarray
    zero_mode: np.ndarray
    rest: np.ndarray
    a: np.ndarray
    b: np.ndarray
    nonpositive_denominators: int = 0

    def at(self, k: int) -> ComplexityBreakdown:
        return ComplexityBreakdown(
            total=float(self.total[k]), zero_mode=float(self.zero_mode[k]),
            rest=float(self.rest[k]), a=self.a[:, k].copy(), b=self.b[:, k].copy(),
        )


@dataclass(frozen=True)
class EarlyTimeSeries:
    """C²(t) = a2·t² + a4·t⁴ + O(t⁶) just after a single quench."""
    a2: float
    a4: float


@dataclass(frozen=True)
class BoundaryJump:
    """Left and right limits of C and C₀ at the start of 1-based segment `index`."""
    index: int
    time: float
    total_left: float
    total_right: float
    zero_left: float
    zero_right: float

    @property
    def total_jump(self) -> float:
        return abs(self.total_right - self.total_left)

    @property
    def zero_jump(self) -> float:
        return abs(self.zero_right - self.zero_left)


# ──────────────────────────────────────────────
# Per-mode phase functions
# ──────────────────────────────────────────────

def phase_functions_from_moments(q, flux, lambda0, lambda_slot):
    """
    A = ln[√((b·ḃ)² + λ_slot)/(√λ0·b²)],  B = arctan(b·ḃ/√λ0), with q = b².

    Works element-wise on arrays. A critical literal slot with b·ḃ = 0 gives A = −inf.
    """
    with np.errstate(divide="ignore"):
        a = 0.5 * np.log((flux * flux + lambda_slot) / (lambda0 * q * q))
    b = np.arctan(flux / np.sqrt(lambda0))
    return a, b


def mode_phase_functions(state: AuxiliaryState, lambda0: float, lambda_slot: float) -> tuple[float, float]:
    """(A_j, B_j) of one mode from its auxiliary state."""
    if not lambda0 > 0:
        raise ValueError(f"lambda0 must be > 0, got {lambda0}")
    a, b = phase_functions_from_moments(state.b_squared, state.flux, lambda0, lambda_slot)
    if np.isneginf(a):
        logger.warning("A_j diverges: critical literal slot with b·ḃ = 0")
    return float(a), float(b)


def _assemble(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(total, zero, rest) from per-mode terms of shape (N, M), summed in fixed mode order."""
    squares = 0.25 * (a * a + b * b)
    zero_sq = squares[-1]
    rest_sq = np.sum(squares[:-1], axis=0) if squares.shape[0] > 1 else np.zeros_like(zero_sq)
    return np.sqrt(zero_sq + rest_sq), np.sqrt(zero_sq), np.sqrt(rest_sq)


def _segment_lambda_table(schedule: QuenchSchedule) -> np.ndarray:
    """(S, N) eigenvalues of every mode in every segment."""
    return np.vstack([s.lambdas for s in schedule.segment_spectra()])


# ──────────────────────────────────────────────
# Complexity with the t = 0 state as reference
# ──────────────────────────────────────────────

def complexity_curve(
    schedule: QuenchSchedule,
    times,
    policy: LambdaPolicy = LambdaPolicy.FIXED_INITIAL,
    solutions: Optional[list[ModeSolution]] = None,
) -> ComplexityCurve:
    """Analytic C(t), C₀(t), C_r(t) and per-mode (A_j, B_j) on a time grid."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if solutions is None:
        solutions = build_chain_solutions(schedule)
    n = len(solutions)
    a = np.empty((n, times.size))
    b = np.empty((n, times.size))
    for row, sol in enumerate(solutions):
        q, flux, seg_idx = mode_moments(sol, schedule, times)
        lam_seg = np.array([lam for _, lam in sol.segments])[seg_idx]
        a[row], b[row] = phase_functions_from_moments(
            q, flux, sol.lambda0, policy.slot(sol.lambda0, lam_seg, seg_idx),
        )
    total, zero, rest = _assemble(a, b)
    return ComplexityCurve(times=times, total=total, zero_mode=zero, rest=rest, a=a, b=b)


def total_complexity(
    schedule: QuenchSchedule, t: float, policy: LambdaPolicy = LambdaPolicy.FIXED_INITIAL,
) -> ComplexityBreakdown:
    """C(t) with the t = 0 ground state as reference."""
    return complexity_curve(schedule, [t], policy).at(0)


def oracle_complexity_curve(
    schedule: QuenchSchedule,
    times,
    policy: LambdaPolicy = LambdaPolicy.FIXED_INITIAL,
    step: float = ORACLE_STEP,
) -> ComplexityCurve:
    """Same quantities as complexity_curve, from RK4-integrated (b, ḃ)."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    b_vals, b_dot = integrate_emp_trajectory(schedule, times, step)
    lambda0 = schedule.spec.initial_spectrum.lambdas[:, None]
    seg_idx = segment_indices(schedule, times)
    lam_seg = _segment_lambda_table(schedule)[seg_idx].T
    a, b = phase_functions_from_moments(
        b_vals * b_vals, b_vals * b_dot, lambda0, policy.slot(lambda0, lam_seg, seg_idx),
    )
    total, zero, rest = _assemble(a, b)
    return ComplexityCurve(times=times, total=total, zero_mode=zero, rest=rest, a=a, b=b)


def boundary_discontinuities(
    schedule: QuenchSchedule,
    policy: LambdaPolicy = LambdaPolicy.FIXED_INITIAL,
    solutions: Optional[list[ModeSolution]] = None,
) -> list[BoundaryJump]:
    """Left/right limits of C and C₀ at every internal quench boundary."""
    if solutions is None:
        solutions = build_chain_solutions(schedule)
    jumps = []
    for i in range(1, schedule.n_segments):
        duration = schedule.segments[i - 1].duration
        left = np.empty((2, len(solutions)))
        right = np.empty((2, len(solutions)))
        for row, sol in enumerate(solutions):
            c_prev, lam_prev = sol.segments[i - 1]
            c_next, lam_next = sol.segments[i]
            q, flux = auxiliary_moments(c_prev, lam_prev, duration)
            left[:, row] = phase_functions_from_moments(
                q, flux, sol.lambda0, policy.slot(sol.lambda0, lam_prev, i - 1))
            q, flux = auxiliary_moments(c_next, lam_next, 0.0)
            right[:, row] = phase_functions_from_moments(
                q, flux, sol.lambda0, policy.slot(sol.lambda0, lam_next, i))
        total_l, zero_l, _ = _assemble(left[0][:, None], left[1][:, None])
        total_r, zero_r, _ = _assemble(right[0][:, None], right[1][:, None])
        jumps.append(BoundaryJump(
            index=i + 1,
            time=schedule.boundary_times[i],
            total_left=float(total_l[0]), total_right=float(total_r[0]),
            zero_left=float(zero_l[0]), zero_right=float(zero_r[0]),
        ))
    return jumps


# ──────────────────────────────────────────────
# Bounds (single quench)
# ──────────────────────────────────────────────

def upper_bound_terms(
    alpha: float, gamma: float, lam: float, lambda0: float, envelope: str = "supremum",
) -> tuple[float, float]:
    """
    Per-mode upper terms (A_u, B_u) of a single quench.

    "quarter-phase": A_u = ln[√(α²λ + λ0)/(γ√λ0)], B_u = arctan(α√λ/√λ0), the mode
                     values at sin²2y = 1.
    "supremum":      the phase suprema sup|A| = |ln(λ0/λ)| and
                     sup|B| = arctan(|α|√λ/√λ0), so A² + B² ≤ A_u² + B_u² at all times.
    """
    if envelope == "quarter-phase":
        a_u = math.log(math.sqrt(alpha * alpha * lam + lambda0) / (gamma * math.sqrt(lambda0)))
        b_u = math.atan(alpha * math.sqrt(lam) / math.sqrt(lambda0))
    elif envelope == "supremum":
        a_u = abs(math.log(lambda0 / lam))
        b_u = math.atan(abs(alpha) * math.sqrt(lam) / math.sqrt(lambda0))
    else:
        raise ValueError(f"unknown envelope {envelope!r}; expected 'quarter-phase' or 'supremum'")
    return a_u, b_u


def _check_bounds_protocol(schedule: QuenchSchedule, policy: LambdaPolicy) -> None:
    if not schedule.is_single_quench:
        raise UnsupportedProtocolError(
            f"bounds are derived for a single quench; schedule has {schedule.n_segments} segments"
        )
    if policy is not LambdaPolicy.FIXED_INITIAL:
        raise UnsupportedProtocolError("bounds are derived for the fixed-initial policy")


def upper_bound_offset(
    solutions: list[ModeSolution], envelope: str = "supremum",
) -> float:
    """¼Σ_{j<N}(A_uj² + B_uj²), the time-independent part of C_u²."""
    total = 0.0
    for sol in solutions[:-1]:
        constants, lam = sol.segments[0]
        if constants.is_degenerate:
            return math.inf
        a_u, b_u = upper_bound_terms(constants.alpha, constants.gamma, lam, sol.lambda0, envelope)
        total += 0.25 * (a_u * a_u + b_u * b_u)
    return total


def bounds_curve(
    schedule: QuenchSchedule,
    times,
    policy: LambdaPolicy = LambdaPolicy.FIXED_INITIAL,
    envelope: str = "supremum",
    curve: Optional[ComplexityCurve] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """(C₀(t), C_u(t)) on a time grid; C₀ ≤ C ≤ C_u for the supremum envelope."""
    _check_bounds_protocol(schedule, policy)
    solutions = build_chain_solutions(schedule)
    if curve is None:
        curve = complexity_curve(schedule, times, policy, solutions)
    offset = upper_bound_offset(solutions, envelope)
    lower = curve.zero_mode
    upper = np.sqrt(lower * lower + offset)
    return lower, upper


def complexity_bounds(
    schedule: QuenchSchedule,
    t: float,
    policy: LambdaPolicy = LambdaPolicy.FIXED_INITIAL,
    envelope: str = "supremum",
) -> tuple[float, float]:
    """(lower C₀(t), upper C_u(t)) for a single quench."""
    lower, upper = bounds_curve(schedule, [t], policy, envelope)
    return float(lower[0]), float(upper[0])


# ──────────────────────────────────────────────
# Closed forms and series
# ──────────────────────────────────────────────

def critical_zero_mode_closed_form(omega_i, t):
    """C₀c = √[ln²(1 + ω_i²t²)/16 + arctan²(ω_i t)/4] after a quench to ω = 0."""
    x = np.asarray(omega_i, dtype=float) * np.asarray(t, dtype=float)
    value = np.sqrt(np.log1p(x * x) ** 2 / 16.0 + np.arctan(x) ** 2 / 4.0)
    return float(value) if value.ndim == 0 else value


def early_time_coefficients(spec: ChainSpec, first_segment: QuenchSegment) -> EarlyTimeSeries:
    """
    Series coefficients of C²(t) just after the first quench.

    a2 = ¼Σ(λ − λ0)²/λ0
    a4 = −(1/48)Σ(λ − λ0)²(5λ² − 6λλ0 + 5λ0²)/λ0²
    """
    lam0 = spec.initial_spectrum.lambdas
    lam = first_segment.spectrum(spec.n_oscillators).lambdas
    diff_sq = (lam - lam0) ** 2
    a2 = 0.25 * float(np.sum(diff_sq / lam0))
    a4 = -float(np.sum(diff_sq * (5 * lam * lam - 6 * lam * lam0 + 5 * lam0 * lam0) / lam0 ** 2)) / 48.0
    return EarlyTimeSeries(a2=a2, a4=a4)


def perturbative_delta_response(lambda0_j: float, omega_i: float, delta: float, t):
    """
    First-order (A_j, B_j) for ω_f = ω_i + δ at fixed coupling.

    A_j ≈ 2ω_i·δ·sin²(√λ0 t)/λ0,  B_j ≈ −ω_i·δ·sin(2√λ0 t)/λ0.
    Both vanish identically for ω_i = 0.
    """
    root = math.sqrt(lambda0_j)
    t = np.asarray(t, dtype=float)
    a = 2.0 * omega_i * delta * np.sin(root * t) ** 2 / lambda0_j
    b = -omega_i * delta * np.sin(2.0 * root * t) / lambda0_j
    if a.ndim == 0:
        return float(a), float(b)
    return a, b


def multi_quench_offset(
    schedule: QuenchSchedule, i: int, policy: LambdaPolicy = LambdaPolicy.FIXED_INITIAL,
) -> float:
    """a_{i0} = C_i²(τ → 0⁺), the zeroth-order term after quench i."""
    if not 1 <= i <= schedule.n_segments:
        raise ValueError(f"quench index {i} outside 1..{schedule.n_segments}")
    breakdown = total_complexity(schedule, schedule.segment_start(i), policy)
    return breakdown.total ** 2


# ──────────────────────────────────────────────
# Successive-quench complexity
# ──────────────────────────────────────────────

def successive_window(schedule: QuenchSchedule, t0: float) -> tuple[int, float]:
    """(0-based segment of t0, t_{i+1}): targets must lie in [t0, t_{i+1}]."""
    if t0 < 0 or t0 >= schedule.end_time:
        raise WindowError(f"reference time t0 = {t0} outside the schedule")
    i0 = int(segment_indices(schedule, np.array([t0]))[0])
    return i0, schedule.boundary_times[min(i0 + 2, schedule.n_segments)]


def _check_window(schedule: QuenchSchedule, t0: float, times: np.ndarray) -> None:
    _, window_end = successive_window(schedule, t0)
    if times.size and (times.min() < t0 or times.max() > window_end):
        raise WindowError(
            f"target times must lie in [{t0}, {window_end}], got [{times.min()}, {times.max()}]"
        )


def _successive_from_moments(q, flux, slot) -> tuple[np.ndarray, np.ndarray, int]:
    """
    Per-mode (A_s, B_s) from moments of shape (N, M+1); column 0 is the reference.

    A_s = ln(|Ω_T|/|Ω_R|),  B_s = arctan[(Im_T·Re_R − Im_R·Re_T)/(Re_R·Re_T + Im_R·Im_T)].
    """
    if np.any(slot <= LAMBDA_EPSILON):
        raise UnsupportedProtocolError(
            "literal-segment successive complexity is undefined on a critical segment (Re Ω = 0)"
        )
    re, im = np.sqrt(slot) / q, -flux / q
    re_r, im_r = re[:, :1], im[:, :1]
    re_t, im_t = re[:, 1:], im[:, 1:]
    a = 0.5 * np.log((re_t * re_t + im_t * im_t) / (re_r * re_r + im_r * im_r))
    num = im_t * re_r - im_r * re_t
    den = re_r * re_t + im_r * im_t
    nonpositive = int(np.count_nonzero(den <= 0))
    with np.errstate(divide="ignore"):
        b = np.arctan(num / den)
    if nonpositive:
        logger.warning(
            "Successive complexity: %d (mode, time) pairs with non-positive arctan denominator; "
            "principal branch kept", nonpositive,
        )
    return a, b, nonpositive


def _successive_result(times, a, b, nonpositive) -> ComplexityCurve:
    total, zero, rest = _assemble(a, b)
    return ComplexityCurve(
        times=times, total=total, zero_mode=zero, rest=rest, a=a, b=b,
        nonpositive_denominators=nonpositive,
    )


def successive_curve(
    schedule: QuenchSchedule,
    t0: float,
    times,
    policy: LambdaPolicy = LambdaPolicy.FIXED_INITIAL,
) -> ComplexityCurve:
    """
    Complexity between the state at t0 (in segment i) and states at `times`,
    allowed in t0 ≤ t ≤ t_{i+1}.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    _check_window(schedule, t0, times)
    solutions = build_chain_solutions(schedule)
    all_times = np.concatenate([[t0], times])
    shape = (len(solutions), all_times.size)
    q, flux, slot = np.empty(shape), np.empty(shape), np.empty(shape)
    for row, sol in enumerate(solutions):
        q[row], flux[row], seg_idx = mode_moments(sol, schedule, all_times)
        lam_seg = np.array([lam for _, lam in sol.segments])[seg_idx]
        slot[row] = policy.slot(sol.lambda0, lam_seg, seg_idx)
    return _successive_result(times, *_successive_from_moments(q, flux, slot))


def oracle_successive_curve(
    schedule: QuenchSchedule,
    t0: float,
    times,
    policy: LambdaPolicy = LambdaPolicy.FIXED_INITIAL,
    step: float = ORACLE_STEP,
) -> ComplexityCurve:
    """successive_curve from RK4-integrated (b, ḃ)."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    _check_window(schedule, t0, times)
    all_times = np.concatenate([[t0], times])
    b_vals, b_dot = integrate_emp_trajectory(schedule, all_times, step)
    lambda0 = schedule.spec.initial_spectrum.lambdas[:, None]
    seg_idx = segment_indices(schedule, all_times)
    lam_seg = _segment_lambda_table(schedule)[seg_idx].T
    slot = np.broadcast_to(policy.slot(lambda0, lam_seg, seg_idx), lam_seg.shape)
    return _successive_result(times, *_successive_from_moments(b_vals * b_vals, b_vals * b_dot, slot))


def successive_complexity(
    schedule: QuenchSchedule,
    t0: float,
    t: float,
    policy: LambdaPolicy = LambdaPolicy.FIXED_INITIAL,
) -> ComplexityBreakdown:
    """C_s between the states at t0 and t; (a, b) hold the per-mode (A_sj, B_sj)."""
    if t < t0:
        raise WindowError(f"target time t = {t} precedes reference time t0 = {t0}")
    return successive_curve(schedule, t0, [t], policy).at(0)
