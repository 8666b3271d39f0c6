"""
emp_solver.py — Piecewise-analytic solution of the Ermakov-Milne-Pinney equation.

Per mode j the auxiliary function obeys

    b̈ + λ_j(t) b − λ_j(0)/b³ = 0,    b(0) = 1, ḃ(0) = 0.

On a segment of constant λ > 0 the general solution is
b² = α cos 2y + β sin 2y + γ with y = √λ·τ and γ² − β² − α² = λ_j(0)/λ.
For λ = 0 it is b² = a0 + 2a1τ + a2τ² with a0·a2 − a1² = λ_j(0).
Local time τ restarts at every boundary; constants are re-anchored there
from the matched (b², b·ḃ) pair.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from config import LAMBDA_EPSILON
from quench_complexity.chain_spectrum import QuenchSchedule, segment_indices
from quench_complexity.errors import ConsistencyError

logger = logging.getLogger(__name__)

NON_DEGENERATE = "non-degenerate"
DEGENERATE = "degenerate"

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class SegmentConstants:
    """
    Constants of one segment's EMP solution.

    non-degenerate: b² = α cos 2y + β sin 2y + γ
    degenerate:     b² = a0 + 2·a1·τ + a2·τ²

    `anchor` is the matched b²(τ = 0), exactly 1.0 on the first segment.
    """
    kind: str
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    a0: float = 0.0
    a1: float = 0.0
    a2: float = 0.0
    anchor: Optional[float] = None

    @classmethod
    def non_degenerate(
        cls, alpha: float, beta: float, gamma: float, anchor: Optional[float] = None,
    ) -> "SegmentConstants":
        return cls(kind=NON_DEGENERATE, alpha=alpha, beta=beta, gamma=gamma, anchor=anchor)

    @classmethod
    def degenerate(cls, a0: float, a1: float, a2: float) -> "SegmentConstants":
        return cls(kind=DEGENERATE, a0=a0, a1=a1, a2=a2)

    @property
    def is_degenerate(self) -> bool:
        return self.kind == DEGENERATE

    @property
    def start_value(self) -> float:
        """b² at τ = 0."""
        if self.is_degenerate:
            return self.a0
        return self.alpha + self.gamma if self.anchor is None else self.anchor


@dataclass(frozen=True)
class AuxiliaryState:
    """(b, ḃ) of one mode at one instant."""
    b: float
    b_dot: float

    def __post_init__(self):
        if not self.b > 0:
            raise ConsistencyError(f"auxiliary function must stay positive, got b = {self.b}")

    @property
    def b_squared(self) -> float:
        return self.b * self.b

    @property
    def flux(self) -> float:
        """b·ḃ, the quantity the complexity formulas consume."""
        return self.b * self.b_dot

    @classmethod
    def from_moments(cls, b_squared: float, flux: float) -> "AuxiliaryState":
        if not b_squared > 0:
            raise ConsistencyError(f"non-positive b² = {b_squared}")
        b = math.sqrt(b_squared)
        return cls(b=b, b_dot=flux / b)


@dataclass(frozen=True)
class ModeSolution:
    """Chained per-segment constants of mode j; segments[i] = (constants, λ_seg)."""
    j: int
    lambda0: float
    segments: tuple[tuple[SegmentConstants, float], ...]


# ──────────────────────────────────────────────
# Single-segment algebra
# ──────────────────────────────────────────────

def initial_segment_constants(lambda0: float, lambda_seg: float) -> SegmentConstants:
    """Constants satisfying b(0) = 1, ḃ(0) = 0 on the first segment."""
    if not lambda0 > 0:
        raise ValueError(f"lambda0 must be > 0 (pre-quench ground state), got {lambda0}")
    if lambda_seg < 0:
        raise ValueError(f"segment eigenvalue must be >= 0, got {lambda_seg}")

    if lambda_seg <= LAMBDA_EPSILON:
        return SegmentConstants.degenerate(1.0, 0.0, lambda0)
    return SegmentConstants.non_degenerate(
        alpha=(lambda_seg - lambda0) / (2.0 * lambda_seg),
        beta=0.0,
        gamma=(lambda_seg + lambda0) / (2.0 * lambda_seg),
        anchor=1.0,
    )


def auxiliary_moments(
    constants: SegmentConstants, lambda_seg: float, tau: ArrayLike,
) -> tuple[ArrayLike, ArrayLike]:
    """
    Return (b², b·ḃ) at local time(s) tau.

    The non-degenerate b² is evaluated as b²(0) − 2α sin²y + β sin 2y, which
    avoids cancelling γ against α cos 2y when λ0/λ is large and returns the
    matched start value exactly at τ = 0.
    """
    tau = np.asarray(tau, dtype=float)
    if constants.is_degenerate:
        q = constants.a0 + 2.0 * constants.a1 * tau + constants.a2 * tau * tau
        flux = constants.a1 + constants.a2 * tau
    else:
        root = math.sqrt(lambda_seg)
        y = root * tau
        sin_y = np.sin(y)
        q = constants.start_value - 2.0 * constants.alpha * sin_y * sin_y \
            + constants.beta * np.sin(2.0 * y)
        flux = root * (constants.beta * np.cos(2.0 * y) - constants.alpha * np.sin(2.0 * y))

    if np.any(q <= 0):
        raise ConsistencyError(
            f"b² became non-positive (min {np.min(q):.3e}) for constants {constants}"
        )
    if q.ndim == 0:
        return float(q), float(flux)
    return q, flux


def evaluate_auxiliary(constants: SegmentConstants, lambda_seg: float, tau: float) -> AuxiliaryState:
    """(b, ḃ) at local time tau on a segment of eigenvalue lambda_seg."""
    if tau < 0:
        raise ValueError(f"local time must be >= 0, got {tau}")
    q, flux = auxiliary_moments(constants, lambda_seg, tau)
    return AuxiliaryState.from_moments(q, flux)


def _second_derivative(constants: SegmentConstants, lambda_seg: float, tau: ArrayLike) -> ArrayLike:
    """d²(b²)/dτ²."""
    if constants.is_degenerate:
        return 2.0 * constants.a2
    y2 = 2.0 * math.sqrt(lambda_seg) * np.asarray(tau, dtype=float)
    return -4.0 * lambda_seg * (constants.alpha * np.cos(y2) + constants.beta * np.sin(y2))


def auxiliary_acceleration(constants: SegmentConstants, lambda_seg: float, tau: ArrayLike) -> ArrayLike:
    """b̈ from the closed form: b̈ = (q·q''/2 − (b·ḃ)²)/q^{3/2} with q = b²."""
    q, flux = auxiliary_moments(constants, lambda_seg, tau)
    q_dd = _second_derivative(constants, lambda_seg, tau)
    return (0.5 * q * q_dd - flux * flux) / np.power(q, 1.5)


def _resolution_scale(constants: SegmentConstants, lambda_seg: float, lambda0: float, tau: ArrayLike) -> ArrayLike:
    """Magnitude of the terms that cancel in b³·(b̈ + λb) − λ0."""
    c = constants
    if c.is_degenerate:
        tau = np.asarray(tau, dtype=float)
        q_abs = c.a0 + 2.0 * abs(c.a1) * tau + c.a2 * tau * tau
        flux_abs = abs(c.a1) + c.a2 * tau
        return c.a2 * q_abs + flux_abs * flux_abs + lambda0
    return lambda_seg * (c.gamma ** 2 + c.beta ** 2 + c.alpha ** 2) + lambda0


def emp_residual(
    constants: SegmentConstants, lambda_seg: float, lambda0: float, tau: ArrayLike, relative: bool = False,
) -> ArrayLike:
    """
    b̈ + λ b − λ0/b³ evaluated on the closed form; zero for a valid solution.

    With `relative` the absolute residual is multiplied by b³ and divided by
    λ(γ² + β² + α²) + λ0 (a2·b² + (b·ḃ)² + λ0 on a degenerate segment), the
    size of the terms b² is resolved from.
    """
    q, flux = auxiliary_moments(constants, lambda_seg, tau)
    if relative:
        q_dd = _second_derivative(constants, lambda_seg, tau)
        cubed = 0.5 * q * q_dd - flux * flux + lambda_seg * q * q - lambda0
        return np.abs(cubed) / _resolution_scale(constants, lambda_seg, lambda0, tau)
    b = np.sqrt(q)
    return auxiliary_acceleration(constants, lambda_seg, tau) + lambda_seg * b - lambda0 / (q * b)


def constants_from_boundary(
    b_squared: float, flux: float, lambda_next: float, lambda0: float,
) -> SegmentConstants:
    """Constants whose τ = 0 values are (b², b·ḃ) = (B, D) on a segment of eigenvalue lambda_next."""
    if not b_squared > 0:
        raise ConsistencyError(f"cannot match at a boundary with b² = {b_squared}")

    if lambda_next <= LAMBDA_EPSILON:
        # a0·a2 − a1² = λ0 fixes a2
        return SegmentConstants.degenerate(
            a0=b_squared, a1=flux, a2=(lambda0 + flux * flux) / b_squared,
        )
    beta = flux / math.sqrt(lambda_next)
    gamma = (lambda0 / lambda_next + beta * beta + b_squared * b_squared) / (2.0 * b_squared)
    return SegmentConstants.non_degenerate(
        alpha=b_squared - gamma, beta=beta, gamma=gamma, anchor=b_squared,
    )


def propagate_constants(
    prev: SegmentConstants,
    lambda_prev: float,
    lambda_next: float,
    lambda0: float,
    boundary_tau: float,
) -> SegmentConstants:
    """Carry b and ḃ across a boundary at local time boundary_tau of the previous segment."""
    q, flux = auxiliary_moments(prev, lambda_prev, boundary_tau)
    return constants_from_boundary(q, flux, lambda_next, lambda0)


def wronskian_invariant_residual(
    constants: SegmentConstants, lambda_seg: float, lambda0: float, relative: bool = False,
) -> float:
    """
    |γ² − β² − α² − λ0/λ| or |a0·a2 − a1² − λ0|.

    With `relative` the residual is divided by γ² + β² + α² (a0·a2 + a1²), the
    size of the terms that cancel.
    """
    c = constants
    if c.is_degenerate:
        residual = abs(c.a0 * c.a2 - c.a1 ** 2 - lambda0)
        return residual / (c.a0 * c.a2 + c.a1 ** 2) if relative else residual
    # (γ − α)(γ + α) keeps relative precision when γ ≈ −α is large
    invariant = (c.gamma - c.alpha) * (c.gamma + c.alpha) - c.beta ** 2
    residual = abs(invariant - lambda0 / lambda_seg)
    return residual / (c.gamma ** 2 + c.beta ** 2 + c.alpha ** 2) if relative else residual


# ──────────────────────────────────────────────
# Whole-schedule solutions
# ──────────────────────────────────────────────

def _chain_mode(j: int, lambda0: float, lambdas: list[float], durations: list) -> ModeSolution:
    constants = initial_segment_constants(lambda0, lambdas[0])
    segments = [(constants, lambdas[0])]
    for i in range(1, len(lambdas)):
        constants = propagate_constants(
            constants, lambdas[i - 1], lambdas[i], lambda0, durations[i - 1],
        )
        segments.append((constants, lambdas[i]))
    return ModeSolution(j=j, lambda0=lambda0, segments=tuple(segments))


def build_mode_solution(schedule: QuenchSchedule, j: int) -> ModeSolution:
    """Chain initial_segment_constants and propagate_constants across every segment of mode j."""
    n = schedule.spec.n_oscillators
    if not 1 <= j <= n:
        raise ValueError(f"mode index {j} outside 1..{n}")
    lambda0 = schedule.spec.initial_spectrum[j]
    lambdas = [spectrum[j] for spectrum in schedule.segment_spectra()]
    durations = [seg.duration for seg in schedule.segments]
    return _chain_mode(j, lambda0, lambdas, durations)


def build_chain_solutions(schedule: QuenchSchedule) -> list[ModeSolution]:
    """Mode solutions for j = 1..N, computing every spectrum once."""
    lambda0 = schedule.spec.initial_spectrum.lambdas
    spectra = [s.lambdas for s in schedule.segment_spectra()]
    durations = [seg.duration for seg in schedule.segments]
    solutions = [
        _chain_mode(j, float(lambda0[j - 1]), [float(s[j - 1]) for s in spectra], durations)
        for j in range(1, schedule.spec.n_oscillators + 1)
    ]
    logger.debug("Built %d mode solutions over %d segments", len(solutions), schedule.n_segments)
    return solutions


def mode_moments(
    solution: ModeSolution, schedule: QuenchSchedule, times: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(b², b·ḃ, segment index) of one mode at global times."""
    times = np.asarray(times, dtype=float)
    seg_idx = segment_indices(schedule, times)
    q = np.empty_like(times)
    flux = np.empty_like(times)
    for i in np.unique(seg_idx):
        mask = seg_idx == i
        constants, lam = solution.segments[i]
        tau = times[mask] - schedule.boundary_times[i]
        q[mask], flux[mask] = auxiliary_moments(constants, lam, tau)
    return q, flux, seg_idx


def mode_state_at(solution: ModeSolution, schedule: QuenchSchedule, t: float) -> AuxiliaryState:
    q, flux, _ = mode_moments(solution, schedule, np.array([t]))
    return AuxiliaryState.from_moments(float(q[0]), float(flux[0]))


def boundary_mismatch(solution: ModeSolution, schedule: QuenchSchedule) -> float:
    """Largest relative jump of b or ḃ across the internal boundaries of one mode."""
    worst = 0.0
    for i in range(1, len(solution.segments)):
        prev_constants, prev_lam = solution.segments[i - 1]
        left = evaluate_auxiliary(prev_constants, prev_lam, schedule.segments[i - 1].duration)
        right = evaluate_auxiliary(*solution.segments[i], 0.0)
        worst = max(
            worst,
            abs(left.b - right.b) / (1.0 + abs(left.b)),
            abs(left.b_dot - right.b_dot) / (1.0 + abs(left.b_dot)),
        )
    return worst
