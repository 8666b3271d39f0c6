"""
emp_oracle.py — Brute-force RK4 integration of the EMP equation.

Independent of the analytic constants in emp_solver: integrates
b̈ = −λ_j(t) b + λ_j(0)/b³ from (b, ḃ) = (1, 0) with a classical fixed-step
fourth-order Runge-Kutta scheme. Substeps are aligned to segment boundaries
and to every requested output time, so λ is constant inside each RK step.

The kernel is compiled with numba and parallelised over
modes; modes never interact, so the parallel result equals the serial one.
"""

import logging
import math

import numpy as np
from numba import njit, prange

from config import ORACLE_STEP
from quench_complexity.chain_spectrum import QuenchSchedule
from quench_complexity.emp_solver import AuxiliaryState
from quench_complexity.errors import IntegrationInstabilityError, ScheduleRangeError

logger = logging.getLogger(__name__)

@njit(parallel=True, cache=True)
def _rk4_kernel(lambda0, seg_lambdas, seg_starts, checkpoints, step):
    """
    lambda0:      (N,) pre-quench eigenvalues
    seg_lambdas:  (S, N) eigenvalue of every mode in every segment
    seg_starts:   (S,) global start time of each segment
    checkpoints:  (M,) sorted output times
    Returns b, ḃ of shape (N, M) and a per-mode failure flag.
    """
    n_modes = lambda0.shape[0]
    n_seg = seg_starts.shape[0]
    n_out = checkpoints.shape[0]
    out_b = np.empty((n_modes, n_out))
    out_v = np.empty((n_modes, n_out))
    failed = np.zeros(n_modes, dtype=np.int64)

    for j in prange(n_modes):
        l0 = lambda0[j]
        b = 1.0
        v = 0.0
        t = 0.0
        seg = 0
        for k in range(n_out):
            target = checkpoints[k]
            while t < target and failed[j] == 0:
                while seg + 1 < n_seg and seg_starts[seg + 1] <= t:
                    seg += 1
                stop = target
                if seg + 1 < n_seg and seg_starts[seg + 1] < stop:
                    stop = seg_starts[seg + 1]
                span = stop - t
                n_sub = int(math.ceil(span / step))
                if n_sub < 1:
                    n_sub = 1
                h = span / n_sub
                lam = seg_lambdas[seg, j]
                for _ in range(n_sub):
                    k1b = v
                    k1v = -lam * b + l0 / (b * b * b)
                    bb = b + 0.5 * h * k1b
                    k2b = v + 0.5 * h * k1v
                    k2v = -lam * bb + l0 / (bb * bb * bb)
                    bb = b + 0.5 * h * k2b
                    k3b = v + 0.5 * h * k2v
                    k3v = -lam * bb + l0 / (bb * bb * bb)
                    bb = b + h * k3b
                    k4b = v + h * k3v
                    k4v = -lam * bb + l0 / (bb * bb * bb)
                    b = b + h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
                    v = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
                    if not b > 0.0:
                        failed[j] = 1
                        break
                t = stop
            if failed[j] == 0:
                out_b[j, k] = b
                out_v[j, k] = v
            else:
                out_b[j, k] = np.nan
                out_v[j, k] = np.nan
    return out_b, out_v, failed


def _schedule_arrays(schedule: QuenchSchedule) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    lambda0 = np.ascontiguousarray(schedule.spec.initial_spectrum.lambdas, dtype=np.float64)
    seg_lambdas = np.ascontiguousarray(
        np.vstack([s.lambdas for s in schedule.segment_spectra()]), dtype=np.float64,
    )
    seg_starts = np.asarray(schedule.boundary_times[:-1], dtype=np.float64)
    return lambda0, seg_lambdas, seg_starts


def integrate_emp_trajectory(
    schedule: QuenchSchedule, times, step: float = ORACLE_STEP,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Integrate every mode and return (b, ḃ), each of shape (N, len(times)).

    `times` must be non-decreasing, non-negative and within the schedule.
    """
    if not step > 0:
        raise ValueError(f"integration step must be > 0, got {step}")
    times = np.ascontiguousarray(times, dtype=np.float64)
    if times.size == 0:
        n = schedule.spec.n_oscillators
        return np.empty((n, 0)), np.empty((n, 0))
    if times[0] < 0 or np.any(np.diff(times) < 0):
        raise ValueError("oracle output times must be non-negative and sorted")
    if times[-1] > schedule.end_time:
        raise ScheduleRangeError(f"t = {times[-1]} lies beyond the schedule end {schedule.end_time}")

    lambda0, seg_lambdas, seg_starts = _schedule_arrays(schedule)
    logger.info(
        "RK4 oracle: %d modes to t=%.4g with step %.1e", lambda0.shape[0], times[-1], step,
    )
    b, b_dot, failed = _rk4_kernel(lambda0, seg_lambdas, seg_starts, times, step)
    if failed.any():
        modes = [int(j) + 1 for j in np.nonzero(failed)[0]]
        raise IntegrationInstabilityError(
            f"b reached zero for modes {modes[:10]} with step {step}; reduce the step size"
        )
    return b, b_dot


def integrate_emp_oracle(
    schedule: QuenchSchedule, j: int, t_end: float, step: float = ORACLE_STEP,
) -> AuxiliaryState:
    """(b, ḃ) of mode j at t_end by RK4 integration from the initial conditions."""
    n = schedule.spec.n_oscillators
    if not 1 <= j <= n:
        raise ValueError(f"mode index {j} outside 1..{n}")
    if not step > 0:
        raise ValueError(f"integration step must be > 0, got {step}")
    if t_end < 0:
        raise ValueError(f"t_end must be >= 0, got {t_end}")
    if t_end > schedule.end_time:
        raise ScheduleRangeError(f"t = {t_end} lies beyond the schedule end {schedule.end_time}")

    lambda0, seg_lambdas, seg_starts = _schedule_arrays(schedule)
    b, b_dot, failed = _rk4_kernel(
        lambda0[j - 1:j].copy(),
        np.ascontiguousarray(seg_lambdas[:, j - 1:j]),
        seg_starts,
        np.array([float(t_end)]),
        float(step),
    )
    if failed[0]:
        raise IntegrationInstabilityError(
            f"b reached zero for mode {j} before t = {t_end} with step {step}"
        )
    return AuxiliaryState(b=float(b[0, 0]), b_dot=float(b_dot[0, 0]))
