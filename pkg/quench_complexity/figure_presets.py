"""
figure_presets.py — Parameter sets of the published complexity figures.

Each figure id maps to one FigureProfile per curve (variant). Grid ranges
are chosen to cover the plotted extent and are reported in the output
metadata; they are not taken from the figures themselves.
"""

import logging
from dataclasses import dataclass
from typing import Optional

from config import DEFAULT_SAMPLES
from quench_complexity.chain_spectrum import ChainSpec, periodic_schedule, single_quench
from quench_complexity.complexity_logic import LambdaPolicy
from quench_complexity.experiments import GridSpec, Scenario

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FigureProfile:
    """
    One curve of a figure.

    A single quench when `omegas` has one entry; otherwise successive quenches
    at t = 0, T, 2T, ... with the last frequency held.
    """
    description: str
    n: int
    omega0: float
    k0: float
    omegas: tuple[float, ...]
    k: float
    period: Optional[float]
    t_start: float
    t_end: float
    policy: str = "fixed-initial"
    outputs: tuple[str, ...] = ("total", "zero-mode")
    successive_t0: Optional[float] = None


_SQ = ("total", "zero-mode", "bounds")
_FIG9 = (5.0, 0.3, 5.0, 0.3, 5.0)
_FIG9_B = (5.0, 3.0, 5.0, 3.0, 5.0)

# fmt: off
FIGURE_DATABASE: dict[str, tuple[FigureProfile, ...]] = {
    # ─── SINGLE QUENCH ───────────────────────────────────────
    # Small chain: revival times grow as the final frequency drops
    "fig1": (
        FigureProfile("N=4, ω 3→0.3, k 2→2.5",   4, 3.0, 2.0, (0.3,),  2.5, None, 0.0, 1000.0),
        FigureProfile("N=4, ω 3→0.1, k 2→2.5",   4, 3.0, 2.0, (0.1,),  2.5, None, 0.0, 1000.0),
        FigureProfile("N=4, ω 3→0.01, k 2→2.5",  4, 3.0, 2.0, (0.01,), 2.5, None, 0.0, 1000.0),
    ),
    # Large chain with lower bound C₀ and upper bound C_u
    "fig2": (
        FigureProfile("N=100, ω 0.3→0.009, k=10", 100, 0.3, 10.0, (0.009,), 10.0, None, 0.0, 2000.0, outputs=_SQ),
        FigureProfile("N=100, ω 0.3→0.004, k=10", 100, 0.3, 10.0, (0.004,), 10.0, None, 0.0, 2000.0, outputs=_SQ),
        FigureProfile("N=100, ω 0.3→0.002, k=10", 100, 0.3, 10.0, (0.002,), 10.0, None, 0.0, 2000.0, outputs=_SQ),
        FigureProfile("N=100, ω 0.3→0.001, k=10", 100, 0.3, 10.0, (0.001,), 10.0, None, 0.0, 2000.0, outputs=_SQ),
    ),
    # ─── CRITICAL QUENCH (ω_f = 0) ───────────────────────────
    "fig3": (
        FigureProfile("N=100, ω 0.05→0, k=1", 100, 0.05, 1.0, (0.0,), 1.0, None, 0.0, 500.0, outputs=_SQ),
        FigureProfile("N=100, ω 0.07→0, k=1", 100, 0.07, 1.0, (0.0,), 1.0, None, 0.0, 500.0, outputs=_SQ),
        FigureProfile("N=100, ω 0.1→0, k=1",  100, 0.1,  1.0, (0.0,), 1.0, None, 0.0, 500.0, outputs=_SQ),
        FigureProfile("N=100, ω 0.2→0, k=1",  100, 0.2,  1.0, (0.0,), 1.0, None, 0.0, 500.0, outputs=_SQ),
    ),
    # Same chains; the c_rest column carries C with the zero mode removed
    "fig4": (
        FigureProfile("N=100, ω 0.05→0, k=1, zero mode removed", 100, 0.05, 1.0, (0.0,), 1.0, None, 0.0, 500.0),
        FigureProfile("N=100, ω 0.07→0, k=1, zero mode removed", 100, 0.07, 1.0, (0.0,), 1.0, None, 0.0, 500.0),
        FigureProfile("N=100, ω 0.1→0, k=1, zero mode removed",  100, 0.1,  1.0, (0.0,), 1.0, None, 0.0, 500.0),
        FigureProfile("N=100, ω 0.2→0, k=1, zero mode removed",  100, 0.2,  1.0, (0.0,), 1.0, None, 0.0, 500.0),
    ),
    # ─── MULTIPLE QUENCHES ───────────────────────────────────
    # Five quenches between ω = 3 and 5, T = 4
    "fig5": (
        FigureProfile("N=100, ω 3↔5, k=4, T=4, five quenches", 100, 3.0, 4.0, (5.0, 3.0, 5.0, 3.0, 5.0), 4.0, 4.0, 0.0, 20.0),
    ),
    # Fifth quench to a large frequency
    "fig6": (
        FigureProfile("N=100, ω 3↔5, k=4, T=4, fifth quench to 15", 100, 3.0, 4.0, (5.0, 3.0, 5.0, 3.0, 15.0), 4.0, 4.0, 0.0, 20.0),
    ),
    # Final quench is critical; fig8 shows the literal-segment zero mode
    "fig7": (
        FigureProfile("N=100, ω 0.3↔0.085, k=4, T=55, three quenches", 100, 0.3, 4.0, (0.085, 0.3, 0.0), 4.0, 55.0, 0.0, 200.0),
        FigureProfile("N=100, ω 0.3↔0.085, k=4, T=55, five quenches",  100, 0.3, 4.0, (0.085, 0.3, 0.085, 0.3, 0.0), 4.0, 55.0, 0.0, 300.0),
    ),
    "fig8": (
        FigureProfile("N=100, ω 0.3↔0.085, k=4, T=55, three quenches", 100, 0.3, 4.0, (0.085, 0.3, 0.0), 4.0, 55.0, 0.0, 200.0, policy="literal-segment"),
        FigureProfile("N=100, ω 0.3↔0.085, k=4, T=55, five quenches",  100, 0.3, 4.0, (0.085, 0.3, 0.085, 0.3, 0.0), 4.0, 55.0, 0.0, 300.0, policy="literal-segment"),
    ),
    # ─── SUCCESSIVE-QUENCH COMPLEXITY ────────────────────────
    # Reference state at t0 in the first segment, compared up to t_2 = 2T
    "fig9": (
        FigureProfile("ω_i=0.3, ω_f=5, k=4, T=4, t0=1", 100, 0.3, 4.0, _FIG9,   4.0, 4.0, 1.0, 8.0, successive_t0=1.0),
        FigureProfile("ω_i=3, ω_f=5, k=4, T=4, t0=1",   100, 3.0, 4.0, _FIG9_B, 4.0, 4.0, 1.0, 8.0, successive_t0=1.0),
    ),
    # Reference state in the second segment, compared up to t_3 = 3T
    "fig10": (
        FigureProfile("ω_i=0.3, ω_f=5, k=4, T=4, t0=5", 100, 0.3, 4.0, _FIG9,   4.0, 4.0, 5.0, 12.0, successive_t0=5.0),
        FigureProfile("ω_i=3, ω_f=5, k=4, T=4, t0=5",   100, 3.0, 4.0, _FIG9_B, 4.0, 4.0, 5.0, 12.0, successive_t0=5.0),
    ),
    # Quench pairs (1,2) and (3,4); the second curve is compared after shifting by 2T
    "fig11": (
        FigureProfile("ω_i=0.3, ω_f=5, quenches 1→2, t0=1", 100, 0.3, 4.0, _FIG9, 4.0, 4.0, 1.0, 8.0,  successive_t0=1.0),
        FigureProfile("ω_i=0.3, ω_f=5, quenches 3→4, t0=9", 100, 0.3, 4.0, _FIG9, 4.0, 4.0, 9.0, 16.0, successive_t0=9.0),
    ),
}
# fmt: on

# Time shift aligning the second fig11 curve with the first
CROSSOVER_SHIFT = 8.0


def build_scenario(profile: FigureProfile, samples: int = DEFAULT_SAMPLES) -> Scenario:
    spec = ChainSpec(profile.n, profile.omega0, profile.k0)
    if len(profile.omegas) == 1:
        schedule = single_quench(spec, profile.omegas[0], profile.k)
    else:
        schedule = periodic_schedule(spec, profile.omegas, profile.k, profile.period)
    return Scenario(
        schedule=schedule,
        grid=GridSpec(profile.t_start, profile.t_end, samples),
        policy=LambdaPolicy(profile.policy),
        outputs=profile.outputs,
        successive_t0=profile.successive_t0,
    )


def figure_preset(figure_id: str, variant: int = 1) -> Scenario:
    """Scenario for one curve of a figure; variants are 1-based."""
    profiles = FIGURE_DATABASE.get(figure_id)
    if profiles is None:
        raise ValueError(f"unknown figure id {figure_id!r}; known: {', '.join(FIGURE_DATABASE)}")
    if not 1 <= variant <= len(profiles):
        raise ValueError(f"{figure_id} has variants 1..{len(profiles)}, got {variant}")
    profile = profiles[variant - 1]
    logger.info("Preset %s/%d: %s", figure_id, variant, profile.description)
    return build_scenario(profile)


def figure_presets() -> list[tuple[str, int, str]]:
    """(figure id, variant, description) for every preset curve."""
    return [
        (figure_id, v, profile.description)
        for figure_id, profiles in FIGURE_DATABASE.items()
        for v, profile in enumerate(profiles, start=1)
    ]
