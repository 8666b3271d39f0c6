"""Shared fixtures: small chains with hand-evaluated reference values."""

import math

import pytest

from quench_complexity.chain_spectrum import ChainSpec, QuenchSchedule, QuenchSegment, periodic_schedule, single_quench


@pytest.fixture
def n1_spec():
    """Single oscillator, ω_i = 3 (λ0 = 9)."""
    return ChainSpec(1, 3.0, 0.0)


@pytest.fixture
def n1_quench(n1_spec):
    """ω 3 → 5, held forever (λ = 25)."""
    return single_quench(n1_spec, 5.0, 0.0)


@pytest.fixture
def n1_return_quench(n1_spec):
    """ω 3 → 5 for T = π/20, then back to 3."""
    return periodic_schedule(n1_spec, [5.0, 3.0], 0.0, math.pi / 20)


@pytest.fixture
def small_chain():
    """N = 4, ω 3 → 0.3, k 2 → 2.5."""
    return single_quench(ChainSpec(4, 3.0, 2.0), 0.3, 2.5)


@pytest.fixture
def identity_quench():
    return single_quench(ChainSpec(4, 3.0, 2.0), 3.0, 2.0)


@pytest.fixture
def two_segments():
    """Two finite segments of duration 4."""
    spec = ChainSpec(3, 1.0, 1.0)
    return QuenchSchedule(spec=spec, segments=(QuenchSegment(2.0, 1.0, 4.0), QuenchSegment(1.0, 1.0, 4.0)))


@pytest.fixture
def critical_multi():
    """Three quenches, the last one to ω = 0."""
    return periodic_schedule(ChainSpec(6, 0.3, 4.0), [0.085, 0.3, 0.0], 4.0, 5.0)
