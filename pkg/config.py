"""
config.py — Shared constants and settings.

Values read from the environment are resolved after main.py has called
load_dotenv(), so a local .env can override them.
"""

import os

# Eigenvalues at or below this (1/time²) are routed to the degenerate EMP branch.
LAMBDA_EPSILON = 1e-12

DEFAULT_SAMPLES = 2001

# ──────────────────────────────────────────────
# RK4 oracle
# ──────────────────────────────────────────────
ORACLE_STEP = float(os.getenv("QUENCH_ORACLE_STEP", "1e-4"))
ORACLE_MAX_TIME = 50.0

# ──────────────────────────────────────────────
# Output
# ──────────────────────────────────────────────
CSV_SIGNIFICANT_DIGITS = 17
LOG_LEVEL = os.getenv("QUENCH_LOG_LEVEL", "INFO")

# Float slack when comparing C against its bounds.
BOUNDS_SLACK = 1e-12

# ──────────────────────────────────────────────
# Validation suite tolerance profiles
# ──────────────────────────────────────────────
TOLERANCE_PROFILES: dict[str, dict[str, float]] = {
    "default": {
        "oracle": 1e-6,
        "constraint": 1e-9,
        "residual": 1e-9,
        "continuity": 1e-9,
        "initial": 1e-12,
        "closed_form": 1e-10,
        "early_time": 1e-3,
        "revival": 1e-10,
        "revival_ratio": 0.05,
        "drift_slope": 1e-3,
    },
    "zero": {
        "oracle": 0.0,
        "constraint": 0.0,
        "residual": 0.0,
        "continuity": 0.0,
        "initial": 0.0,
        "closed_form": 0.0,
        "early_time": 0.0,
        "revival": 0.0,
        "revival_ratio": 0.0,
        "drift_slope": 0.0,
    },
}
