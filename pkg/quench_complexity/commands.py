"""
commands.py — Handlers behind the `main.py` subcommands.

Each handler takes the parsed argparse namespace and returns an exit code.
Errors are raised, not printed; main.py maps them to exit codes.
"""

import json
import logging
import sys
from dataclasses import replace
from typing import Optional

from quench_complexity.complexity_logic import (
    LambdaPolicy, early_time_coefficients, multi_quench_offset,
)
from quench_complexity.config_io import load_config
from quench_complexity.curve_export import emit_curve, write_csv, write_json
from quench_complexity.errors import ConfigError
from quench_complexity.experiments import (
    OUTPUT_KINDS, GridSpec, Scenario, detect_crossover, evaluate_scenario, sample_curve,
)
from quench_complexity.figure_presets import figure_preset, figure_presets
from quench_complexity.validation_suite import run_validation_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_IO_ERROR = 3
EXIT_NUMERIC_ERROR = 4


# ──────────────────────────────────────────────
# Flag parsing
# ──────────────────────────────────────────────

def parse_grid(text: str) -> GridSpec:
    """'start:end:samples' → GridSpec."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--grid expects start:end:samples, got {text!r}")
    try:
        return GridSpec(float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError as e:
        raise ConfigError(f"--grid {text!r}: {e}") from e


def parse_window(text: str) -> tuple[float, float]:
    parts = text.split(":")
    try:
        start, end = (float(p) for p in parts)
    except ValueError as e:
        raise ConfigError(f"--window expects start:end, got {text!r}") from e
    if not start < end:
        raise ConfigError(f"--window start must be below end, got {text!r}")
    return start, end


def parse_outputs(text: str) -> tuple[str, ...]:
    outputs = tuple(o.strip() for o in text.split(",") if o.strip())
    unknown = set(outputs) - set(OUTPUT_KINDS)
    if unknown:
        raise ConfigError(f"--outputs: unknown {sorted(unknown)}; expected a subset of {OUTPUT_KINDS}")
    return outputs


def apply_overrides(scenario: Scenario, args) -> Scenario:
    """Apply --policy, --grid and --outputs on top of a loaded scenario."""
    changes = {}
    if getattr(args, "policy", None):
        changes["policy"] = LambdaPolicy(args.policy)
    if getattr(args, "grid", None):
        changes["grid"] = parse_grid(args.grid)
    if getattr(args, "outputs", None):
        changes["outputs"] = parse_outputs(args.outputs)
    return replace(scenario, **changes) if changes else scenario


# ──────────────────────────────────────────────
# Curve output
# ──────────────────────────────────────────────

def _write_curve(scenario: Scenario, out: Optional[str], fmt: str, figure: Optional[str] = None) -> None:
    result = evaluate_scenario(scenario)
    curve, flagged = result.samples, result.nonpositive_denominators
    if out and out != "-":
        emit_curve(curve, fmt, out, scenario, figure, nonpositive_denominators=flagged)
    elif fmt == "csv":
        write_csv(curve, sys.stdout)
    else:
        write_json(curve, scenario, sys.stdout, figure, flagged)


def cmd_run(args) -> int:
    scenario = apply_overrides(load_config(args.config), args)
    logger.info("Running scenario from %s", args.config)
    _write_curve(scenario, args.out, args.format)
    return EXIT_OK


def cmd_figure(args) -> int:
    if args.list:
        for figure_id, variant, description in figure_presets():
            print(f"{figure_id:<6} {variant}  {description}")
        return EXIT_OK
    if not args.figure_id:
        raise ConfigError("figure: give a figure id or --list")
    try:
        scenario = figure_preset(args.figure_id, args.variant)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    scenario = apply_overrides(scenario, args)
    _write_curve(scenario, args.out, args.format, figure=f"{args.figure_id}/{args.variant}")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        report = run_validation_suite(args.profile)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    text = json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=1) + "\n"
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info("Validation report written to %s", args.out)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_VALIDATION_FAILED


def cmd_expand(args) -> int:
    """Print a2, a4 and every a_{i0} of a scenario as JSON."""
    scenario = apply_overrides(load_config(args.config), args)
    schedule = scenario.schedule
    series = early_time_coefficients(schedule.spec, schedule.segments[0])
    offsets = {
        str(i): multi_quench_offset(schedule, i, scenario.policy)
        for i in range(1, schedule.n_segments + 1)
    }
    payload = {"a2": series.a2, "a4": series.a4, "offsets": offsets, "policy": scenario.policy.value}
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=1) + "\n")
    return EXIT_OK


def cmd_crossover(args) -> int:
    """Crossing times of C between two scenarios inside a window."""
    scenario_a = apply_overrides(load_config(args.config), args)
    scenario_b = apply_overrides(load_config(args.against), args)
    window = parse_window(args.window)
    try:
        crossings = detect_crossover(
            sample_curve(scenario_a), sample_curve(scenario_b), window, shift_b=args.shift,
        )
    except ValueError as e:
        raise ConfigError(str(e)) from e
    payload = {"window": list(window), "shift": args.shift, "crossings": crossings}
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=1) + "\n")
    return EXIT_OK
