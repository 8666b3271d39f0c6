"""
curve_export.py — Write sampled curves as CSV or JSON.

Output is locale-independent and byte-stable: fixed column order, 17
significant digits in CSV, sorted keys in JSON, "\n" line endings.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Optional, Sequence, TextIO, Union

from config import CSV_SIGNIFICANT_DIGITS
from quench_complexity import __version__
from quench_complexity.config_io import scenario_to_document
from quench_complexity.experiments import CurveSample, Scenario
from quench_complexity.schemas import CurveDocument, CurveMetadata, CurveRecord, GridModel

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")


def curve_columns(curve: Sequence[CurveSample]) -> list[str]:
    """t, c_total, c_zero, c_rest[, c_lower, c_upper][, a_1..a_N, b_1..b_N]."""
    first = curve[0]
    columns = ["t", "c_total", "c_zero", "c_rest"]
    if first.c_lower is not None:
        columns += ["c_lower", "c_upper"]
    if first.a is not None:
        n = len(first.a)
        columns += [f"a_{j}" for j in range(1, n + 1)] + [f"b_{j}" for j in range(1, n + 1)]
    return columns


def _fmt(x: float) -> str:
    return f"{x:.{CSV_SIGNIFICANT_DIGITS}g}"


def _row(sample: CurveSample) -> list[float]:
    row = [sample.t, sample.c_total, sample.c_zero, sample.c_rest]
    if sample.c_lower is not None:
        row += [sample.c_lower, sample.c_upper]
    if sample.a is not None:
        row += list(sample.a) + list(sample.b)
    return row


def write_csv(curve: Sequence[CurveSample], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(curve_columns(curve))
    for sample in curve:
        writer.writerow([_fmt(x) for x in _row(sample)])


def curve_document(
    curve: Sequence[CurveSample],
    scenario: Scenario,
    figure: Optional[str] = None,
    nonpositive_denominators: int = 0,
) -> CurveDocument:
    grid = scenario.grid
    return CurveDocument(
        metadata=CurveMetadata(
            parameters=scenario_to_document(scenario),
            policy=scenario.policy,
            grid=GridModel(start=grid.start, end=grid.end, samples=grid.samples),
            version=__version__,
            figure=figure,
            nonpositive_denominators=nonpositive_denominators,
        ),
        columns=curve_columns(curve),
        samples=[
            CurveRecord(
                t=s.t, c_total=s.c_total, c_zero=s.c_zero, c_rest=s.c_rest,
                c_lower=s.c_lower, c_upper=s.c_upper,
                a=None if s.a is None else list(s.a),
                b=None if s.b is None else list(s.b),
            )
            for s in curve
        ],
    )


def write_json(
    curve: Sequence[CurveSample],
    scenario: Scenario,
    stream: TextIO,
    figure: Optional[str] = None,
    nonpositive_denominators: int = 0,
) -> None:
    doc = curve_document(curve, scenario, figure, nonpositive_denominators).model_dump(mode="json", exclude_none=True)
    stream.write(json.dumps(doc, sort_keys=True, indent=1))
    stream.write("\n")


def emit_curve(
    curve: Sequence[CurveSample],
    fmt: str,
    path: Union[str, Path],
    scenario: Scenario,
    figure: Optional[str] = None,
    nonpositive_denominators: int = 0,
) -> Path:
    """Write `curve` to `path`; OSError propagates for unwritable paths."""
    if not curve:
        raise ValueError("cannot emit an empty curve")
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")

    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as stream:
        if fmt == "csv":
            write_csv(curve, stream)
        else:
            write_json(curve, scenario, stream, figure, nonpositive_denominators)
    logger.info("Wrote %d samples to %s (%s)", len(curve), path, fmt)
    return path
