"""
config_io.py — YAML scenario documents to Scenario objects and back.
"""

import logging
from pathlib import Path
from typing import Union

import yaml
from pydantic import ValidationError

from quench_complexity.chain_spectrum import ChainSpec, QuenchSchedule, QuenchSegment
from quench_complexity.errors import ConfigError
from quench_complexity.experiments import GridSpec, Scenario
from quench_complexity.schemas import (
    ChainModel, GridModel, ScenarioDocument, SegmentModel, SuccessiveModel,
)

logger = logging.getLogger(__name__)


def _key_path(loc: tuple) -> str:
    """('segments', 0, 'duration') → 'segments[0].duration'."""
    path = ""
    for part in loc:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else str(part)
    return path or "<document>"


def _format_validation_error(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        parts.append(f"{_key_path(err['loc'])}: {err['msg']}")
    return "; ".join(parts)


def document_to_scenario(doc: ScenarioDocument) -> Scenario:
    try:
        spec = ChainSpec(doc.chain.n, doc.chain.omega0, doc.chain.k0)
        segments = tuple(QuenchSegment(s.omega, s.k, s.duration) for s in doc.segments)
        return Scenario(
            schedule=QuenchSchedule(spec=spec, segments=segments),
            grid=GridSpec(doc.grid.start, doc.grid.end, doc.grid.samples),
            policy=doc.policy,
            outputs=tuple(doc.outputs),
            successive_t0=None if doc.successive is None else doc.successive.t0,
        )
    except ValueError as e:
        raise ConfigError(str(e)) from e


def scenario_to_document(scenario: Scenario) -> ScenarioDocument:
    schedule = scenario.schedule
    return ScenarioDocument(
        chain=ChainModel(n=schedule.spec.n_oscillators, omega0=schedule.spec.omega0, k0=schedule.spec.coupling0),
        segments=[SegmentModel(omega=s.omega, k=s.coupling, duration=s.duration) for s in schedule.segments],
        grid=GridModel(start=scenario.grid.start, end=scenario.grid.end, samples=scenario.grid.samples),
        policy=scenario.policy,
        outputs=list(scenario.outputs),
        successive=None if scenario.successive_t0 is None else SuccessiveModel(t0=scenario.successive_t0),
    )


def parse_config(text: str) -> Scenario:
    """
    Parse a YAML scenario document.

    Raises ConfigError naming the offending key, e.g. ``segments[0].duration``.
    """
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError(f"malformed YAML: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError("scenario document must be a mapping at the top level")
    try:
        doc = ScenarioDocument.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(_format_validation_error(e)) from e
    return document_to_scenario(doc)


def dump_config(scenario: Scenario) -> str:
    """YAML text that parse_config reads back to an equal Scenario."""
    doc = scenario_to_document(scenario).model_dump(mode="json", exclude_none=True)
    # open-ended segments keep an explicit null duration
    doc["segments"] = [
        {"omega": s.omega, "k": s.coupling, "duration": s.duration} for s in scenario.schedule.segments
    ]
    return yaml.safe_dump(doc, sort_keys=False)


def load_config(path: Union[str, Path]) -> Scenario:
    """Read and parse a scenario file; OSError propagates to the caller."""
    text = Path(path).read_text(encoding="utf-8")
    logger.info("Loaded scenario document %s", path)
    return parse_config(text)
