"""JSON-lines session event log.

The first line is a header record carrying the schema name and version.
Every later record has a ``time_s`` and records are nondecreasing in it.
Values whose key ends in ``_s`` are written with 3 fixed decimals, other
floats with 4, so a parsed log re-serializes to the same bytes.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any, TextIO, cast

from ..contracts import (
    EVENT_LOG_SCHEMA,
    EVENT_LOG_SCHEMA_VERSION,
    ChewRecord,
    EventRecord,
    HeaderRecord,
    LogRecord,
    PaceRecord,
    PromptRecord,
    SummaryRecord,
    SwallowRecord,
)
from ..core.config import SessionConfig
from ..core.errors import EventLogError, OutOfOrderEventError
from ..core.events import (
    EventKind,
    IngestionEvent,
    LengthClass,
    PromptEvent,
    PromptFamily,
    PromptPhase,
    Timeline,
)
from ..intervention.summary import SessionSummary
from ..pace import PaceEstimate


def _format_value(key: str, value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.3f}" if key.endswith("_s") else f"{value:.4f}"
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_format_value(key, item) for item in value) + "]"
    raise TypeError(f"cannot serialize {key}={value!r}")


def format_record(record: Mapping[str, Any]) -> str:
    body = ",".join(
        f"{json.dumps(key)}:{_format_value(key, value)}" for key, value in record.items()
    )
    return "{" + body + "}"


def header_record(config: SessionConfig) -> HeaderRecord:
    return {
        "kind": "header",
        "schema": EVENT_LOG_SCHEMA,
        "schema_version": EVENT_LOG_SCHEMA_VERSION,
        "sample_rate_hz": config.sample_rate_hz,
        "window_len_s": float(config.window_len_s),
        "rng_seed": config.rng_seed,
        "intervention_mode": config.intervention_mode,
        "scorer": config.scorer,
    }


def event_record(event: IngestionEvent) -> ChewRecord | SwallowRecord:
    if event.kind == EventKind.chew:
        return {
            "kind": "chew",
            "time_s": event.time_s,
            "confidence": event.confidence,
            "segment": event.source_segment,
            "duration_s": event.duration_s,
        }
    return {"kind": "swallow", "time_s": event.time_s, "confidence": event.confidence}


def prompt_record(prompt: PromptEvent) -> PromptRecord:
    return {
        "kind": "prompt",
        "time_s": prompt.time_s,
        "prompt_id": prompt.prompt_id,
        "family": prompt.family.value,
        "length_class": prompt.length_class.value,
        "phase": prompt.phase.value,
        "text": prompt.text,
        "nominal_duration_s": prompt.nominal_duration_s,
    }


def pace_record(estimate: PaceEstimate, *, window: int) -> PaceRecord:
    return {
        "kind": "pace",
        "time_s": estimate.as_of_s,
        "window": window,
        "cps_last": estimate.cps_last,
        "cps_running": estimate.cps_running,
        "chews_per_min": estimate.chews_per_min,
        "total_chews": estimate.total_chews,
        "total_swallows": estimate.total_swallows,
    }


def summary_record(summary: SessionSummary, *, time_s: float | None = None) -> SummaryRecord:
    return {
        "kind": "summary",
        "time_s": summary.duration_s if time_s is None else time_s,
        "duration_s": summary.duration_s,
        "total_chews": summary.total_chews,
        "total_swallows": summary.total_swallows,
        "mean_cps": summary.mean_cps,
        "chews_per_min_mean": summary.chews_per_min_mean,
        "prompts_delivered": summary.prompts_delivered,
        "in_meal_prompts": summary.in_meal_prompts,
        "cps_intervals": list(summary.cps_intervals),
        "chews_per_minute_series": list(summary.chews_per_minute_series),
    }


def _check_order(records: Sequence[Mapping[str, Any]]) -> None:
    last: float | None = None
    for index, record in enumerate(records):
        if record.get("kind") == "header":
            continue
        time_s = float(record["time_s"])
        if last is not None and time_s < last:
            raise OutOfOrderEventError(
                f"record {index} ({record.get('kind')}) at {time_s:.3f}s precedes "
                f"the previous record at {last:.3f}s"
            )
        last = time_s


class EventLogWriter:
    """Serialize records to an open text handle, enforcing time order."""

    def __init__(self, handle: TextIO, *, flush: bool = False) -> None:
        self._handle = handle
        self._flush = flush
        self._last_time_s: float | None = None
        self.records_written = 0

    def write(self, record: LogRecord | Mapping[str, Any]) -> None:
        if record.get("kind") != "header":
            time_s = float(record["time_s"])
            if self._last_time_s is not None and time_s < self._last_time_s:
                raise OutOfOrderEventError(
                    f"{record.get('kind')} record at {time_s:.3f}s precedes "
                    f"the previous record at {self._last_time_s:.3f}s"
                )
            self._last_time_s = time_s
        self._handle.write(format_record(record) + "\n")
        self.records_written += 1
        if self._flush:
            self._handle.flush()

    def flush(self) -> None:
        self._handle.flush()


def write_event_log(
    records: Iterable[LogRecord | Mapping[str, Any]], path: str | Path
) -> Path:
    items = list(records)
    _check_order(items)
    target = Path(path)
    with target.open("w", encoding="utf-8", newline="\n") as handle:
        writer = EventLogWriter(handle)
        for record in items:
            writer.write(record)
    return target


def read_event_log(path: str | Path) -> list[LogRecord]:
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise EventLogError(f"cannot read file ({exc.strerror})", path=source) from exc

    records: list[LogRecord] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise EventLogError(f"invalid JSON ({exc.msg})", path=source, line=line_no) from exc
        if not isinstance(record, dict) or "kind" not in record:
            raise EventLogError("record is not an object with a 'kind'", path=source, line=line_no)
        if not records:
            if record.get("kind") != "header" or record.get("schema") != EVENT_LOG_SCHEMA:
                raise EventLogError(
                    f"first record must be a {EVENT_LOG_SCHEMA} header", path=source, line=line_no
                )
            if record.get("schema_version") != EVENT_LOG_SCHEMA_VERSION:
                raise EventLogError(
                    f"unsupported schema_version {record.get('schema_version')!r} "
                    f"(expected {EVENT_LOG_SCHEMA_VERSION})",
                    path=source,
                    line=line_no,
                )
        elif "time_s" not in record:
            raise EventLogError(
                f"{record['kind']} record has no time_s", path=source, line=line_no
            )
        records.append(cast(LogRecord, record))
    if not records:
        raise EventLogError("empty event log", path=source)
    return records


def events_from_records(records: Iterable[LogRecord | Mapping[str, Any]]) -> list[IngestionEvent]:
    events: list[IngestionEvent] = []
    for record in records:
        kind = record.get("kind")
        if kind == "chew":
            events.append(
                IngestionEvent(
                    kind=EventKind.chew,
                    time_s=record["time_s"],
                    confidence=record.get("confidence", 1.0),
                    source_segment=record.get("segment"),
                    duration_s=record.get("duration_s"),
                )
            )
        elif kind == "swallow":
            events.append(
                IngestionEvent(
                    kind=EventKind.swallow,
                    time_s=record["time_s"],
                    confidence=record.get("confidence", 1.0),
                )
            )
    return events


def timeline_from_records(records: Iterable[LogRecord | Mapping[str, Any]]) -> Timeline:
    items = list(records)
    timeline = Timeline(events=events_from_records(items))
    for record in items:
        if record.get("kind") == "prompt":
            timeline.prompts.append(
                PromptEvent(
                    time_s=record["time_s"],
                    prompt_id=record["prompt_id"],
                    family=PromptFamily(record["family"]),
                    length_class=LengthClass(record["length_class"]),
                    phase=PromptPhase(record["phase"]),
                    text=record["text"],
                    nominal_duration_s=record["nominal_duration_s"],
                )
            )
    return timeline


def summary_from_records(records: Iterable[LogRecord | Mapping[str, Any]]) -> SummaryRecord | None:
    found: SummaryRecord | None = None
    for record in records:
        if record.get("kind") == "summary":
            found = cast(SummaryRecord, record)
    return found


__all__ = [
    "EventLogWriter",
    "EventRecord",
    "event_record",
    "events_from_records",
    "format_record",
    "header_record",
    "pace_record",
    "prompt_record",
    "read_event_log",
    "summary_from_records",
    "summary_record",
    "timeline_from_records",
    "write_event_log",
]
