from __future__ import annotations

import io

import pytest

from chewpace.core.config import SessionConfig
from chewpace.core.errors import EventLogError, OutOfOrderEventError
from chewpace.core.events import (
    EventKind,
    IngestionEvent,
    LengthClass,
    PromptEvent,
    PromptFamily,
    PromptPhase,
)
from chewpace.io.eventlog import (
    EventLogWriter,
    event_record,
    events_from_records,
    format_record,
    header_record,
    prompt_record,
    read_event_log,
    summary_from_records,
    timeline_from_records,
    write_event_log,
)

CONFIG = SessionConfig()


def _chew(time_s: float, segment: int = 0) -> IngestionEvent:
    return IngestionEvent(
        kind=EventKind.chew, time_s=time_s, confidence=0.9, source_segment=segment, duration_s=0.2
    )


def _prompt(time_s: float) -> PromptEvent:
    return PromptEvent(
        time_s=time_s,
        prompt_id="s1-short-01",
        family=PromptFamily.system1_nudge,
        length_class=LengthClass.short,
        phase=PromptPhase.in_meal,
        text="Put your fork down.",
        nominal_duration_s=2.0,
    )


def test_format_record_uses_fixed_decimals() -> None:
    line = format_record(event_record(_chew(1.5, segment=3)))

    assert line == (
        '{"kind":"chew","time_s":1.500,"confidence":0.9000,"segment":3,"duration_s":0.200}'
    )


def test_format_record_handles_null_and_lists() -> None:
    record = {"kind": "summary", "time_s": 2.0, "mean_cps": None, "cps_intervals": [3, 4]}

    assert format_record(record) == (
        '{"kind":"summary","time_s":2.000,"mean_cps":null,"cps_intervals":[3,4]}'
    )


def test_two_events_give_header_plus_two_lines(tmp_path) -> None:
    path = write_event_log(
        [header_record(CONFIG), event_record(_chew(0.5)), event_record(_chew(1.0, 1))],
        tmp_path / "events.jsonl",
    )

    lines = path.read_bytes().split(b"\n")

    assert lines[-1] == b""
    assert len(lines) == 4
    assert b'"schema_version":1' in lines[0]
    assert b"\r" not in path.read_bytes()


def test_reserialized_log_is_byte_identical(tmp_path) -> None:
    records = [
        header_record(CONFIG),
        event_record(_chew(0.5)),
        event_record(IngestionEvent(kind=EventKind.swallow, time_s=1.25)),
        prompt_record(_prompt(1.25)),
    ]
    first = write_event_log(records, tmp_path / "a.jsonl")

    second = write_event_log(read_event_log(first), tmp_path / "b.jsonl")

    assert first.read_bytes() == second.read_bytes()


def test_out_of_order_records_are_rejected_before_writing(tmp_path) -> None:
    target = tmp_path / "events.jsonl"
    records = [header_record(CONFIG), event_record(_chew(2.0)), event_record(_chew(1.0, 1))]

    with pytest.raises(OutOfOrderEventError, match="record 2"):
        write_event_log(records, target)
    assert not target.exists()


def test_writer_rejects_regression_on_live_handle() -> None:
    handle = io.StringIO()
    writer = EventLogWriter(handle)
    writer.write(event_record(_chew(2.0)))

    with pytest.raises(OutOfOrderEventError):
        writer.write(event_record(_chew(1.0, 1)))
    assert writer.records_written == 1
    assert handle.getvalue().count("\n") == 1


def test_equal_times_are_allowed() -> None:
    handle = io.StringIO()
    writer = EventLogWriter(handle)
    writer.write(event_record(IngestionEvent(kind=EventKind.swallow, time_s=1.0)))
    writer.write(prompt_record(_prompt(1.0)))

    assert writer.records_written == 2


def test_first_record_must_be_header(tmp_path) -> None:
    path = tmp_path / "events.jsonl"
    path.write_text(format_record(event_record(_chew(0.5))) + "\n", encoding="utf-8")

    with pytest.raises(EventLogError, match=r"events\.jsonl:1: first record"):
        read_event_log(path)


def test_unknown_schema_version_is_rejected(tmp_path) -> None:
    header = dict(header_record(CONFIG), schema_version=99)
    path = tmp_path / "events.jsonl"
    path.write_text(format_record(header) + "\n", encoding="utf-8")

    with pytest.raises(EventLogError, match="schema_version 99"):
        read_event_log(path)


def test_invalid_json_reports_line(tmp_path) -> None:
    path = tmp_path / "events.jsonl"
    path.write_text(format_record(header_record(CONFIG)) + "\n{not json\n", encoding="utf-8")

    with pytest.raises(EventLogError, match=":2: invalid JSON"):
        read_event_log(path)


def test_record_without_time_is_rejected(tmp_path) -> None:
    path = tmp_path / "events.jsonl"
    path.write_text(
        format_record(header_record(CONFIG)) + '\n{"kind":"chew"}\n', encoding="utf-8"
    )

    with pytest.raises(EventLogError, match="chew record has no time_s"):
        read_event_log(path)


def test_empty_log_is_rejected(tmp_path) -> None:
    path = tmp_path / "events.jsonl"
    path.write_text("", encoding="utf-8")

    with pytest.raises(EventLogError, match="empty event log"):
        read_event_log(path)


def test_timeline_from_records_restores_events_and_prompts() -> None:
    records = [
        header_record(CONFIG),
        event_record(_chew(0.5)),
        event_record(IngestionEvent(kind=EventKind.swallow, time_s=1.25, confidence=1.0)),
        prompt_record(_prompt(1.25)),
        {"kind": "pace", "time_s": 3.0, "window": 0},
    ]

    timeline = timeline_from_records(records)

    assert [e.kind for e in timeline.events] == [EventKind.chew, EventKind.swallow]
    assert timeline.events[0].source_segment == 0
    assert timeline.prompts == [_prompt(1.25)]
    assert events_from_records(records) == timeline.events


def test_summary_from_records_takes_the_last_summary() -> None:
    records = [
        header_record(CONFIG),
        {"kind": "summary", "time_s": 1.0, "total_chews": 1},
        {"kind": "summary", "time_s": 2.0, "total_chews": 2},
    ]

    assert summary_from_records(records)["total_chews"] == 2
    assert summary_from_records([header_record(CONFIG)]) is None
