from __future__ import annotations

import sys
from typing import Literal, TypedDict, Union

if sys.version_info >= (3, 11):
    from typing import NotRequired
else:
    from typing_extensions import NotRequired

RecordKind = Literal["header", "chew", "swallow", "prompt", "pace", "summary"]

EVENT_LOG_SCHEMA = "chewpace.eventlog"
EVENT_LOG_SCHEMA_VERSION = 1


class HeaderRecord(TypedDict):
    kind: Literal["header"]
    schema: str
    schema_version: int
    sample_rate_hz: int
    window_len_s: float
    rng_seed: int
    intervention_mode: str
    scorer: str


class ChewRecord(TypedDict):
    kind: Literal["chew"]
    time_s: float
    confidence: float
    segment: int | None
    duration_s: NotRequired[float | None]


class SwallowRecord(TypedDict):
    kind: Literal["swallow"]
    time_s: float
    confidence: float


class PromptRecord(TypedDict):
    kind: Literal["prompt"]
    time_s: float
    prompt_id: str
    family: str
    length_class: str
    phase: str
    text: str
    nominal_duration_s: float


class PaceRecord(TypedDict):
    kind: Literal["pace"]
    time_s: float
    window: int
    cps_last: int | None
    cps_running: float | None
    chews_per_min: float
    total_chews: int
    total_swallows: int


class SummaryRecord(TypedDict):
    kind: Literal["summary"]
    time_s: float
    duration_s: float
    total_chews: int
    total_swallows: int
    mean_cps: float | None
    chews_per_min_mean: float
    prompts_delivered: int
    in_meal_prompts: int
    cps_intervals: list[int]
    chews_per_minute_series: list[int]


EventRecord = Union[ChewRecord, SwallowRecord, PromptRecord, PaceRecord, SummaryRecord]
LogRecord = Union[HeaderRecord, EventRecord]


class LatencyReport(TypedDict):
    windows: int
    mean_ms: float
    p95_ms: float
    max_ms: float
