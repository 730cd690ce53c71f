from .records import (
    EVENT_LOG_SCHEMA,
    EVENT_LOG_SCHEMA_VERSION,
    ChewRecord,
    EventRecord,
    HeaderRecord,
    LatencyReport,
    LogRecord,
    PaceRecord,
    PromptRecord,
    RecordKind,
    SummaryRecord,
    SwallowRecord,
)

__all__ = [
    "EVENT_LOG_SCHEMA",
    "EVENT_LOG_SCHEMA_VERSION",
    "ChewRecord",
    "EventRecord",
    "HeaderRecord",
    "LatencyReport",
    "LogRecord",
    "PaceRecord",
    "PromptRecord",
    "RecordKind",
    "SummaryRecord",
    "SwallowRecord",
]
