from .config import SAMPLE_RATE_HZ, SessionConfig, read_key_value_file, validate_config
from .errors import ChewPaceError
from .events import (
    EventKind,
    IngestionEvent,
    LengthClass,
    PromptEvent,
    PromptFamily,
    PromptPhase,
    Timeline,
    append_event,
    append_prompt,
)

__all__ = [
    "SAMPLE_RATE_HZ",
    "ChewPaceError",
    "EventKind",
    "IngestionEvent",
    "LengthClass",
    "PromptEvent",
    "PromptFamily",
    "PromptPhase",
    "SessionConfig",
    "Timeline",
    "append_event",
    "append_prompt",
    "read_key_value_file",
    "validate_config",
]
