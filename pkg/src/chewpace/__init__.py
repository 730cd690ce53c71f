"""Streaming chew detection, swallow inference and just-in-time eating-pace prompts."""

from .core import ChewPaceError, IngestionEvent, PromptEvent, SessionConfig, Timeline
from .core.session import SessionState, new_session
from .engine import run_replay, run_stream
from .evaluation import dataset_stats, evaluate, load_annotations
from .intervention import SessionSummary, load_prompt_library, post_meal_summary
from .io.synth import SynthMealSpec, synth_meal
from .pace import PaceEstimate, PaceState, finalize_meal, step_pace

__all__ = [
    "ChewPaceError",
    "IngestionEvent",
    "PaceEstimate",
    "PaceState",
    "PromptEvent",
    "SessionConfig",
    "SessionState",
    "SessionSummary",
    "SynthMealSpec",
    "Timeline",
    "dataset_stats",
    "evaluate",
    "finalize_meal",
    "load_annotations",
    "load_prompt_library",
    "new_session",
    "post_meal_summary",
    "run_replay",
    "run_stream",
    "step_pace",
    "synth_meal",
]
