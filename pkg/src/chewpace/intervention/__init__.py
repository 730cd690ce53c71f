from .policy import (
    CyclePhase,
    PolicyState,
    evaluate_trigger,
    new_policy,
    next_prompt,
    pre_meal_prompt,
    remaining_chews,
)
from .prompts import (
    LENGTH_BANDS_S,
    Prompt,
    PromptLibrary,
    build_library,
    default_prompt_library,
    load_prompt_library,
)
from .summary import SessionSummary, post_meal_summary

__all__ = [
    "CyclePhase",
    "LENGTH_BANDS_S",
    "PolicyState",
    "Prompt",
    "PromptLibrary",
    "SessionSummary",
    "build_library",
    "default_prompt_library",
    "evaluate_trigger",
    "load_prompt_library",
    "new_policy",
    "next_prompt",
    "post_meal_summary",
    "pre_meal_prompt",
    "remaining_chews",
]
