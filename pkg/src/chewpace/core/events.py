from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from .errors import OutOfOrderEventError


class EventKind(str, Enum):
    chew = "chew"
    swallow = "swallow"


class PromptFamily(str, Enum):
    system1_nudge = "system1_nudge"
    control_theory_progress = "control_theory_progress"
    gain_frame = "gain_frame"
    pre_meal_goal = "pre_meal_goal"


IN_MEAL_FAMILIES: tuple[PromptFamily, ...] = (
    PromptFamily.system1_nudge,
    PromptFamily.control_theory_progress,
    PromptFamily.gain_frame,
)


class LengthClass(str, Enum):
    short = "short"
    medium = "medium"
    long = "long"


class PromptPhase(str, Enum):
    pre_meal = "pre_meal"
    in_meal = "in_meal"


class IngestionEvent(BaseModel):
    """A chew (segment onset) or an inferred swallow on the session clock."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: EventKind
    time_s: float = Field(ge=0)
    confidence: float = Field(default=1.0, ge=0.0, le=1.0)
    source_segment: int | None = None
    duration_s: float | None = Field(default=None, ge=0)

    @property
    def center_s(self) -> float:
        if self.duration_s is None:
            return self.time_s
        return self.time_s + self.duration_s / 2


class PromptEvent(BaseModel):
    """A delivered prompt: rendered text plus nominal playback length."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    time_s: float = Field(ge=0)
    prompt_id: str = Field(min_length=1)
    family: PromptFamily
    length_class: LengthClass
    phase: PromptPhase
    text: str
    nominal_duration_s: float = Field(gt=0)


@dataclass
class Timeline:
    events: list[IngestionEvent] = field(default_factory=list)
    prompts: list[PromptEvent] = field(default_factory=list)
    session_start: datetime = field(
        default_factory=lambda: datetime.now(timezone.utc)
    )

    @property
    def chews(self) -> list[IngestionEvent]:
        return [event for event in self.events if event.kind == EventKind.chew]

    @property
    def swallows(self) -> list[IngestionEvent]:
        return [event for event in self.events if event.kind == EventKind.swallow]

    @property
    def last_time_s(self) -> float | None:
        return self.events[-1].time_s if self.events else None


def append_event(timeline: Timeline, event: IngestionEvent) -> Timeline:
    """Append ``event`` in place and return the timeline.

    Raises ``OutOfOrderEventError`` on a time regression or on a swallow
    with no chew since the previous swallow.
    """
    if timeline.events:
        last = timeline.events[-1]
        if event.time_s < last.time_s:
            raise OutOfOrderEventError(
                f"{event.kind.value} at {event.time_s:.3f}s precedes last event "
                f"({last.kind.value} at {last.time_s:.3f}s)"
            )
        if event.kind == EventKind.swallow and last.kind == EventKind.swallow:
            raise OutOfOrderEventError(
                f"swallow at {event.time_s:.3f}s follows swallow at "
                f"{last.time_s:.3f}s with no chew in between"
            )
    timeline.events.append(event)
    return timeline


def append_prompt(timeline: Timeline, prompt: PromptEvent) -> Timeline:
    if timeline.prompts and prompt.time_s < timeline.prompts[-1].time_s:
        raise OutOfOrderEventError(
            f"prompt at {prompt.time_s:.3f}s precedes last prompt at "
            f"{timeline.prompts[-1].time_s:.3f}s"
        )
    timeline.prompts.append(prompt)
    return timeline
