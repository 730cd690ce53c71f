from __future__ import annotations

import pytest

from chewpace.core.errors import OutOfOrderEventError
from chewpace.core.events import (
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


def _chew(t: float) -> IngestionEvent:
    return IngestionEvent(kind=EventKind.chew, time_s=t)


def _swallow(t: float) -> IngestionEvent:
    return IngestionEvent(kind=EventKind.swallow, time_s=t)


def test_append_event_keeps_order_and_splits_kinds() -> None:
    timeline = Timeline()
    for event in (_chew(1.0), _chew(1.5), _swallow(2.5), _chew(3.0)):
        append_event(timeline, event)

    assert [e.time_s for e in timeline.chews] == [1.0, 1.5, 3.0]
    assert [e.time_s for e in timeline.swallows] == [2.5]
    assert timeline.last_time_s == 3.0


def test_append_event_accepts_equal_times() -> None:
    timeline = Timeline()
    append_event(timeline, _chew(1.0))
    append_event(timeline, _swallow(1.0))

    assert len(timeline.events) == 2


def test_append_event_rejects_time_regression() -> None:
    timeline = append_event(Timeline(), _chew(2.0))

    with pytest.raises(OutOfOrderEventError, match="precedes"):
        append_event(timeline, _chew(1.9))


def test_append_event_rejects_back_to_back_swallows() -> None:
    timeline = Timeline()
    append_event(timeline, _chew(1.0))
    append_event(timeline, _swallow(2.0))

    with pytest.raises(OutOfOrderEventError, match="no chew"):
        append_event(timeline, _swallow(3.0))


def test_chew_center_uses_duration() -> None:
    event = IngestionEvent(kind=EventKind.chew, time_s=1.0, duration_s=0.2)

    assert event.center_s == pytest.approx(1.1)
    assert _swallow(4.0).center_s == 4.0


def test_append_prompt_rejects_regression() -> None:
    def prompt(t: float) -> PromptEvent:
        return PromptEvent(
            time_s=t,
            prompt_id="p",
            family=PromptFamily.system1_nudge,
            length_class=LengthClass.short,
            phase=PromptPhase.in_meal,
            text="Slow down.",
            nominal_duration_s=1.2,
        )

    timeline = append_prompt(Timeline(), prompt(40.0))
    with pytest.raises(OutOfOrderEventError):
        append_prompt(timeline, prompt(10.0))
