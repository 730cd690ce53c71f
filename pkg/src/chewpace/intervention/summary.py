from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..core.events import EventKind, PromptPhase, Timeline
from ..pace import PaceEstimate


class SessionSummary(BaseModel):
    """Post-meal pace statistics shown to the eater."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    duration_s: float = Field(ge=0)
    total_chews: int = Field(ge=0)
    total_swallows: int = Field(ge=0)
    mean_cps: float | None = None
    chews_per_min_mean: float = Field(ge=0)
    prompts_delivered: int = Field(ge=0)
    in_meal_prompts: int = Field(ge=0)
    cps_intervals: list[int] = Field(default_factory=list)
    chews_per_minute_series: list[int] = Field(default_factory=list)
    prompt_times_s: list[float] = Field(default_factory=list)


def interval_chew_counts(timeline: Timeline) -> list[int]:
    """Chews between consecutive swallows; trailing unclosed chews are not counted."""
    counts: list[int] = []
    run = 0
    for event in timeline.events:
        if event.kind == EventKind.chew:
            run += 1
        else:
            counts.append(run)
            run = 0
    return counts


def per_minute_counts(times_s: list[float], duration_s: float) -> list[int]:
    if duration_s <= 0:
        return []
    n_minutes = max(1, math.ceil(duration_s / 60.0))
    edges = np.arange(n_minutes + 1, dtype=np.float64) * 60.0
    edges[-1] = max(edges[-1], duration_s)
    counts, _ = np.histogram(np.asarray(times_s, dtype=np.float64), bins=edges)
    return [int(value) for value in counts]


def post_meal_summary(
    timeline: Timeline,
    pace_final: PaceEstimate | None = None,
    *,
    duration_s: float | None = None,
) -> SessionSummary:
    chew_times = [event.time_s for event in timeline.chews]
    total_swallows = len(timeline.swallows)
    intervals = interval_chew_counts(timeline)

    if duration_s is None:
        candidates = [0.0]
        if pace_final is not None:
            candidates.append(pace_final.as_of_s)
        if timeline.last_time_s is not None:
            candidates.append(timeline.last_time_s)
        duration_s = max(candidates)

    mean_cps = sum(intervals) / total_swallows if total_swallows else None
    rate = len(chew_times) * 60.0 / duration_s if duration_s > 0 else 0.0

    return SessionSummary(
        duration_s=duration_s,
        total_chews=len(chew_times),
        total_swallows=total_swallows,
        mean_cps=mean_cps,
        chews_per_min_mean=rate,
        prompts_delivered=len(timeline.prompts),
        in_meal_prompts=sum(
            1 for prompt in timeline.prompts if prompt.phase == PromptPhase.in_meal
        ),
        cps_intervals=intervals,
        chews_per_minute_series=per_minute_counts(chew_times, duration_s),
        prompt_times_s=[prompt.time_s for prompt in timeline.prompts],
    )
