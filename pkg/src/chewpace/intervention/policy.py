"""Just-in-time prompting policy.

In-meal prompts come in cycles: 2 to 4 short prompts, then one medium or
long prompt with equal probability, then a fresh cycle. Consecutive
in-meal prompts are at least ``min_prompt_interval_s`` apart. The pre-meal
goal prompt sits outside this cooldown clock.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, replace
from enum import Enum
from typing import TypeVar

import numpy as np

from ..core.config import SessionConfig
from ..core.events import IN_MEAL_FAMILIES, LengthClass, PromptEvent, PromptPhase
from ..pace import PaceEstimate
from .prompts import PromptLibrary

logger = logging.getLogger(__name__)

MIN_SHORTS_PER_CYCLE = 2
MAX_SHORTS_PER_CYCLE = 4
_T = TypeVar("_T")


class CyclePhase(str, Enum):
    shorts = "shorts"
    tail = "tail"


@dataclass(frozen=True)
class PolicyState:
    rng: np.random.Generator
    shorts_remaining_in_cycle: int
    cycle_phase: CyclePhase = CyclePhase.shorts
    last_prompt_time_s: float | None = None
    prompts_delivered: int = 0

    @property
    def cooldown_active(self) -> bool:
        return self.last_prompt_time_s is not None


def draw_shorts_per_cycle(rng: np.random.Generator) -> int:
    return int(rng.integers(MIN_SHORTS_PER_CYCLE, MAX_SHORTS_PER_CYCLE + 1))


def new_policy(config: SessionConfig) -> PolicyState:
    rng = np.random.default_rng(config.rng_seed)
    return PolicyState(rng=rng, shorts_remaining_in_cycle=draw_shorts_per_cycle(rng))


def _choose(rng: np.random.Generator, items: Sequence[_T]) -> _T:
    return items[int(rng.integers(len(items)))]


def pre_meal_prompt(
    library: PromptLibrary, rng: np.random.Generator, *, time_s: float = 0.0
) -> PromptEvent:
    prompt = _choose(rng, library.pre_meal)
    return PromptEvent(
        time_s=time_s,
        prompt_id=prompt.id,
        family=prompt.family,
        length_class=prompt.length_class,
        phase=PromptPhase.pre_meal,
        text=prompt.render(),
        nominal_duration_s=prompt.nominal_duration_s,
    )


def evaluate_trigger(
    policy: PolicyState, pace: PaceEstimate, now_s: float, config: SessionConfig
) -> bool:
    if pace.total_swallows < config.warmup_swallows:
        return False
    smoothed = pace.smoothed_cps(config.cps_smoothing_intervals)
    if smoothed is None or smoothed >= config.cps_trigger_threshold:
        return False
    if policy.last_prompt_time_s is None:
        return True
    return now_s - policy.last_prompt_time_s >= config.min_prompt_interval_s


def remaining_chews(pace: PaceEstimate, config: SessionConfig) -> int:
    if pace.cps_last is None:
        return config.cps_reference_chews
    return max(0, config.cps_reference_chews - pace.cps_last)


def next_prompt(
    policy: PolicyState,
    library: PromptLibrary,
    pace: PaceEstimate,
    *,
    now_s: float,
    config: SessionConfig,
    rng: np.random.Generator | None = None,
) -> tuple[PolicyState, PromptEvent]:
    """Deliver the next in-meal prompt; call only after ``evaluate_trigger``."""
    draw = rng if rng is not None else policy.rng

    if policy.cycle_phase == CyclePhase.shorts:
        length = LengthClass.short
    else:
        length = LengthClass.medium if draw.random() < 0.5 else LengthClass.long

    family = _choose(draw, IN_MEAL_FAMILIES)
    prompt = _choose(draw, library.select(family, length))

    if policy.cycle_phase == CyclePhase.shorts:
        shorts_left = policy.shorts_remaining_in_cycle - 1
        phase = CyclePhase.tail if shorts_left == 0 else CyclePhase.shorts
    else:
        shorts_left = draw_shorts_per_cycle(draw)
        phase = CyclePhase.shorts

    event = PromptEvent(
        time_s=now_s,
        prompt_id=prompt.id,
        family=prompt.family,
        length_class=prompt.length_class,
        phase=PromptPhase.in_meal,
        text=prompt.render(remaining_chews(pace, config)),
        nominal_duration_s=prompt.nominal_duration_s,
    )
    updated = replace(
        policy,
        shorts_remaining_in_cycle=shorts_left,
        cycle_phase=phase,
        last_prompt_time_s=now_s,
        prompts_delivered=policy.prompts_delivered + 1,
    )
    logger.debug(
        "prompt %s (%s/%s) at %.3fs", prompt.id, family.value, length.value, now_s
    )
    return updated, event
