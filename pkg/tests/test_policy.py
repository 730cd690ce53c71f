from __future__ import annotations

import re
from collections import Counter
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chewpace.core.config import SessionConfig
from chewpace.core.events import LengthClass, PromptFamily, PromptPhase
from chewpace.intervention.policy import (
    CyclePhase,
    evaluate_trigger,
    new_policy,
    next_prompt,
    pre_meal_prompt,
    remaining_chews,
)
from chewpace.intervention.prompts import Prompt, build_library, default_prompt_library
from chewpace.pace import PaceEstimate

CONFIG = SessionConfig()
LIBRARY = default_prompt_library()
GRAMMAR = re.compile(r"(S{2,4}[ML])*S{0,4}")
_LETTER = {LengthClass.short: "S", LengthClass.medium: "M", LengthClass.long: "L"}


def _pace(history: tuple[int, ...], as_of_s: float = 100.0) -> PaceEstimate:
    return PaceEstimate(
        cps_last=history[-1] if history else None,
        cps_running=sum(history) / len(history) if history else None,
        chews_per_min=40.0,
        total_chews=sum(history),
        total_swallows=len(history),
        as_of_s=as_of_s,
        cps_history=history,
    )


def test_trigger_fires_after_cooldown() -> None:
    policy = replace(new_policy(CONFIG), last_prompt_time_s=65.0)

    assert evaluate_trigger(policy, _pace((12, 14)), 100.0, CONFIG)
    assert not evaluate_trigger(policy, _pace((12, 14)), 75.0, CONFIG)


def test_trigger_needs_warmup_and_slow_pace() -> None:
    policy = new_policy(CONFIG)

    assert not evaluate_trigger(policy, _pace((10,)), 50.0, CONFIG)
    assert not evaluate_trigger(policy, _pace((12, 30)), 50.0, CONFIG)
    assert evaluate_trigger(policy, _pace((30, 12, 14)), 50.0, CONFIG)


def test_remaining_chews_fills_progress_text() -> None:
    assert remaining_chews(_pace((10, 18)), CONFIG) == 7
    assert remaining_chews(_pace((30,)), CONFIG) == 0
    assert remaining_chews(_pace(()), CONFIG) == 25

    only_progress = build_library(
        [
            prompt
            for prompt in LIBRARY.prompts
            if prompt.family in (PromptFamily.control_theory_progress, PromptFamily.pre_meal_goal)
        ]
        + [
            Prompt(
                id=f"{family.value}-{length.value}",
                family=family,
                length_class=length,
                nominal_duration_s={"short": 1.0, "medium": 2.5, "long": 6.0}[length.value],
                text="{remaining_chews}",
            )
            for family in (PromptFamily.system1_nudge, PromptFamily.gain_frame)
            for length in LengthClass
        ]
    )
    _, event = next_prompt(new_policy(CONFIG), only_progress, _pace((10, 18)), now_s=40.0, config=CONFIG)
    assert "7" in event.text
    assert event.phase == PromptPhase.in_meal


def test_first_cycle_plays_two_to_four_shorts() -> None:
    for seed in range(30):
        config = SessionConfig(rng_seed=seed)
        policy = new_policy(config)
        letters = ""
        while not letters.endswith(("M", "L")):
            policy, event = next_prompt(policy, LIBRARY, _pace((10, 10)), now_s=0.0, config=config)
            letters += _LETTER[event.length_class]
        assert 2 <= letters.count("S") <= 4
        assert policy.cycle_phase == CyclePhase.shorts


def test_tail_splits_medium_and_long_evenly() -> None:
    policy = new_policy(SessionConfig(rng_seed=123))
    counts: Counter[LengthClass] = Counter()
    for _ in range(10_000):
        tail = replace(policy, cycle_phase=CyclePhase.tail)
        policy, event = next_prompt(tail, LIBRARY, _pace((10, 10)), now_s=0.0, config=CONFIG)
        counts[event.length_class] += 1

    assert counts[LengthClass.short] == 0
    assert counts[LengthClass.medium] / 10_000 == pytest.approx(0.5, abs=0.02)


def test_pre_meal_prompt_from_default_library() -> None:
    event = pre_meal_prompt(LIBRARY, np.random.default_rng(1))

    assert event.phase == PromptPhase.pre_meal
    assert event.family == PromptFamily.pre_meal_goal
    assert event.text == "Remember to chew more. Aim for at least 25 chews before swallowing."
    assert event.time_s == 0.0


def test_pre_meal_choice_is_uniform() -> None:
    goals = [
        Prompt(id=name, family=PromptFamily.pre_meal_goal, length_class=LengthClass.long,
               nominal_duration_s=5.0, text=f"Goal {name}.")
        for name in ("a", "b")
    ]
    library = build_library(
        [p for p in LIBRARY.prompts if p.family != PromptFamily.pre_meal_goal] + goals
    )
    rng = np.random.default_rng(7)

    counts = Counter(pre_meal_prompt(library, rng).prompt_id for _ in range(10_000))

    assert abs(counts["a"] - 5000) <= 300


def _simulate(config: SessionConfig, steps: list[tuple[float, int]]) -> list[tuple[float, str]]:
    policy = new_policy(config)
    now = 0.0
    history: tuple[int, ...] = ()
    delivered = []
    for advance, cps in steps:
        now += advance
        history = history + (cps,)
        pace = _pace(history, as_of_s=now)
        if evaluate_trigger(policy, pace, now, config):
            assert len(history) >= config.warmup_swallows
            assert pace.smoothed_cps(config.cps_smoothing_intervals) < config.cps_trigger_threshold
            policy, event = next_prompt(policy, LIBRARY, pace, now_s=now, config=config)
            delivered.append((event.time_s, event.prompt_id))
    return delivered


def _check_trace(config: SessionConfig, trace: list[tuple[float, int]]) -> None:
    delivered = _simulate(config, trace)

    times = [time_s for time_s, _ in delivered]
    assert all(b - a >= 30.0 for a, b in zip(times, times[1:]))

    by_id = {prompt.id: prompt for prompt in LIBRARY.prompts}
    letters = "".join(_LETTER[by_id[prompt_id].length_class] for _, prompt_id in delivered)
    assert GRAMMAR.fullmatch(letters)

    assert _simulate(config, trace) == delivered


steps = st.lists(
    st.tuples(st.floats(min_value=0.5, max_value=40.0), st.integers(min_value=1, max_value=40)),
    max_size=120,
)


@settings(max_examples=150, deadline=None)
@given(steps, st.integers(min_value=0, max_value=2**16))
def test_cooldown_and_grammar_hold_for_any_trigger_sequence(
    trigger_steps: list[tuple[float, int]], seed: int
) -> None:
    _check_trace(SessionConfig(rng_seed=seed), trigger_steps)


def test_cooldown_and_grammar_hold_over_ten_thousand_traces() -> None:
    rng = np.random.default_rng(606)
    for _ in range(10_000):
        n = int(rng.integers(1, 61))
        advances = rng.uniform(0.5, 40.0, n).tolist()
        cps = rng.integers(1, 41, n).tolist()
        config = SessionConfig(rng_seed=int(rng.integers(0, 2**16)))
        _check_trace(config, list(zip(advances, cps)))
