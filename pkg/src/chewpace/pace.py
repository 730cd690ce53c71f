"""Swallow inference from inter-chew gaps and running pace estimates.

A gap ``d`` between consecutive chews hosts a swallow when::

    d > swallow_abs_gap_s  or  d > swallow_rel_factor * mean(gaps since last swallow)

The swallow is placed at the midpoint of the gap. The hosting gap is not
added to the chew-gap history, which restarts empty after every swallow.
"""

from __future__ import annotations

import logging
from bisect import bisect_right
from dataclasses import dataclass, field, replace

from .core.config import SessionConfig
from .core.errors import TimeRegressionError
from .core.events import EventKind, IngestionEvent

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PaceState:
    last_chew_time_s: float | None = None
    gaps: tuple[float, ...] = ()
    chews_since_last_swallow: int = 0
    recent_chew_times: tuple[float, ...] = ()
    cps_history: tuple[int, ...] = ()
    total_chews: int = 0
    total_swallows: int = 0

    @property
    def d_bar_chew(self) -> float | None:
        if not self.gaps:
            return None
        return sum(self.gaps) / len(self.gaps)

    @property
    def cps_last(self) -> int | None:
        return self.cps_history[-1] if self.cps_history else None


@dataclass(frozen=True)
class PaceEstimate:
    cps_last: int | None
    cps_running: float | None
    chews_per_min: float
    total_chews: int
    total_swallows: int
    as_of_s: float
    cps_history: tuple[int, ...] = field(default=())

    def smoothed_cps(self, intervals: int) -> float | None:
        """Mean of up to the last ``intervals`` closed intervals."""
        if not self.cps_history:
            return None
        tail = self.cps_history[-intervals:]
        return sum(tail) / len(tail)


def swallow_predicate(d: float, d_bar_chew: float | None, config: SessionConfig) -> bool:
    if d > config.swallow_abs_gap_s:
        return True
    return d_bar_chew is not None and d > config.swallow_rel_factor * d_bar_chew


def chews_per_minute(state: PaceState, as_of_s: float, *, window_s: float = 60.0) -> float:
    """Chews in ``(as_of_s - window_s, as_of_s]`` as a per-minute rate.

    Before a full window has elapsed the count is extrapolated over the
    elapsed time. ``as_of_s`` must not precede the last recorded chew.
    """
    if as_of_s <= 0:
        return 0.0
    times = state.recent_chew_times
    lo = bisect_right(times, as_of_s - window_s)
    hi = bisect_right(times, as_of_s)
    count = hi - lo
    return count * 60.0 / min(window_s, as_of_s)


def pace_estimate(state: PaceState, as_of_s: float, config: SessionConfig) -> PaceEstimate:
    cps_running = (
        sum(state.cps_history) / state.total_swallows if state.total_swallows else None
    )
    return PaceEstimate(
        cps_last=state.cps_last,
        cps_running=cps_running,
        chews_per_min=chews_per_minute(state, as_of_s, window_s=config.rate_window_s),
        total_chews=state.total_chews,
        total_swallows=state.total_swallows,
        as_of_s=as_of_s,
        cps_history=state.cps_history,
    )


def _close_interval(state: PaceState, swallow_s: float) -> tuple[PaceState, IngestionEvent]:
    swallow = IngestionEvent(kind=EventKind.swallow, time_s=swallow_s, confidence=1.0)
    closed = replace(
        state,
        gaps=(),
        chews_since_last_swallow=0,
        cps_history=state.cps_history + (state.chews_since_last_swallow,),
        total_swallows=state.total_swallows + 1,
    )
    logger.debug(
        "swallow at %.3fs closes an interval of %d chews",
        swallow_s,
        state.chews_since_last_swallow,
    )
    return closed, swallow


def step_pace(
    state: PaceState, chew_time_s: float, config: SessionConfig
) -> tuple[PaceState, IngestionEvent | None, PaceEstimate]:
    last = state.last_chew_time_s
    if last is not None and chew_time_s <= last:
        raise TimeRegressionError(
            f"chew at {chew_time_s:.3f}s does not follow last chew at {last:.3f}s"
        )

    swallow: IngestionEvent | None = None
    if last is not None:
        d = chew_time_s - last
        if swallow_predicate(d, state.d_bar_chew, config):
            state, swallow = _close_interval(state, (last + chew_time_s) / 2)
        else:
            state = replace(state, gaps=state.gaps + (d,))

    horizon = chew_time_s - config.rate_window_s
    recent = state.recent_chew_times[bisect_right(state.recent_chew_times, horizon) :]
    state = replace(
        state,
        last_chew_time_s=chew_time_s,
        chews_since_last_swallow=state.chews_since_last_swallow + 1,
        recent_chew_times=recent + (chew_time_s,),
        total_chews=state.total_chews + 1,
    )
    return state, swallow, pace_estimate(state, chew_time_s, config)


def finalize_meal(
    state: PaceState,
    config: SessionConfig,
    *,
    end_s: float | None = None,
    not_before_s: float | None = None,
) -> tuple[PaceState, IngestionEvent | None, PaceEstimate]:
    """Close trailing chews with a terminal swallow after the last chew.

    The swallow lands ``terminal_swallow_offset_s`` after the last chew, or at
    ``not_before_s`` when that is later. A live stream passes the time of the
    last record it already emitted so the log stays in time order.

    Calling it again on the returned state adds nothing.
    """
    swallow: IngestionEvent | None = None
    if state.chews_since_last_swallow > 0 and state.last_chew_time_s is not None:
        at = state.last_chew_time_s + config.terminal_swallow_offset_s
        if not_before_s is not None:
            at = max(at, not_before_s)
        state, swallow = _close_interval(state, at)

    as_of = end_s
    if as_of is None:
        as_of = swallow.time_s if swallow is not None else (state.last_chew_time_s or 0.0)
    return state, swallow, pace_estimate(state, as_of, config)


__all__ = [
    "PaceEstimate",
    "PaceState",
    "chews_per_minute",
    "finalize_meal",
    "pace_estimate",
    "step_pace",
    "swallow_predicate",
]
