"""Candidate chewing segmentation.

Frames of 50 ms are gated on their RMS level in dBFS. A small state
machine joins active frames across short silences and keeps only regions
whose active extent lies within ``[min_segment_ms, max_segment_ms]``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Any

import numpy as np

from ..core.config import SessionConfig
from ..core.errors import BoundsOutsideBufferError, EmptyInputError, OutOfOrderFrameError

_RMS_FLOOR = 1e-6


class SegmenterMode(str, Enum):
    idle = "idle"
    in_segment = "in_segment"
    in_gap = "in_gap"
    # Region already longer than max_segment_ms; drained until it ends.
    overlong = "overlong"


@dataclass(frozen=True)
class FrameLevel:
    index: int
    time_s: float
    level_db: float
    active: bool


@dataclass(frozen=True)
class SegmentBounds:
    id: int
    start_index: int
    end_index: int  # exclusive frame index
    start_s: float
    end_s: float
    start_sample: int
    end_sample: int

    @property
    def duration_ms(self) -> float:
        return (self.end_s - self.start_s) * 1000.0


@dataclass(frozen=True)
class SegmenterState:
    mode: SegmenterMode = SegmenterMode.idle
    segment_start_index: int | None = None
    last_active_index: int | None = None
    accumulated_gap_ms: int = 0
    next_index: int | None = None
    segments_emitted: int = 0

    def segment_start_s(self, config: SessionConfig) -> float | None:
        if self.segment_start_index is None:
            return None
        return config.frame_time_s(self.segment_start_index)

    def last_active_frame_s(self, config: SessionConfig) -> float | None:
        if self.last_active_index is None:
            return None
        return config.frame_time_s(self.last_active_index)

    @property
    def holds_open_segment(self) -> bool:
        return self.mode in (SegmenterMode.in_segment, SegmenterMode.in_gap)


@dataclass(frozen=True)
class CandidateSegment:
    id: int
    start_s: float
    end_s: float
    clip: np.ndarray[Any, Any]


def frame_levels(
    samples: np.ndarray[Any, Any],
    config: SessionConfig,
    *,
    start_index: int = 0,
) -> list[FrameLevel]:
    """Return one ``FrameLevel`` per complete frame; a partial tail is dropped."""
    data = np.asarray(samples, dtype=np.float64)
    frame_samples = config.frame_samples
    n_frames = data.size // frame_samples
    if n_frames == 0:
        raise EmptyInputError(
            f"need at least {frame_samples} samples for one frame, got {data.size}"
        )
    frames = data[: n_frames * frame_samples].reshape(n_frames, frame_samples)
    rms = np.sqrt(np.mean(np.square(frames), axis=1))
    floor = max(_RMS_FLOOR, 10.0 ** (config.silence_floor_db / 20.0))
    levels = 20.0 * np.log10(np.maximum(rms, floor))
    active = levels >= config.energy_threshold_db
    return [
        FrameLevel(
            index=start_index + i,
            time_s=config.frame_time_s(start_index + i),
            level_db=float(levels[i]),
            active=bool(active[i]),
        )
        for i in range(n_frames)
    ]


def _close(
    state: SegmenterState, config: SessionConfig
) -> tuple[SegmenterState, SegmentBounds | None]:
    start = state.segment_start_index
    last = state.last_active_index
    closed = SegmenterState(next_index=state.next_index, segments_emitted=state.segments_emitted)
    if state.mode == SegmenterMode.overlong or start is None or last is None:
        return closed, None
    duration_ms = (last - start + 1) * config.frame_len_ms
    if not config.min_segment_ms <= duration_ms <= config.max_segment_ms:
        return closed, None
    bounds = SegmentBounds(
        id=state.segments_emitted,
        start_index=start,
        end_index=last + 1,
        start_s=config.frame_time_s(start),
        end_s=config.frame_time_s(last + 1),
        start_sample=start * config.frame_samples,
        end_sample=(last + 1) * config.frame_samples,
    )
    return replace(closed, segments_emitted=state.segments_emitted + 1), bounds


def step_segmenter(
    state: SegmenterState, frame: FrameLevel, config: SessionConfig
) -> tuple[SegmenterState, SegmentBounds | None]:
    if state.next_index is not None and frame.index != state.next_index:
        raise OutOfOrderFrameError(
            f"expected frame {state.next_index}, got frame {frame.index}"
        )
    state = replace(state, next_index=frame.index + 1)
    mode = state.mode

    if mode == SegmenterMode.idle:
        if frame.active:
            state = replace(
                state,
                mode=SegmenterMode.in_segment,
                segment_start_index=frame.index,
                last_active_index=frame.index,
                accumulated_gap_ms=0,
            )
            return _check_extent(state, config), None
        return state, None

    if frame.active:
        if mode == SegmenterMode.overlong:
            return replace(state, accumulated_gap_ms=0), None
        state = replace(
            state,
            mode=SegmenterMode.in_segment,
            last_active_index=frame.index,
            accumulated_gap_ms=0,
        )
        return _check_extent(state, config), None

    gap_ms = state.accumulated_gap_ms + config.frame_len_ms
    if gap_ms > config.silence_tolerance_ms:
        return _close(state, config)
    if mode == SegmenterMode.overlong:
        return replace(state, accumulated_gap_ms=gap_ms), None
    return replace(state, mode=SegmenterMode.in_gap, accumulated_gap_ms=gap_ms), None


def _check_extent(state: SegmenterState, config: SessionConfig) -> SegmenterState:
    assert state.segment_start_index is not None and state.last_active_index is not None
    extent_ms = (state.last_active_index - state.segment_start_index + 1) * config.frame_len_ms
    if extent_ms > config.max_segment_ms:
        return replace(state, mode=SegmenterMode.overlong)
    return state


def flush_segmenter(
    state: SegmenterState, config: SessionConfig
) -> tuple[SegmenterState, SegmentBounds | None]:
    """Close whatever is open at end of stream."""
    if state.mode == SegmenterMode.idle:
        return state, None
    return _close(state, config)


def segment_signal(samples: np.ndarray[Any, Any], config: SessionConfig) -> list[SegmentBounds]:
    """Offline whole-signal segmentation over active-frame runs.

    Runs separated by at most ``silence_tolerance_ms`` of inactive frames
    are merged; merged regions outside the duration gate are dropped.
    """
    data = np.asarray(samples, dtype=np.float64)
    if data.size < config.frame_samples:
        return []
    active = np.array([level.active for level in frame_levels(data, config)], dtype=bool)
    active_idx = np.flatnonzero(active)
    if active_idx.size == 0:
        return []

    max_gap_frames = config.silence_tolerance_ms // config.frame_len_ms
    breaks = np.flatnonzero(np.diff(active_idx) - 1 > max_gap_frames)
    starts = np.concatenate(([active_idx[0]], active_idx[breaks + 1]))
    lasts = np.concatenate((active_idx[breaks], [active_idx[-1]]))

    segments: list[SegmentBounds] = []
    for start, last in zip(starts.tolist(), lasts.tolist()):
        duration_ms = (last - start + 1) * config.frame_len_ms
        if not config.min_segment_ms <= duration_ms <= config.max_segment_ms:
            continue
        segments.append(
            SegmentBounds(
                id=len(segments),
                start_index=start,
                end_index=last + 1,
                start_s=config.frame_time_s(start),
                end_s=config.frame_time_s(last + 1),
                start_sample=start * config.frame_samples,
                end_sample=(last + 1) * config.frame_samples,
            )
        )
    return segments


def extract_clip(
    buffer: np.ndarray[Any, Any],
    bounds: SegmentBounds,
    config: SessionConfig,
    *,
    buffer_start_sample: int = 0,
) -> CandidateSegment:
    """Cut, peak-normalize and tail-pad the segment to ``clip_len_ms``."""
    data = np.asarray(buffer, dtype=np.float64)
    lo = bounds.start_sample - buffer_start_sample
    hi = bounds.end_sample - buffer_start_sample
    if lo < 0 or hi > data.size or hi <= lo:
        raise BoundsOutsideBufferError(
            f"segment {bounds.id} samples [{bounds.start_sample}, {bounds.end_sample}) "
            f"outside buffer [{buffer_start_sample}, {buffer_start_sample + data.size})"
        )
    segment = data[lo:hi]
    clip_samples = config.clip_samples
    if segment.size > clip_samples:
        raise BoundsOutsideBufferError(
            f"segment {bounds.id} has {segment.size} samples, longer than the "
            f"{clip_samples}-sample clip"
        )
    peak = float(np.max(np.abs(segment))) if segment.size else 0.0
    clip = np.zeros(clip_samples, dtype=np.float64)
    clip[: segment.size] = segment / peak if peak > 0 else segment
    return CandidateSegment(id=bounds.id, start_s=bounds.start_s, end_s=bounds.end_s, clip=clip)
