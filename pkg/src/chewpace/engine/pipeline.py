"""Windowed streaming driver: segment, score, classify, pace, trigger.

Audio is consumed in back-to-back windows of ``window_len_s`` with the
segmenter state carried across boundaries. Log records are buffered
until no later processing can produce an earlier record, so the emitted
log is nondecreasing in time no matter where segments close. The terminal
swallow is placed in ``finish()``, never before a record already released.
"""

from __future__ import annotations

import heapq
import logging
import queue
import threading
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, BinaryIO, TextIO

import numpy as np

from ..contracts import EventRecord, LatencyReport, LogRecord
from ..core.config import SessionConfig, validate_config
from ..core.errors import WindowProcessingError
from ..core.events import EventKind, IngestionEvent, PromptEvent, append_event, append_prompt
from ..core.session import SessionState, new_session
from ..evaluation.annotations import AnnotationTrack, load_annotations
from ..evaluation.metrics import CandidateDecision, EvaluationReport, evaluate
from ..intervention.policy import evaluate_trigger, next_prompt, pre_meal_prompt
from ..intervention.summary import SessionSummary, post_meal_summary
from ..io.audio import iter_wav_blocks, read_pcm_stream
from ..io.eventlog import (
    EventLogWriter,
    event_record,
    header_record,
    pace_record,
    prompt_record,
    summary_record,
    write_event_log,
)
from ..pace import PaceEstimate, finalize_meal, pace_estimate, step_pace
from ..sensing.scorers import classify
from ..sensing.segmentation import (
    SegmentBounds,
    extract_clip,
    flush_segmenter,
    frame_levels,
    step_segmenter,
)

logger = logging.getLogger(__name__)

RecordSink = Callable[[LogRecord], None]


def latency_report(window_ms: Iterable[float]) -> LatencyReport:
    values = np.asarray(list(window_ms), dtype=np.float64)
    if values.size == 0:
        return {"windows": 0, "mean_ms": 0.0, "p95_ms": 0.0, "max_ms": 0.0}
    return {
        "windows": int(values.size),
        "mean_ms": float(values.mean()),
        "p95_ms": float(np.percentile(values, 95)),
        "max_ms": float(values.max()),
    }


@dataclass
class PipelineResult:
    records: list[LogRecord]
    summary: SessionSummary
    final_pace: PaceEstimate
    session: SessionState
    decisions: list[CandidateDecision] = field(default_factory=list)
    window_ms: list[float] = field(default_factory=list)
    evaluation: EvaluationReport | None = None
    paths: dict[str, Path] = field(default_factory=dict)

    @property
    def latency(self) -> LatencyReport:
        return latency_report(self.window_ms)

    @property
    def events(self) -> list[IngestionEvent]:
        return list(self.session.timeline.events)


class SessionPipeline:
    def __init__(
        self,
        session: SessionState | SessionConfig | None = None,
        *,
        sink: RecordSink | None = None,
    ) -> None:
        self.session = session if isinstance(session, SessionState) else new_session(session)
        self.config = self.session.config
        self._sink = sink
        self.records: list[LogRecord] = []
        self.decisions: list[CandidateDecision] = []
        self.window_ms: list[float] = []

        self._heap: list[tuple[float, int, EventRecord]] = []
        self._seq = 0
        self._pending = np.zeros(0, dtype=np.float64)
        # Audio kept for clip extraction; _audio[0] is absolute sample _audio_start.
        self._audio = np.zeros(0, dtype=np.float64)
        self._audio_start = 0
        self._next_frame = 0
        self._total_samples = 0
        self._window_index = 0
        self._started = False
        self._finished = False
        self._released_s = 0.0

        self._release(header_record(self.config))

    def _release(self, record: LogRecord) -> None:
        self.records.append(record)
        if record["kind"] != "header":
            self._released_s = max(self._released_s, float(record["time_s"]))
        if self._sink is not None:
            self._sink(record)

    def _push(self, record: EventRecord) -> None:
        heapq.heappush(self._heap, (float(record["time_s"]), self._seq, record))
        self._seq += 1

    def _drain(self, horizon_s: float | None) -> None:
        while self._heap and (horizon_s is None or self._heap[0][0] <= horizon_s):
            _, _, record = heapq.heappop(self._heap)
            self._release(record)

    def _horizon_s(self) -> float:
        """Earliest time any record produced from here on can carry."""
        seg = self.session.segmenter
        if seg.holds_open_segment and seg.segment_start_index is not None:
            next_chew = self.config.frame_time_s(seg.segment_start_index)
        else:
            next_chew = self.config.frame_time_s(self._next_frame)
        last_chew = self.session.pace.last_chew_time_s
        if last_chew is None:
            return next_chew
        # A gap swallow lands mid-gap. The terminal swallow is only placed in
        # finish(), no earlier than anything already released.
        return (last_chew + next_chew) / 2

    def _start(self) -> None:
        self._started = True
        session = self.session
        if session.closed_loop and session.library is not None:
            prompt = pre_meal_prompt(session.library, session.policy.rng, time_s=0.0)
            self._deliver(prompt)

    def _deliver(self, prompt: PromptEvent) -> None:
        append_prompt(self.session.timeline, prompt)
        self._push(prompt_record(prompt))

    def _maybe_prompt(self, estimate: PaceEstimate, now_s: float) -> None:
        session = self.session
        if not session.closed_loop or session.library is None:
            return
        if not evaluate_trigger(session.policy, estimate, now_s, self.config):
            return
        session.policy, prompt = next_prompt(
            session.policy, session.library, estimate, now_s=now_s, config=self.config
        )
        self._deliver(prompt)

    def _emit_event(self, event: IngestionEvent) -> None:
        append_event(self.session.timeline, event)
        self._push(event_record(event))

    def _handle_segment(self, bounds: SegmentBounds) -> None:
        session = self.session
        candidate = extract_clip(
            self._audio, bounds, self.config, buffer_start_sample=self._audio_start
        )
        probability = session.scorer.score(candidate)
        decision = classify(probability, self.config, segment_id=bounds.id)
        self.decisions.append(CandidateDecision(bounds.start_s, bounds.end_s, decision.is_chew))
        if not decision.is_chew:
            logger.debug("segment %d at %.3fs rejected (p=%.3f)", bounds.id, bounds.start_s, probability)
            return

        session.pace, swallow, estimate = step_pace(session.pace, bounds.start_s, self.config)
        if swallow is not None:
            self._emit_event(swallow)
        self._emit_event(
            IngestionEvent(
                kind=EventKind.chew,
                time_s=bounds.start_s,
                confidence=probability,
                source_segment=bounds.id,
                duration_s=bounds.end_s - bounds.start_s,
            )
        )
        if swallow is not None:
            self._maybe_prompt(estimate, bounds.start_s)

    def _process_window(self, samples: np.ndarray[Any, Any]) -> None:
        index = self._window_index
        started = time.perf_counter()
        try:
            if not self._started:
                self._start()
            self._audio = np.concatenate((self._audio, samples))
            levels = frame_levels(samples, self.config, start_index=self._next_frame)
            for frame in levels:
                self.session.segmenter, bounds = step_segmenter(
                    self.session.segmenter, frame, self.config
                )
                if bounds is not None:
                    self._handle_segment(bounds)
            self._next_frame += len(levels)

            now_s = self.config.frame_time_s(self._next_frame)
            estimate = pace_estimate(self.session.pace, now_s, self.config)
            self._push(pace_record(estimate, window=index))
            self._maybe_prompt(estimate, now_s)
            self._trim_audio()
        except Exception as exc:
            raise WindowProcessingError(index, exc) from exc
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        self.window_ms.append(elapsed_ms)
        logger.debug("window %d processed in %.2f ms", index, elapsed_ms)
        self._window_index += 1
        self._drain(self._horizon_s())

    def _trim_audio(self) -> None:
        seg = self.session.segmenter
        keep_frame = self._next_frame
        if seg.holds_open_segment and seg.segment_start_index is not None:
            keep_frame = seg.segment_start_index
        keep_sample = keep_frame * self.config.frame_samples
        drop = keep_sample - self._audio_start
        if drop > 0:
            self._audio = self._audio[drop:]
            self._audio_start = keep_sample

    def feed(self, block: np.ndarray[Any, Any]) -> None:
        """Buffer samples and process every complete window."""
        if self._finished:
            raise RuntimeError("pipeline already finished")
        data = np.asarray(block, dtype=np.float64).ravel()
        self._total_samples += data.size
        self._pending = np.concatenate((self._pending, data))
        window = self.config.window_samples
        while self._pending.size >= window:
            chunk, self._pending = self._pending[:window], self._pending[window:]
            self._process_window(chunk)

    def finish(self) -> PipelineResult:
        if self._finished:
            raise RuntimeError("pipeline already finished")
        self._finished = True
        usable = self._pending.size - self._pending.size % self.config.frame_samples
        if usable > 0:
            self._process_window(self._pending[:usable])
        self._pending = np.zeros(0, dtype=np.float64)

        session = self.session
        try:
            session.segmenter, bounds = flush_segmenter(session.segmenter, self.config)
            if bounds is not None:
                self._handle_segment(bounds)
        except Exception as exc:
            raise WindowProcessingError(self._window_index, exc) from exc

        end_s = self._total_samples / self.config.sample_rate_hz
        session.pace, terminal, final = finalize_meal(
            session.pace, self.config, not_before_s=self._released_s
        )
        if terminal is not None:
            self._emit_event(terminal)
        summary = post_meal_summary(session.timeline, final, duration_s=end_s)
        self._drain(None)
        last_time = max(
            (float(r["time_s"]) for r in self.records if r["kind"] != "header"), default=0.0
        )
        self._release(summary_record(summary, time_s=max(end_s, last_time)))
        return PipelineResult(
            records=self.records,
            summary=summary,
            final_pace=final,
            session=session,
            decisions=self.decisions,
            window_ms=self.window_ms,
        )


def run_replay(
    wav_path: str | Path,
    config: SessionConfig | None = None,
    out_dir: str | Path | None = None,
    *,
    truth: str | Path | AnnotationTrack | None = None,
    session: SessionState | None = None,
) -> PipelineResult:
    """Process a WAV file and write the log, summary and optional evaluation."""
    from ..formatting import render_evaluation_text, render_summary_text
    from ..io.reports import (
        EVALUATION_COLUMNS,
        SUMMARY_COLUMNS,
        evaluation_rows,
        summary_rows,
        write_report_csv,
    )

    pipeline = SessionPipeline(session if session is not None else validate_config(config))
    for block in iter_wav_blocks(wav_path, pipeline.config.window_samples):
        pipeline.feed(block)
    result = pipeline.finish()

    if truth is not None:
        track = truth if isinstance(truth, AnnotationTrack) else load_annotations(truth)
        result.evaluation = evaluate(
            result.events,
            track,
            decisions=result.decisions,
            duration_s=result.summary.duration_s,
        )

    if out_dir is not None:
        target = Path(out_dir)
        target.mkdir(parents=True, exist_ok=True)
        result.paths["events"] = write_event_log(result.records, target / "events.jsonl")
        summary_txt = target / "summary.txt"
        summary_txt.write_text(render_summary_text(result.summary, result.latency), encoding="utf-8")
        result.paths["summary_txt"] = summary_txt
        result.paths["summary_csv"] = write_report_csv(
            summary_rows(result.summary), target / "summary.csv", SUMMARY_COLUMNS
        )
        if result.evaluation is not None:
            evaluation_txt = target / "evaluation.txt"
            evaluation_txt.write_text(render_evaluation_text(result.evaluation), encoding="utf-8")
            result.paths["evaluation_txt"] = evaluation_txt
            result.paths["evaluation_csv"] = write_report_csv(
                evaluation_rows(result.evaluation), target / "evaluation.csv", EVALUATION_COLUMNS
            )
    latency = result.latency
    logger.info(
        "replayed %d windows: mean %.2f ms, p95 %.2f ms, max %.2f ms",
        latency["windows"],
        latency["mean_ms"],
        latency["p95_ms"],
        latency["max_ms"],
    )
    return result


_END_OF_STREAM = object()
_PUT_POLL_S = 0.1


def _offer(buffer: queue.Queue[Any], item: Any, stop: threading.Event) -> bool:
    """Put ``item`` unless ``stop`` is set first; True once it is queued."""
    while not stop.is_set():
        try:
            buffer.put(item, timeout=_PUT_POLL_S)
        except queue.Full:
            continue
        return True
    return False


def _reader(
    stream: BinaryIO, config: SessionConfig, buffer: queue.Queue[Any], stop: threading.Event
) -> None:
    try:
        for block in read_pcm_stream(stream, config):
            if not _offer(buffer, block, stop):
                return
    except BaseException as exc:  # handed to the consumer thread
        _offer(buffer, exc, stop)
    finally:
        _offer(buffer, _END_OF_STREAM, stop)


def run_stream(
    stream: BinaryIO,
    config: SessionConfig | None = None,
    out: TextIO | None = None,
    *,
    session: SessionState | None = None,
) -> PipelineResult:
    """Process raw s16le PCM from ``stream``, writing the live log to ``out``.

    A reader thread fills a queue bounded to ``buffer_windows`` windows and
    blocks when processing falls behind. It stops as soon as processing
    ends, including when processing raises.
    """
    pipeline_session = session if session is not None else new_session(validate_config(config))
    writer = EventLogWriter(out, flush=True) if out is not None else None
    pipeline = SessionPipeline(
        pipeline_session, sink=writer.write if writer is not None else None
    )
    buffer: queue.Queue[Any] = queue.Queue(maxsize=pipeline.config.buffer_windows)
    stop = threading.Event()
    reader = threading.Thread(
        target=_reader,
        args=(stream, pipeline.config, buffer, stop),
        name="chewpace-pcm-reader",
        daemon=True,
    )
    reader.start()
    try:
        while True:
            item = buffer.get()
            if item is _END_OF_STREAM:
                break
            if isinstance(item, BaseException):
                raise item
            pipeline.feed(item)
    finally:
        stop.set()
        reader.join(timeout=1.0)
    return pipeline.finish()
