"""Detection and pace-estimation metrics against annotation tracks.

Chew-rate MAE compares per-minute chew counts in consecutive 60 s buckets.
A final partial bucket is scaled by its duration to a per-minute rate.
By default a tail shorter than ``MIN_PARTIAL_BUCKET_S`` is first folded into
the previous bucket, which is then scaled by its widened duration. Pass
``min_partial_s=0`` to scale every partial tail on its own.

CPS MAE partitions the meal at truth swallow centers and compares the
chew counts inside each truth interval. Predicted swallows are not
consulted.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..core.errors import EmptySessionError, NoSwallowsError
from ..core.events import EventKind, IngestionEvent
from .annotations import AnnotationTrack
from .matching import DEFAULT_TOLERANCE_MS, Matching, match_events

BUCKET_S = 60.0
MIN_PARTIAL_BUCKET_S = 10.0


class DetectionMetrics(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    true_positives: int = Field(ge=0)
    false_positives: int = Field(ge=0)
    false_negatives: int = Field(ge=0)
    precision: float
    recall: float
    f1: float


class EvaluationReport(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    true_positives: int
    false_positives: int
    false_negatives: int
    precision: float
    recall: float
    f1: float
    accuracy: float | None = None
    decisions: int = 0
    mae_chews_per_min: float | None = None
    mae_cps: float | None = None
    tolerance_ms: float = DEFAULT_TOLERANCE_MS
    per_minute_predicted: list[float] = Field(default_factory=list)
    per_minute_truth: list[float] = Field(default_factory=list)
    per_interval_predicted: list[int] = Field(default_factory=list)
    per_interval_truth: list[int] = Field(default_factory=list)


@dataclass(frozen=True)
class CandidateDecision:
    start_s: float
    end_s: float
    is_chew: bool


def detection_metrics(matching: Matching) -> DetectionMetrics:
    tp, fp, fn = matching.true_positives, matching.false_positives, matching.false_negatives
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return DetectionMetrics(
        true_positives=tp,
        false_positives=fp,
        false_negatives=fn,
        precision=precision,
        recall=recall,
        f1=f1,
    )


def decision_accuracy(
    decisions: Sequence[CandidateDecision], truth: AnnotationTrack
) -> float | None:
    """Share of candidate decisions agreeing with truth chew overlap."""
    if not decisions:
        return None
    chews = truth.chews
    correct = 0
    for decision in decisions:
        positive = any(c.overlaps(decision.start_s, decision.end_s) for c in chews)
        correct += int(positive == decision.is_chew)
    return correct / len(decisions)


def _chew_times(predicted: Sequence[IngestionEvent] | Sequence[float]) -> list[float]:
    times: list[float] = []
    for item in predicted:
        if isinstance(item, IngestionEvent):
            if item.kind == EventKind.chew:
                times.append(item.time_s)
        else:
            times.append(float(item))
    return times


def _bucket_edges(duration_s: float, min_partial_s: float = MIN_PARTIAL_BUCKET_S) -> np.ndarray:
    n_full = math.floor(duration_s / BUCKET_S)
    edges = [i * BUCKET_S for i in range(n_full + 1)]
    tail = duration_s - edges[-1]
    if tail > 0:
        if tail < min_partial_s and n_full > 0:
            edges[-1] = duration_s
        else:
            edges.append(duration_s)
    return np.asarray(edges, dtype=np.float64)


def per_minute_rates(times_s: Sequence[float], edges: np.ndarray) -> list[float]:
    counts, _ = np.histogram(np.asarray(times_s, dtype=np.float64), bins=edges)
    widths = np.diff(edges)
    return [float(c) * BUCKET_S / float(w) for c, w in zip(counts, widths)]


def _per_minute(
    predicted: Sequence[IngestionEvent] | Sequence[float],
    truth: AnnotationTrack,
    duration_s: float | None,
    min_partial_s: float = MIN_PARTIAL_BUCKET_S,
) -> tuple[list[float], list[float]]:
    pred_times = _chew_times(predicted)
    truth_times = [c.start_s for c in truth.chews]
    span = duration_s if duration_s is not None else truth.duration_s
    span = max([span, *pred_times, *truth_times]) if (pred_times or truth_times) else span
    if span <= 0:
        raise EmptySessionError("session has zero duration; chews/min MAE is undefined")
    edges = _bucket_edges(span, min_partial_s)
    return per_minute_rates(pred_times, edges), per_minute_rates(truth_times, edges)


def mae_chews_per_min(
    predicted: Sequence[IngestionEvent] | Sequence[float],
    truth: AnnotationTrack,
    *,
    duration_s: float | None = None,
    min_partial_s: float = MIN_PARTIAL_BUCKET_S,
) -> float:
    pred_rates, truth_rates = _per_minute(predicted, truth, duration_s, min_partial_s)
    return float(np.mean(np.abs(np.subtract(pred_rates, truth_rates))))


def _per_interval(
    predicted: Sequence[IngestionEvent] | Sequence[float], truth: AnnotationTrack
) -> tuple[list[int], list[int]]:
    boundaries = sorted(s.center_s for s in truth.swallows)
    if not boundaries:
        raise NoSwallowsError("truth track has no swallows; CPS MAE is undefined")
    pred_times = np.asarray(_chew_times(predicted), dtype=np.float64)
    truth_times = np.asarray([c.start_s for c in truth.chews], dtype=np.float64)
    # Intervals are (b_i, b_{i+1}]; searchsorted with side="left" assigns accordingly.
    pred_counts = np.bincount(
        np.searchsorted(boundaries, pred_times, side="left"), minlength=len(boundaries) + 1
    )
    truth_counts = np.bincount(
        np.searchsorted(boundaries, truth_times, side="left"), minlength=len(boundaries) + 1
    )
    n_intervals = len(boundaries) + (1 if truth_counts[-1] > 0 else 0)
    return (
        [int(v) for v in pred_counts[:n_intervals]],
        [int(v) for v in truth_counts[:n_intervals]],
    )


def mae_cps(
    predicted: Sequence[IngestionEvent] | Sequence[float], truth: AnnotationTrack
) -> float:
    pred_counts, truth_counts = _per_interval(predicted, truth)
    return float(np.mean(np.abs(np.subtract(pred_counts, truth_counts))))


def evaluate(
    predicted: Sequence[IngestionEvent],
    truth: AnnotationTrack,
    *,
    decisions: Sequence[CandidateDecision] | None = None,
    duration_s: float | None = None,
    tolerance_ms: float = DEFAULT_TOLERANCE_MS,
) -> EvaluationReport:
    """Full report; MAE fields are ``None`` when the session cannot support them."""
    chews = [event for event in predicted if event.kind == EventKind.chew]
    matching = match_events([event.center_s for event in chews], truth.chews, tolerance_ms)
    detection = detection_metrics(matching)

    per_minute_pred: list[float] = []
    per_minute_truth: list[float] = []
    mae_rate: float | None = None
    try:
        per_minute_pred, per_minute_truth = _per_minute(chews, truth, duration_s)
        mae_rate = float(np.mean(np.abs(np.subtract(per_minute_pred, per_minute_truth))))
    except EmptySessionError:
        pass

    per_interval_pred: list[int] = []
    per_interval_truth: list[int] = []
    mae_interval: float | None = None
    try:
        per_interval_pred, per_interval_truth = _per_interval(chews, truth)
        mae_interval = float(np.mean(np.abs(np.subtract(per_interval_pred, per_interval_truth))))
    except NoSwallowsError:
        pass

    return EvaluationReport(
        **detection.model_dump(),
        accuracy=decision_accuracy(decisions, truth) if decisions is not None else None,
        decisions=len(decisions) if decisions is not None else 0,
        mae_chews_per_min=mae_rate,
        mae_cps=mae_interval,
        tolerance_ms=tolerance_ms,
        per_minute_predicted=per_minute_pred,
        per_minute_truth=per_minute_truth,
        per_interval_predicted=per_interval_pred,
        per_interval_truth=per_interval_truth,
    )
