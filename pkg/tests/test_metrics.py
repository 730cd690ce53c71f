from __future__ import annotations

import pytest

from chewpace.core.errors import EmptySessionError, NoSwallowsError
from chewpace.core.events import EventKind, IngestionEvent
from chewpace.evaluation.annotations import AnnotationInterval, AnnotationLabel, validate_track
from chewpace.evaluation.matching import Matching
from chewpace.evaluation.metrics import (
    CandidateDecision,
    decision_accuracy,
    detection_metrics,
    evaluate,
    mae_chews_per_min,
    mae_cps,
)


def _track(chew_starts: list[float], swallow_centers: list[float] = (), duration_s: float | None = None):
    intervals = [AnnotationInterval(t, t + 0.1, AnnotationLabel.chew) for t in chew_starts]
    intervals += [AnnotationInterval(c - 0.15, c + 0.15, AnnotationLabel.swallow) for c in swallow_centers]
    return validate_track(intervals, declared_duration_s=duration_s)


def _meal(runs: int = 10, per_run: int = 20) -> tuple[list[float], list[float]]:
    chews: list[float] = []
    swallows: list[float] = []
    t = 0.0
    for _ in range(runs):
        for _ in range(per_run):
            chews.append(round(t, 3))
            t += 0.5
        swallows.append(round(t + 0.5, 3))
        t += 1.5
    return chews, swallows


def test_detection_metrics_reference_operating_point() -> None:
    matching = Matching(pairs=tuple((i, i) for i in range(95)), n_predicted=96, n_truth=100)

    metrics = detection_metrics(matching)

    assert metrics.precision == pytest.approx(0.9896, abs=5e-5)
    assert metrics.recall == pytest.approx(0.95)
    assert metrics.f1 == pytest.approx(0.9694, abs=5e-5)


def test_detection_metrics_empty_and_perfect() -> None:
    empty = detection_metrics(Matching(pairs=(), n_predicted=0, n_truth=0))
    perfect = detection_metrics(Matching(pairs=((0, 0), (1, 1)), n_predicted=2, n_truth=2))

    assert (empty.precision, empty.recall, empty.f1) == (0.0, 0.0, 0.0)
    assert (perfect.precision, perfect.recall, perfect.f1) == (1.0, 1.0, 1.0)


def test_mae_chews_per_min_identical_is_zero() -> None:
    chews, swallows = _meal()
    track = _track(chews, swallows)

    assert mae_chews_per_min(chews, track) == 0.0


def test_mae_chews_per_min_constant_offset() -> None:
    truth = _track([2.0 * i for i in range(150)], duration_s=300.0)
    predicted = [60.0 * m + j * 60.0 / 29 for m in range(5) for j in range(29)]

    assert mae_chews_per_min(predicted, truth, duration_s=300.0) == pytest.approx(1.0)


def test_partial_final_bucket_is_scaled() -> None:
    truth = _track([1.0 * i for i in range(90)], duration_s=90.0)
    predicted = [1.0 * i for i in range(60)]

    # second bucket covers 30 s: 30 truth chews -> 60/min, 0 predicted
    assert mae_chews_per_min(predicted, truth, duration_s=90.0) == pytest.approx(30.0)


def test_short_tail_folds_into_previous_bucket() -> None:
    truth = _track([1.0 * i for i in range(65)], duration_s=65.0)

    assert mae_chews_per_min([1.0 * i for i in range(65)], truth, duration_s=65.0) == 0.0
    assert mae_chews_per_min([], truth, duration_s=65.0) == pytest.approx(60.0)


def test_short_tail_is_scaled_on_its_own_without_folding() -> None:
    truth = _track([1.0 * i for i in range(65)], duration_s=65.0)
    predicted = [1.0 * i for i in range(60)]

    folded = mae_chews_per_min(predicted, truth, duration_s=65.0)
    scaled = mae_chews_per_min(predicted, truth, duration_s=65.0, min_partial_s=0.0)

    # folded: one 65 s bucket, 60 vs 65 chews; scaled: 5 s tail of 5 truth chews -> 60/min
    assert folded == pytest.approx(5 * 60.0 / 65.0)
    assert scaled == pytest.approx(30.0)



def test_mae_chews_per_min_empty_session() -> None:
    with pytest.raises(EmptySessionError):
        mae_chews_per_min([], _track([]), duration_s=0.0)


def test_mae_cps_identical_is_zero() -> None:
    chews, swallows = _meal()

    assert mae_cps(chews, _track(chews, swallows)) == 0.0


def test_mae_cps_missing_every_tenth_chew() -> None:
    chews, swallows = _meal()
    predicted = [t for i, t in enumerate(chews) if i % 10 != 9]

    assert mae_cps(predicted, _track(chews, swallows)) == pytest.approx(2.0)


def test_mae_cps_counts_trailing_truth_chews() -> None:
    chews, swallows = _meal(runs=2)
    trailing = chews + [100.0, 100.5]

    assert mae_cps(chews, _track(trailing, swallows)) == pytest.approx(2 / 3)


def test_mae_cps_requires_truth_swallows() -> None:
    with pytest.raises(NoSwallowsError):
        mae_cps([1.0], _track([1.0]))


def test_decision_accuracy() -> None:
    truth = _track([1.0, 2.0])
    decisions = [
        CandidateDecision(0.95, 1.2, True),
        CandidateDecision(1.9, 2.1, False),
        CandidateDecision(5.0, 5.2, False),
        CandidateDecision(7.0, 7.2, True),
    ]

    assert decision_accuracy(decisions, truth) == pytest.approx(0.5)
    assert decision_accuracy([], truth) is None


def test_evaluate_assembles_report() -> None:
    chews, swallows = _meal()
    truth = _track(chews, swallows)
    predicted = [
        IngestionEvent(kind=EventKind.chew, time_s=t, duration_s=0.1) for t in chews
    ] + [IngestionEvent(kind=EventKind.swallow, time_s=s) for s in swallows]
    predicted.sort(key=lambda e: e.time_s)

    report = evaluate(predicted, truth, duration_s=truth.duration_s)

    assert (report.true_positives, report.false_positives, report.false_negatives) == (200, 0, 0)
    assert report.f1 == 1.0
    assert report.mae_chews_per_min == 0.0
    assert report.mae_cps == 0.0
    assert report.accuracy is None
    assert report.per_interval_truth == [20] * 10


def test_evaluate_without_truth_swallows_leaves_cps_empty() -> None:
    report = evaluate([IngestionEvent(kind=EventKind.chew, time_s=1.0)], _track([1.0]), duration_s=10.0)

    assert report.mae_cps is None
    assert report.mae_chews_per_min == 0.0
