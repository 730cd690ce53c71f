from .annotations import (
    AnnotationInterval,
    AnnotationLabel,
    AnnotationTrack,
    load_annotations,
    validate_track,
    write_annotations,
)
from .matching import DEFAULT_TOLERANCE_MS, Matching, match_events
from .metrics import (
    CandidateDecision,
    DetectionMetrics,
    EvaluationReport,
    decision_accuracy,
    detection_metrics,
    evaluate,
    mae_chews_per_min,
    mae_cps,
)
from .stats import DatasetStats, TrackStats, dataset_stats, track_stats

__all__ = [
    "AnnotationInterval",
    "AnnotationLabel",
    "AnnotationTrack",
    "CandidateDecision",
    "DEFAULT_TOLERANCE_MS",
    "DatasetStats",
    "DetectionMetrics",
    "EvaluationReport",
    "Matching",
    "TrackStats",
    "dataset_stats",
    "decision_accuracy",
    "detection_metrics",
    "evaluate",
    "load_annotations",
    "mae_chews_per_min",
    "mae_cps",
    "match_events",
    "track_stats",
    "validate_track",
    "write_annotations",
]
