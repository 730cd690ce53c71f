from .features import MelSpectrogram, log_mel, mel_center_frequencies, mel_filter_bank
from .scorers import (
    ChewScorer,
    HeuristicScorer,
    ScoreDecision,
    ScoreTable,
    TableScorer,
    classify,
    external_score,
    heuristic_score,
    load_score_table,
)
from .segmentation import (
    CandidateSegment,
    FrameLevel,
    SegmentBounds,
    SegmenterMode,
    SegmenterState,
    extract_clip,
    flush_segmenter,
    frame_levels,
    segment_signal,
    step_segmenter,
)

__all__ = [
    "CandidateSegment",
    "ChewScorer",
    "FrameLevel",
    "HeuristicScorer",
    "MelSpectrogram",
    "ScoreDecision",
    "ScoreTable",
    "SegmentBounds",
    "SegmenterMode",
    "SegmenterState",
    "TableScorer",
    "classify",
    "external_score",
    "extract_clip",
    "flush_segmenter",
    "frame_levels",
    "heuristic_score",
    "load_score_table",
    "log_mel",
    "mel_center_frequencies",
    "mel_filter_bank",
    "segment_signal",
    "step_segmenter",
]
