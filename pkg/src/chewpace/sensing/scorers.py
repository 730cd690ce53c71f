"""Chew scorers and the binary chew decision.

``HeuristicScorer`` is the bundled reference scorer. For a clip it
computes the mel-band power ``P[t, m]`` (before the log) and returns::

    score = low_band_ratio ** 2 * sustain

where ``low_band_ratio`` is the share of mel power in filters centred
below 2 kHz and ``sustain = min(1, n_sustained * 10 ms / 80 ms)`` counts
analysis frames whose power is within 20 dB of the loudest frame. Bone
conducted chew bursts are low-frequency and last tens of milliseconds;
clicks and motion artifacts are broadband or very short.

``TableScorer`` replays per-segment probabilities produced by an
externally trained model (CSV with header ``segment_id,probability``).
"""

from __future__ import annotations

import csv
import logging
from abc import ABC, abstractmethod
from collections.abc import Mapping
from pathlib import Path
from types import MappingProxyType
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..core.config import SessionConfig
from ..core.errors import InvalidProbabilityError, MissingScoreError
from .features import (
    STRIDE_MS,
    mel_center_frequencies,
    mel_filter_bank,
    power_spectra,
    windowed_frames,
)
from .segmentation import CandidateSegment

logger = logging.getLogger(__name__)

LOW_BAND_HZ = 2000.0
SUSTAIN_FULL_MS = 80.0
SUSTAIN_RANGE_DB = 20.0
_SCORE_TABLE_HEADER = ("segment_id", "probability")


class ScoreDecision(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    segment_id: int | None = None
    probability: float = Field(ge=0.0, le=1.0)
    is_chew: bool


def classify(
    probability: float, config: SessionConfig, *, segment_id: int | None = None
) -> ScoreDecision:
    """Threshold a chew probability; the boundary counts as chew."""
    if not 0.0 <= probability <= 1.0:
        raise InvalidProbabilityError(f"probability {probability} outside [0, 1]")
    return ScoreDecision(
        segment_id=segment_id,
        probability=probability,
        is_chew=probability >= config.classifier_threshold,
    )


def heuristic_score(
    clip: CandidateSegment | np.ndarray[Any, Any], config: SessionConfig | None = None
) -> float:
    cfg = config or SessionConfig()
    mel_power = power_spectra(windowed_frames(clip, cfg)) @ mel_filter_bank(cfg.sample_rate_hz).T
    total = float(mel_power.sum())
    if not np.isfinite(total) or total <= 0.0:
        return 0.0

    low = mel_center_frequencies(cfg.sample_rate_hz) < LOW_BAND_HZ
    low_band_ratio = float(mel_power[:, low].sum()) / total

    frame_power = mel_power.sum(axis=1)
    threshold = frame_power.max() * 10.0 ** (-SUSTAIN_RANGE_DB / 10.0)
    n_sustained = int(np.count_nonzero(frame_power >= threshold))
    sustain = min(1.0, n_sustained * STRIDE_MS / SUSTAIN_FULL_MS)

    return float(np.clip(low_band_ratio**2 * sustain, 0.0, 1.0))


class ChewScorer(ABC):
    id: str
    version: str = "1"

    @property
    def description(self) -> str:
        return f"{self.id}/{self.version}"

    @abstractmethod
    def score(self, segment: CandidateSegment) -> float:
        raise NotImplementedError


class HeuristicScorer(ChewScorer):
    id = "heuristic"
    version = "1"

    def __init__(self, config: SessionConfig) -> None:
        self.config = config

    def score(self, segment: CandidateSegment) -> float:
        return heuristic_score(segment, self.config)


class ScoreTable:
    """Read-only ``segment_id -> probability`` lookup loaded from CSV."""

    def __init__(self, scores: Mapping[int, float], *, source: Path | None = None) -> None:
        self._scores = MappingProxyType(dict(scores))
        self.source = source

    def __len__(self) -> int:
        return len(self._scores)

    def __contains__(self, segment_id: object) -> bool:
        return segment_id in self._scores

    def get(self, segment_id: int) -> float:
        try:
            return self._scores[segment_id]
        except KeyError as exc:
            where = f" in {self.source}" if self.source is not None else ""
            raise MissingScoreError(f"no score for segment {segment_id}{where}") from exc


def load_score_table(path: str | Path) -> ScoreTable:
    source = Path(path)
    scores: dict[int, float] = {}
    with source.open(encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or tuple(cell.strip() for cell in header) != _SCORE_TABLE_HEADER:
            raise InvalidProbabilityError(
                f"expected header {','.join(_SCORE_TABLE_HEADER)}", path=source, line=1
            )
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise InvalidProbabilityError(
                    f"expected 2 fields, got {len(row)}", path=source, line=line
                )
            try:
                segment_id = int(row[0])
                probability = float(row[1])
            except ValueError as exc:
                raise InvalidProbabilityError(
                    f"cannot parse row {row!r}", path=source, line=line
                ) from exc
            if not 0.0 <= probability <= 1.0:
                raise InvalidProbabilityError(
                    f"invalid probability {probability} for segment {segment_id}",
                    path=source,
                    line=line,
                )
            if segment_id in scores:
                raise InvalidProbabilityError(
                    f"duplicate segment_id {segment_id}", path=source, line=line
                )
            scores[segment_id] = probability
    logger.info("loaded %d segment scores from %s", len(scores), source)
    return ScoreTable(scores, source=source)


def external_score(table: ScoreTable, segment_id: int) -> float:
    return table.get(segment_id)


class TableScorer(ChewScorer):
    id = "table"
    version = "1"

    def __init__(self, table: ScoreTable) -> None:
        self.table = table

    def score(self, segment: CandidateSegment) -> float:
        return external_score(self.table, segment.id)
