from __future__ import annotations

from collections.abc import Iterable, Sequence

from pydantic import BaseModel, ConfigDict

from .annotations import AnnotationTrack

UNTAGGED_SETTING = "untagged"


class TrackStats(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str
    setting: str
    duration_s: float
    chews: int
    swallows: int
    tracks: int = 1

    @property
    def mean_cps(self) -> float | None:
        return self.chews / self.swallows if self.swallows else None


class DatasetStats(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    rows: list[TrackStats]
    settings: list[TrackStats]
    total: TrackStats


def track_stats(track: AnnotationTrack) -> TrackStats:
    return TrackStats(
        name=track.name,
        setting=track.setting or UNTAGGED_SETTING,
        duration_s=track.duration_s,
        chews=len(track.chews),
        swallows=len(track.swallows),
    )


def aggregate_stats(rows: Iterable[TrackStats], *, name: str, setting: str) -> TrackStats:
    items = list(rows)
    return TrackStats(
        name=name,
        setting=setting,
        duration_s=sum(row.duration_s for row in items),
        chews=sum(row.chews for row in items),
        swallows=sum(row.swallows for row in items),
        tracks=sum(row.tracks for row in items),
    )


def dataset_stats(tracks: Sequence[AnnotationTrack] | Sequence[TrackStats]) -> DatasetStats:
    """Per-track rows, per-setting subtotals (first-seen order) and a total."""
    if not tracks:
        raise ValueError("dataset_stats needs at least one track")
    rows = [item if isinstance(item, TrackStats) else track_stats(item) for item in tracks]
    settings: dict[str, list[TrackStats]] = {}
    for row in rows:
        settings.setdefault(row.setting, []).append(row)
    return DatasetStats(
        rows=rows,
        settings=[
            aggregate_stats(group, name=setting, setting=setting)
            for setting, group in settings.items()
        ],
        total=aggregate_stats(rows, name="total", setting="all"),
    )
