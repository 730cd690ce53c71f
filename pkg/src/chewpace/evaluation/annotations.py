"""Ground-truth annotation tracks.

Files are UTF-8 tab-separated ``start_s<TAB>end_s<TAB>label`` rows with
label ``chew`` or ``swallow``. An optional ``start_s<TAB>end_s<TAB>label``
header row is skipped. Leading ``# key=value`` comments set track tags;
``participant``, ``setting`` and ``duration_s`` are recognized.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from ..core.errors import AnnotationParseError, OverlapError, UnknownLabelError

logger = logging.getLogger(__name__)

_HEADER = ("start_s", "end_s", "label")


class AnnotationLabel(str, Enum):
    chew = "chew"
    swallow = "swallow"


@dataclass(frozen=True)
class AnnotationInterval:
    start_s: float
    end_s: float
    label: AnnotationLabel
    line: int | None = field(default=None, compare=False)

    @property
    def center_s(self) -> float:
        return (self.start_s + self.end_s) / 2

    def overlaps(self, start_s: float, end_s: float) -> bool:
        return start_s < self.end_s and end_s > self.start_s


@dataclass(frozen=True)
class AnnotationTrack:
    intervals: tuple[AnnotationInterval, ...]
    source: Path | None = None
    participant: str | None = None
    setting: str | None = None
    declared_duration_s: float | None = None

    @property
    def chews(self) -> tuple[AnnotationInterval, ...]:
        return tuple(i for i in self.intervals if i.label == AnnotationLabel.chew)

    @property
    def swallows(self) -> tuple[AnnotationInterval, ...]:
        return tuple(i for i in self.intervals if i.label == AnnotationLabel.swallow)

    @property
    def duration_s(self) -> float:
        if self.declared_duration_s is not None:
            return self.declared_duration_s
        return max((i.end_s for i in self.intervals), default=0.0)

    @property
    def name(self) -> str:
        if self.participant:
            return self.participant
        return self.source.stem if self.source is not None else "track"


def validate_track(
    intervals: Iterable[AnnotationInterval],
    *,
    source: Path | None = None,
    participant: str | None = None,
    setting: str | None = None,
    declared_duration_s: float | None = None,
) -> AnnotationTrack:
    """Sort by start and reject empty intervals and same-label overlaps."""
    ordered = sorted(intervals, key=lambda i: (i.start_s, i.end_s, i.label.value))
    for interval in ordered:
        if not interval.start_s < interval.end_s:
            raise AnnotationParseError(
                f"start {interval.start_s} is not before end {interval.end_s}",
                path=source,
                line=interval.line,
            )
    last_by_label: dict[AnnotationLabel, AnnotationInterval] = {}
    for interval in ordered:
        previous = last_by_label.get(interval.label)
        if previous is not None and interval.start_s < previous.end_s:
            rows = (
                f" (rows {previous.line} and {interval.line})"
                if previous.line is not None and interval.line is not None
                else ""
            )
            raise OverlapError(
                f"{interval.label.value} [{interval.start_s}, {interval.end_s}] overlaps "
                f"[{previous.start_s}, {previous.end_s}]{rows}",
                path=source,
                line=interval.line,
            )
        if previous is None or interval.end_s > previous.end_s:
            last_by_label[interval.label] = interval
    return AnnotationTrack(
        intervals=tuple(ordered),
        source=source,
        participant=participant,
        setting=setting,
        declared_duration_s=declared_duration_s,
    )


def _parse_float(text: str, what: str, source: Path, line_no: int | None) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise AnnotationParseError(
            f"{what} {text!r} is not a number", path=source, line=line_no
        ) from exc


def load_annotations(path: str | Path) -> AnnotationTrack:
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise AnnotationParseError(f"cannot read file ({exc.strerror})", path=source) from exc

    tags: dict[str, str] = {}
    intervals: list[AnnotationInterval] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line.lstrip("#").partition("=")
            if sep:
                tags[key.strip()] = value.strip()
            continue
        fields = [part.strip() for part in raw.split("\t")]
        if tuple(fields) == _HEADER:
            continue
        if len(fields) != 3:
            raise AnnotationParseError(
                f"expected 3 tab-separated fields, got {len(fields)}",
                path=source,
                line=line_no,
            )
        start = _parse_float(fields[0], "start_s", source, line_no)
        end = _parse_float(fields[1], "end_s", source, line_no)
        if start < 0:
            raise AnnotationParseError(f"negative start_s {start}", path=source, line=line_no)
        try:
            label = AnnotationLabel(fields[2])
        except ValueError as exc:
            raise UnknownLabelError(
                f"unknown label '{fields[2]}' (expected chew or swallow)",
                path=source,
                line=line_no,
            ) from exc
        intervals.append(AnnotationInterval(start, end, label, line=line_no))

    declared = None
    if "duration_s" in tags:
        declared = _parse_float(tags["duration_s"], "duration_s", source, None)
    track = validate_track(
        intervals,
        source=source,
        participant=tags.get("participant"),
        setting=tags.get("setting"),
        declared_duration_s=declared,
    )
    logger.info(
        "loaded %d chews and %d swallows from %s",
        len(track.chews),
        len(track.swallows),
        source,
    )
    return track


def write_annotations(track: AnnotationTrack, path: str | Path) -> Path:
    target = Path(path)
    lines: list[str] = []
    if track.participant:
        lines.append(f"# participant={track.participant}")
    if track.setting:
        lines.append(f"# setting={track.setting}")
    if track.declared_duration_s is not None:
        lines.append(f"# duration_s={track.declared_duration_s:.3f}")
    lines.append("\t".join(_HEADER))
    lines.extend(
        f"{i.start_s:.3f}\t{i.end_s:.3f}\t{i.label.value}" for i in track.intervals
    )
    with target.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
    return target
