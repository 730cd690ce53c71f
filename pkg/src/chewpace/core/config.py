from __future__ import annotations

from collections.abc import Mapping
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import ConfigFileError, InvalidConfigError

SAMPLE_RATE_HZ = 16000
InterventionMode = Literal["closed_loop", "sensing_only"]
ScorerName = Literal["heuristic", "table"]


class SessionConfig(BaseModel):
    """Every tunable of a sensing + intervention session.

    Durations named ``*_ms`` are integer milliseconds so that frame and
    clip sizes map to whole sample counts at 16 kHz.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    sample_rate_hz: int = SAMPLE_RATE_HZ
    frame_len_ms: int = Field(default=50, gt=0)
    energy_threshold_db: float = -40.0
    silence_floor_db: float = Field(default=-120.0, lt=0)
    min_segment_ms: int = Field(default=100, gt=0)
    max_segment_ms: int = Field(default=400, gt=0)
    silence_tolerance_ms: int = Field(default=150, gt=0)
    clip_len_ms: int = Field(default=400, gt=0)
    classifier_threshold: float = Field(default=0.5, ge=0.0, le=1.0)
    scorer: ScorerName = "heuristic"
    score_table_path: Path | None = None
    swallow_abs_gap_s: float = Field(default=0.8, gt=0)
    swallow_rel_factor: float = Field(default=1.5, gt=1.0)
    terminal_swallow_offset_s: float = Field(default=0.8, gt=0)
    rate_window_s: float = Field(default=60.0, gt=0)
    cps_trigger_threshold: float = Field(default=20.0, gt=0)
    cps_smoothing_intervals: int = Field(default=2, ge=1)
    warmup_swallows: int = Field(default=2, ge=1)
    cps_reference_chews: int = Field(default=25, ge=1)
    min_prompt_interval_s: float = Field(default=30.0, gt=0)
    intervention_mode: InterventionMode = "closed_loop"
    window_len_s: float = Field(default=3.0, gt=0)
    buffer_windows: int = Field(default=4, ge=1)
    rng_seed: int = 0
    prompt_library_path: Path | None = None

    @model_validator(mode="after")
    def _validate_invariants(self) -> SessionConfig:
        if self.sample_rate_hz != SAMPLE_RATE_HZ:
            raise ValueError(
                f"sample_rate_hz must be {SAMPLE_RATE_HZ} (got {self.sample_rate_hz}); "
                "resampling is not supported"
            )
        if not self.min_segment_ms < self.max_segment_ms:
            raise ValueError(
                "min_segment_ms < max_segment_ms violated "
                f"({self.min_segment_ms} >= {self.max_segment_ms})"
            )
        if not self.max_segment_ms <= self.clip_len_ms:
            raise ValueError(
                "max_segment_ms <= clip_len_ms violated "
                f"({self.max_segment_ms} > {self.clip_len_ms})"
            )
        if (self.sample_rate_hz * self.frame_len_ms) % 1000:
            raise ValueError(
                f"frame_len_ms={self.frame_len_ms} is not a whole number of samples"
            )
        window_ms = self.window_len_s * 1000.0
        if abs(window_ms / self.frame_len_ms - round(window_ms / self.frame_len_ms)) > 1e-9:
            raise ValueError(
                f"window_len_s={self.window_len_s} does not span a whole number of "
                f"{self.frame_len_ms} ms frames"
            )
        if self.scorer == "table" and self.score_table_path is None:
            raise ValueError("scorer='table' requires score_table_path")
        return self

    @property
    def frame_samples(self) -> int:
        return self.sample_rate_hz * self.frame_len_ms // 1000

    @property
    def clip_samples(self) -> int:
        return self.sample_rate_hz * self.clip_len_ms // 1000

    @property
    def window_frames(self) -> int:
        return int(round(self.window_len_s * 1000.0 / self.frame_len_ms))

    @property
    def window_samples(self) -> int:
        return self.window_frames * self.frame_samples

    def frame_time_s(self, index: int) -> float:
        """Start time of frame ``index`` in seconds from session start."""
        return index * self.frame_len_ms / 1000

    @classmethod
    def from_file(
        cls, path: str | Path | None = None, **overrides: Any
    ) -> SessionConfig:
        """Load a flat ``key = value`` file; non-``None`` overrides win."""
        values: dict[str, Any] = {}
        if path is not None:
            values.update(read_key_value_file(path, allowed=cls.model_fields))
        values.update({key: value for key, value in overrides.items() if value is not None})
        return validate_config(values)


def validate_config(data: SessionConfig | Mapping[str, Any] | None) -> SessionConfig:
    """Return a validated config, raising ``InvalidConfigError`` on failure."""
    if data is None:
        return SessionConfig()
    if isinstance(data, SessionConfig):
        payload: Mapping[str, Any] = data.model_dump()
    else:
        payload = data
    try:
        return SessionConfig.model_validate(dict(payload))
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in err['loc']) or 'config'}: {err['msg']}"
            for err in exc.errors()
        )
        raise InvalidConfigError(f"invalid config: {problems}") from exc


def read_key_value_file(
    path: str | Path, *, allowed: Mapping[str, Any] | None = None
) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigFileError(f"cannot read file ({exc.strerror})", path=source) from exc

    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigFileError(
                f"expected 'key = value', got {raw.strip()!r}", path=source, line=line_no
            )
        if allowed is not None and key not in allowed:
            raise ConfigFileError(f"unknown key '{key}'", path=source, line=line_no)
        if key in values:
            raise ConfigFileError(f"duplicate key '{key}'", path=source, line=line_no)
        values[key] = value.strip()
    return values
