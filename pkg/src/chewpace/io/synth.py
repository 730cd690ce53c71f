"""Deterministic synthetic meals with exact ground truth.

Chew onsets sit on the 50 ms frame grid so the planted truth and the
segmenter agree to the sample. Runs of chews are separated by long
swallow gaps; the truth swallow label is a 300 ms interval centred in
the gap. Timing, waveform, artifact and noise draws come from separate
streams of one seed, so adding noise or artifacts leaves the meal itself
unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.signal.windows import tukey

from ..core.config import SAMPLE_RATE_HZ
from ..evaluation.annotations import (
    AnnotationInterval,
    AnnotationLabel,
    AnnotationTrack,
    validate_track,
    write_annotations,
)
from .audio import write_wav

GRID_MS = 50
LEAD_IN_FRAMES = 20
MIN_CHEW_GAP_FRAMES = 7
MIN_SWALLOW_GAP_FRAMES = 20
SILENT_FRAMES_AFTER_BURST = 4
SWALLOW_HALF_WIDTH_MS = 150
RAMP_MS = 5
CHEW_BAND_HZ = (80.0, 600.0)
ARTIFACT_MS = (100, 200)
AMPLITUDE_RANGE = (0.2, 0.6)
CORPUS_DURATION_S = (60.0, 300.0)


class BurstTemplate(str, Enum):
    low_freq_chew = "low_freq_chew"
    broadband_artifact = "broadband_artifact"


class SynthMealSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    duration_s: float = Field(default=60.0, gt=0)
    chew_gap_mean_s: float = Field(default=0.424, gt=0)
    chew_gap_jitter_s: float = Field(default=0.07, ge=0)
    swallow_gap_mean_s: float = Field(default=1.919, gt=0)
    swallow_gap_jitter_s: float = Field(default=0.5, ge=0)
    chews_per_swallow_mean: float = Field(default=22.0, gt=0)
    burst_template: BurstTemplate = BurstTemplate.low_freq_chew
    burst_min_ms: int = Field(default=120, ge=100)
    burst_max_ms: int = Field(default=350, le=400)
    artifact_fraction: float = Field(default=0.0, ge=0)
    noise_floor_db: float | None = Field(default=None, lt=0)
    seed: int = 0
    participant: str | None = None
    setting: str = "synthetic"

    @model_validator(mode="after")
    def _check_ranges(self) -> SynthMealSpec:
        if self.burst_min_ms > self.burst_max_ms:
            raise ValueError(
                f"burst_min_ms={self.burst_min_ms} exceeds burst_max_ms={self.burst_max_ms}"
            )
        if self.chew_gap_mean_s - self.chew_gap_jitter_s <= 0:
            raise ValueError("chew_gap_mean_s - chew_gap_jitter_s must be positive")
        if self.swallow_gap_mean_s - self.swallow_gap_jitter_s <= 0:
            raise ValueError("swallow_gap_mean_s - swallow_gap_jitter_s must be positive")
        return self


@dataclass(frozen=True)
class PlantedBurst:
    onset_frame: int
    duration_ms: int

    @property
    def start_s(self) -> float:
        return self.onset_frame * GRID_MS / 1000

    @property
    def end_s(self) -> float:
        return (self.onset_frame * GRID_MS + self.duration_ms) / 1000


@dataclass
class SynthMeal:
    spec: SynthMealSpec
    samples: np.ndarray[Any, Any]
    truth: AnnotationTrack
    chews: list[PlantedBurst] = field(default_factory=list)
    artifacts: list[PlantedBurst] = field(default_factory=list)
    swallow_centers_s: list[float] = field(default_factory=list)
    cps_intervals: list[int] = field(default_factory=list)

    @property
    def total_chews(self) -> int:
        return sum(self.cps_intervals)

    @property
    def total_swallows(self) -> int:
        return len(self.cps_intervals)

    @property
    def mean_cps(self) -> float | None:
        return self.total_chews / self.total_swallows if self.total_swallows else None


def _frames(seconds: float) -> int:
    return int(round(seconds * 1000 / GRID_MS))


def _gap_frames(rng: np.random.Generator, mean_s: float, jitter_s: float, minimum: int) -> int:
    gap_s = mean_s + rng.uniform(-jitter_s, jitter_s)
    return max(minimum, _frames(gap_s))


def _burst_frames(duration_ms: int) -> int:
    return math.ceil(duration_ms / GRID_MS)


def _chew_waveform(rng: np.random.Generator, n: int) -> np.ndarray[Any, Any]:
    t = np.arange(n) / SAMPLE_RATE_HZ
    freqs = rng.uniform(*CHEW_BAND_HZ, size=3)
    phases = rng.uniform(0.0, 2 * np.pi, size=3)
    wave = np.sin(2 * np.pi * freqs[:, None] * t[None, :] + phases[:, None]).sum(axis=0)
    return wave / np.max(np.abs(wave))


def _noise_waveform(rng: np.random.Generator, n: int) -> np.ndarray[Any, Any]:
    wave = rng.standard_normal(n)
    return wave / np.max(np.abs(wave))


def _envelope(n: int) -> np.ndarray[Any, Any]:
    ramp = SAMPLE_RATE_HZ * RAMP_MS // 1000
    return tukey(n, alpha=min(1.0, 2 * ramp / n))


def _render(
    out: np.ndarray[Any, Any], burst: PlantedBurst, wave: np.ndarray[Any, Any], amplitude: float
) -> None:
    start = burst.onset_frame * GRID_MS * SAMPLE_RATE_HZ // 1000
    out[start : start + wave.size] += amplitude * wave * _envelope(wave.size)


def synth_meal(spec: SynthMealSpec) -> SynthMeal:
    timing_ss, wave_ss, artifact_ss, noise_ss = np.random.SeedSequence(spec.seed).spawn(4)
    timing = np.random.default_rng(timing_ss)
    waves = np.random.default_rng(wave_ss)
    artifact_rng = np.random.default_rng(artifact_ss)

    total_frames = int(math.floor(spec.duration_s * 1000 / GRID_MS + 1e-9))
    n_samples = int(round(spec.duration_s * SAMPLE_RATE_HZ))

    def burst_ms(cap_ms: int) -> int:
        high = max(spec.burst_min_ms, min(spec.burst_max_ms, cap_ms))
        return int(timing.integers(spec.burst_min_ms, high + 1))

    chews: list[PlantedBurst] = []
    swallow_centers_ms: list[int] = []
    cps_intervals: list[int] = []
    swallow_gaps: list[tuple[PlantedBurst, int]] = []

    frame = LEAD_IN_FRAMES
    done = False
    while not done:
        n_run = max(1, int(timing.poisson(spec.chews_per_swallow_mean)))
        run: list[PlantedBurst] = []
        gap = 0
        for i in range(n_run):
            if frame + MIN_SWALLOW_GAP_FRAMES > total_frames:
                done = True
                break
            if i == n_run - 1:
                gap = _gap_frames(
                    timing, spec.swallow_gap_mean_s, spec.swallow_gap_jitter_s, MIN_SWALLOW_GAP_FRAMES
                )
            else:
                gap = _gap_frames(
                    timing, spec.chew_gap_mean_s, spec.chew_gap_jitter_s, MIN_CHEW_GAP_FRAMES
                )
            cap_ms = (gap - SILENT_FRAMES_AFTER_BURST) * GRID_MS
            run.append(PlantedBurst(frame, burst_ms(cap_ms)))
            frame += gap
        if not run:
            break
        last = run[-1]
        if done:
            gap = _gap_frames(
                timing, spec.swallow_gap_mean_s, spec.swallow_gap_jitter_s, MIN_SWALLOW_GAP_FRAMES
            )
            gap = min(gap, total_frames - last.onset_frame)
        chews.extend(run)
        cps_intervals.append(len(run))
        swallow_centers_ms.append(last.onset_frame * GRID_MS + gap * GRID_MS // 2)
        swallow_gaps.append((last, gap))

    samples = np.zeros(n_samples, dtype=np.float64)
    artifact_template = spec.burst_template == BurstTemplate.broadband_artifact
    for chew in chews:
        n = chew.duration_ms * SAMPLE_RATE_HZ // 1000
        amplitude = waves.uniform(*AMPLITUDE_RANGE)
        wave = _noise_waveform(waves, n) if artifact_template else _chew_waveform(waves, n)
        _render(samples, chew, wave, amplitude)

    artifacts: list[PlantedBurst] = []
    if spec.artifact_fraction > 0:
        for (last, gap), run_len in zip(swallow_gaps, cps_intervals):
            cursor = last.onset_frame + _burst_frames(last.duration_ms) + SILENT_FRAMES_AFTER_BURST
            gap_end = last.onset_frame + gap
            wanted = int(artifact_rng.poisson(spec.artifact_fraction * run_len))
            for _ in range(wanted):
                duration = int(artifact_rng.integers(ARTIFACT_MS[0], ARTIFACT_MS[1] + 1))
                if cursor + _burst_frames(duration) + SILENT_FRAMES_AFTER_BURST > gap_end:
                    break
                burst = PlantedBurst(cursor, duration)
                amplitude = artifact_rng.uniform(*AMPLITUDE_RANGE)
                n = duration * SAMPLE_RATE_HZ // 1000
                _render(samples, burst, _noise_waveform(artifact_rng, n), amplitude)
                artifacts.append(burst)
                cursor += _burst_frames(duration) + SILENT_FRAMES_AFTER_BURST

    if spec.noise_floor_db is not None:
        noise_rng = np.random.default_rng(noise_ss)
        samples += noise_rng.standard_normal(n_samples) * 10.0 ** (spec.noise_floor_db / 20.0)
    np.clip(samples, -1.0, 1.0 - 1.0 / 32768.0, out=samples)

    intervals: list[AnnotationInterval] = []
    if not artifact_template:
        intervals.extend(
            AnnotationInterval(chew.start_s, chew.end_s, AnnotationLabel.chew) for chew in chews
        )
        intervals.extend(
            AnnotationInterval(
                (center - SWALLOW_HALF_WIDTH_MS) / 1000,
                (center + SWALLOW_HALF_WIDTH_MS) / 1000,
                AnnotationLabel.swallow,
            )
            for center in swallow_centers_ms
        )
    truth = validate_track(
        intervals,
        participant=spec.participant or f"synth-{spec.seed:03d}",
        setting=spec.setting,
        declared_duration_s=n_samples / SAMPLE_RATE_HZ,
    )
    return SynthMeal(
        spec=spec,
        samples=samples,
        truth=truth,
        chews=[] if artifact_template else chews,
        artifacts=chews + artifacts if artifact_template else artifacts,
        swallow_centers_s=[] if artifact_template else [c / 1000 for c in swallow_centers_ms],
        cps_intervals=[] if artifact_template else cps_intervals,
    )


def write_synth_meal(meal: SynthMeal, out_dir: str | Path, stem: str | None = None) -> tuple[Path, Path]:
    target = Path(out_dir)
    target.mkdir(parents=True, exist_ok=True)
    name = stem or meal.truth.name
    wav_path = write_wav(target / f"{name}.wav", meal.samples)
    truth_path = write_annotations(meal.truth, target / f"{name}.tsv")
    return wav_path, truth_path


def corpus_duration_s(seed: int) -> float:
    """Meal length drawn from 60-300 s, rounded to the 50 ms grid."""
    value = np.random.default_rng(seed).uniform(*CORPUS_DURATION_S)
    return round(value * 1000 / GRID_MS) * GRID_MS / 1000


def corpus_specs(n_meals: int, first_seed: int = 1, **overrides: Any) -> list[SynthMealSpec]:
    specs: list[SynthMealSpec] = []
    for seed in range(first_seed, first_seed + n_meals):
        values: dict[str, Any] = {"duration_s": corpus_duration_s(seed), "seed": seed}
        values.update({key: value for key, value in overrides.items() if value is not None})
        values["seed"] = seed
        specs.append(SynthMealSpec.model_validate(values))
    return specs


def render_corpus(
    n_meals: int, first_seed: int, out_dir: str | Path, **overrides: Any
) -> list[tuple[Path, Path]]:
    return [
        write_synth_meal(synth_meal(spec), out_dir)
        for spec in corpus_specs(n_meals, first_seed, **overrides)
    ]
