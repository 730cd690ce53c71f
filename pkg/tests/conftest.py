from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from chewpace.io.synth import SynthMeal, SynthMealSpec, synth_meal, write_synth_meal


@pytest.fixture(scope="session")
def clean_meal() -> SynthMeal:
    return synth_meal(SynthMealSpec(duration_s=90.0, seed=3))


@pytest.fixture(scope="session")
def noisy_meal() -> SynthMeal:
    return synth_meal(
        SynthMealSpec(duration_s=90.0, seed=5, noise_floor_db=-50.0, artifact_fraction=1.0)
    )


@pytest.fixture(scope="session")
def clean_meal_files(clean_meal: SynthMeal, tmp_path_factory: pytest.TempPathFactory) -> tuple[Path, Path]:
    return write_synth_meal(clean_meal, tmp_path_factory.mktemp("meal"), stem="clean")


def _tone(freq_hz: float, seconds: float, *, amplitude: float = 0.5, rate: int = 16000) -> np.ndarray:
    t = np.arange(int(round(seconds * rate))) / rate
    return (amplitude * np.sin(2 * np.pi * freq_hz * t)).astype(np.float64)


def _bursts(
    onsets_s: list[float],
    *,
    burst_s: float = 0.2,
    total_s: float = 3.0,
    freq_hz: float = 200.0,
    amplitude: float = 0.5,
    rate: int = 16000,
) -> np.ndarray:
    """Silence with sine bursts starting at ``onsets_s``."""
    signal = np.zeros(int(round(total_s * rate)), dtype=np.float64)
    piece = _tone(freq_hz, burst_s, amplitude=amplitude, rate=rate)
    for onset in onsets_s:
        start = int(round(onset * rate))
        signal[start : start + piece.size] = piece[: signal.size - start]
    return signal


@pytest.fixture
def bursts():
    return _bursts


@pytest.fixture
def tone():
    return _tone
