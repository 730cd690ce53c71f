"""Log-mel features for candidate clips.

Frames are 25 ms Hann windows with a 10 ms stride, zero-padded to a
512-point FFT. The power spectrum goes through 128 triangular HTK mel
filters spanning 0 Hz to Nyquist and is taken to natural log with a
1e-10 floor. A 400 ms clip at 16 kHz gives a 38 x 128 matrix.
"""

from __future__ import annotations

import warnings
from functools import lru_cache
from typing import Any

import librosa
import numpy as np
import xarray as xr
from scipy.signal import get_window

from ..core.config import SessionConfig
from ..core.errors import WrongClipLengthError
from .segmentation import CandidateSegment

N_FFT = 512
N_MELS = 128
WINDOW_MS = 25
STRIDE_MS = 10
LOG_FLOOR = 1e-10

MelSpectrogram = xr.DataArray


def _frame_geometry(config: SessionConfig) -> tuple[int, int]:
    win = config.sample_rate_hz * WINDOW_MS // 1000
    hop = config.sample_rate_hz * STRIDE_MS // 1000
    return win, hop


@lru_cache(maxsize=4)
def analysis_window(length: int) -> np.ndarray[Any, Any]:
    return get_window("hann", length, fftbins=True)


@lru_cache(maxsize=4)
def mel_filter_bank(sample_rate_hz: int, n_fft: int = N_FFT, n_mels: int = N_MELS) -> np.ndarray[Any, Any]:
    """Unnormalized HTK triangular filters, shape ``(n_mels, n_fft // 2 + 1)``.

    The lowest filters are narrower than one FFT bin and stay empty.
    """
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message=".*[Ee]mpty filters.*")
        return librosa.filters.mel(
            sr=sample_rate_hz,
            n_fft=n_fft,
            n_mels=n_mels,
            fmin=0.0,
            fmax=sample_rate_hz / 2.0,
            htk=True,
            norm=None,
        )


@lru_cache(maxsize=4)
def mel_center_frequencies(sample_rate_hz: int, n_mels: int = N_MELS) -> np.ndarray[Any, Any]:
    edges = librosa.mel_frequencies(
        n_mels=n_mels + 2, fmin=0.0, fmax=sample_rate_hz / 2.0, htk=True
    )
    return edges[1:-1]


def _clip_array(clip: CandidateSegment | np.ndarray[Any, Any], config: SessionConfig) -> np.ndarray[Any, Any]:
    data = clip.clip if isinstance(clip, CandidateSegment) else np.asarray(clip, dtype=np.float64)
    if data.ndim != 1 or data.size != config.clip_samples:
        raise WrongClipLengthError(
            f"expected a 1-D clip of {config.clip_samples} samples "
            f"({config.clip_len_ms} ms), got shape {data.shape}"
        )
    return data


def windowed_frames(
    clip: CandidateSegment | np.ndarray[Any, Any], config: SessionConfig
) -> np.ndarray[Any, Any]:
    """Hann-weighted analysis frames, shape ``(n_frames, window_samples)``."""
    data = _clip_array(clip, config)
    win, hop = _frame_geometry(config)
    frames = np.lib.stride_tricks.sliding_window_view(data, win)[::hop]
    return frames * analysis_window(win)


def power_spectra(frames: np.ndarray[Any, Any]) -> np.ndarray[Any, Any]:
    """One-sided power spectra of zero-padded frames, shape ``(n_frames, 257)``."""
    return np.abs(np.fft.rfft(frames, n=N_FFT, axis=-1)) ** 2


def log_mel(clip: CandidateSegment | np.ndarray[Any, Any], config: SessionConfig) -> MelSpectrogram:
    power = power_spectra(windowed_frames(clip, config))
    mel_power = power @ mel_filter_bank(config.sample_rate_hz).T
    values = np.log(np.maximum(mel_power, LOG_FLOOR))
    _, hop = _frame_geometry(config)
    return xr.DataArray(
        values,
        dims=("frame", "mel"),
        coords={
            "time_s": ("frame", np.arange(values.shape[0]) * hop / config.sample_rate_hz),
            "mel_hz": ("mel", mel_center_frequencies(config.sample_rate_hz)),
        },
        name="log_mel",
        attrs={
            "window": "hann",
            "window_ms": WINDOW_MS,
            "stride_ms": STRIDE_MS,
            "n_fft": N_FFT,
            "log_floor": LOG_FLOOR,
        },
    )
