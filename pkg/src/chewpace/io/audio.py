"""Audio ingestion: 16 kHz mono PCM16 WAV files and raw PCM streams."""

from __future__ import annotations

import logging
from collections.abc import Iterator
from pathlib import Path
from typing import Any, BinaryIO

import numpy as np
import soundfile as sf

from ..core.config import SAMPLE_RATE_HZ, SessionConfig
from ..core.errors import UnsupportedFormatError

logger = logging.getLogger(__name__)

PCM_SCALE = 32768.0
_BYTES_PER_SAMPLE = 2


def check_wav_format(path: str | Path) -> sf._SoundFileInfo:
    """Return the file info or raise naming every offending field."""
    source = Path(path)
    try:
        info = sf.info(str(source))
    except (RuntimeError, sf.LibsndfileError) as exc:
        raise UnsupportedFormatError(source, [f"not a readable RIFF/WAVE file ({exc})"]) from exc

    mismatches: list[str] = []
    if info.format != "WAV":
        mismatches.append(f"container {info.format} (expected WAV)")
    if info.samplerate != SAMPLE_RATE_HZ:
        mismatches.append(f"sample rate {info.samplerate} Hz (expected {SAMPLE_RATE_HZ})")
    if info.channels != 1:
        mismatches.append(f"channels {info.channels} (expected 1)")
    if info.subtype != "PCM_16":
        mismatches.append(f"encoding {info.subtype} (expected PCM_16)")
    if mismatches:
        raise UnsupportedFormatError(source, mismatches)
    return info


def read_wav(path: str | Path) -> np.ndarray[Any, Any]:
    """Samples scaled to [-1, 1) by dividing the int16 values by 32768."""
    check_wav_format(path)
    data, _ = sf.read(str(path), dtype="int16", always_2d=False)
    return data.astype(np.float64) / PCM_SCALE


def iter_wav_blocks(path: str | Path, block_samples: int) -> Iterator[np.ndarray[Any, Any]]:
    check_wav_format(path)
    for block in sf.blocks(str(path), blocksize=block_samples, dtype="int16", always_2d=False):
        yield block.astype(np.float64) / PCM_SCALE


def wav_pcm_payload(path: str | Path) -> bytes:
    """Little-endian int16 sample bytes of a WAV file, header stripped."""
    check_wav_format(path)
    data, _ = sf.read(str(path), dtype="int16", always_2d=False)
    return data.astype("<i2").tobytes()


def to_pcm16(samples: np.ndarray[Any, Any]) -> np.ndarray[Any, Any]:
    scaled = np.round(np.asarray(samples, dtype=np.float64) * PCM_SCALE)
    return np.clip(scaled, -PCM_SCALE, PCM_SCALE - 1).astype(np.int16)


def write_wav(path: str | Path, samples: np.ndarray[Any, Any]) -> Path:
    target = Path(path)
    sf.write(str(target), to_pcm16(samples), SAMPLE_RATE_HZ, subtype="PCM_16", format="WAV")
    return target


def _read_exact(stream: BinaryIO, size: int) -> bytes:
    chunks: list[bytes] = []
    remaining = size
    while remaining > 0:
        chunk = stream.read(remaining)
        if not chunk:
            break
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


def read_pcm_stream(
    stream: BinaryIO, config: SessionConfig, *, block_samples: int | None = None
) -> Iterator[np.ndarray[Any, Any]]:
    """Yield window-sized float blocks from raw s16le mono PCM.

    The last block may be shorter. An odd trailing byte is dropped with a
    warning.
    """
    n_bytes = (block_samples or config.window_samples) * _BYTES_PER_SAMPLE
    while True:
        payload = _read_exact(stream, n_bytes)
        if not payload:
            return
        if len(payload) % _BYTES_PER_SAMPLE:
            logger.warning(
                "discarding %d trailing byte(s) of a truncated sample at end of stream",
                len(payload) % _BYTES_PER_SAMPLE,
            )
            payload = payload[: len(payload) - len(payload) % _BYTES_PER_SAMPLE]
            if not payload:
                return
        yield np.frombuffer(payload, dtype="<i2").astype(np.float64) / PCM_SCALE
        if len(payload) < n_bytes:
            return
