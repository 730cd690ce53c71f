from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING, Any, BinaryIO, TextIO

from .registry import (
    RegisteredScorer,
    get_scorer,
    has_scorer,
    register_scorer,
    registered_scorer_keys,
)

if TYPE_CHECKING:
    from ..core.config import SessionConfig
    from .pipeline import PipelineResult


def register_default_scorers() -> None:
    from .defaults import register_default_scorers as _register_default_scorers

    _register_default_scorers()


def run_replay(
    wav_path: str | Path,
    config: SessionConfig | None = None,
    out_dir: str | Path | None = None,
    **kwargs: Any,
) -> PipelineResult:
    from .pipeline import run_replay as _run_replay

    return _run_replay(wav_path, config, out_dir, **kwargs)


def run_stream(
    stream: BinaryIO,
    config: SessionConfig | None = None,
    out: TextIO | None = None,
    **kwargs: Any,
) -> PipelineResult:
    from .pipeline import run_stream as _run_stream

    return _run_stream(stream, config, out, **kwargs)


__all__ = [
    "RegisteredScorer",
    "get_scorer",
    "has_scorer",
    "register_default_scorers",
    "register_scorer",
    "registered_scorer_keys",
    "run_replay",
    "run_stream",
]
