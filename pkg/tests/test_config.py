from __future__ import annotations

import pytest
from pydantic import ValidationError

from chewpace.core.config import SessionConfig, validate_config
from chewpace.core.errors import ConfigFileError, InvalidConfigError


def test_defaults_match_streaming_contract() -> None:
    config = SessionConfig()

    assert config.sample_rate_hz == 16000
    assert config.frame_samples == 800
    assert config.clip_samples == 6400
    assert config.window_frames == 60
    assert config.window_samples == 48000
    assert config.frame_time_s(3) == pytest.approx(0.15)


@pytest.mark.parametrize(
    ("overrides", "fragment"),
    [
        ({"sample_rate_hz": 44100}, "resampling"),
        ({"min_segment_ms": 400, "max_segment_ms": 400}, "min_segment_ms < max_segment_ms"),
        ({"max_segment_ms": 500}, "max_segment_ms <= clip_len_ms"),
        ({"frame_len_ms": 0}, "frame_len_ms"),
        ({"window_len_s": 3.01}, "whole number"),
        ({"classifier_threshold": 1.5}, "classifier_threshold"),
        ({"scorer": "table"}, "score_table_path"),
        ({"bogus": 1}, "bogus"),
    ],
)
def test_validate_config_names_the_violation(overrides: dict[str, object], fragment: str) -> None:
    with pytest.raises(InvalidConfigError, match=fragment):
        validate_config(overrides)


def test_config_is_frozen() -> None:
    config = SessionConfig()
    with pytest.raises(ValidationError):
        config.frame_len_ms = 25  # type: ignore[misc]


def test_from_file_merges_overrides(tmp_path) -> None:
    path = tmp_path / "session.conf"
    path.write_text(
        "# session tuning\n"
        "energy_threshold_db = -35\n"
        "\n"
        "rng_seed = 11  # trailing comment\n"
        "intervention_mode = sensing_only\n",
        encoding="utf-8",
    )

    config = SessionConfig.from_file(path, rng_seed=4, scorer=None)

    assert config.energy_threshold_db == -35.0
    assert config.rng_seed == 4
    assert config.intervention_mode == "sensing_only"
    assert config.scorer == "heuristic"


def test_from_file_reports_line_of_unknown_key(tmp_path) -> None:
    path = tmp_path / "session.conf"
    path.write_text("rng_seed = 1\nwindow_seconds = 3\n", encoding="utf-8")

    with pytest.raises(ConfigFileError) as excinfo:
        SessionConfig.from_file(path)

    assert excinfo.value.line == 2
    assert "window_seconds" in str(excinfo.value)
    assert str(excinfo.value).startswith(f"{path}:2:")


def test_from_file_rejects_malformed_line(tmp_path) -> None:
    path = tmp_path / "session.conf"
    path.write_text("rng_seed 1\n", encoding="utf-8")

    with pytest.raises(ConfigFileError, match="key = value"):
        SessionConfig.from_file(path)


def test_from_file_invalid_value_is_config_error(tmp_path) -> None:
    path = tmp_path / "session.conf"
    path.write_text("min_segment_ms = 500\n", encoding="utf-8")

    with pytest.raises(InvalidConfigError):
        SessionConfig.from_file(path)
