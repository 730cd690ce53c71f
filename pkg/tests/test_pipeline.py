from __future__ import annotations

import io
import threading

import numpy as np
import pytest

from chewpace.core.config import SessionConfig
from chewpace.core.errors import WindowProcessingError
from chewpace.core.session import new_session
from chewpace.engine import run_replay, run_stream
from chewpace.engine.pipeline import SessionPipeline, latency_report
from chewpace.io.audio import read_wav, wav_pcm_payload, write_wav
from chewpace.io.eventlog import read_event_log
from chewpace.io.synth import corpus_specs, synth_meal, write_synth_meal
from chewpace.sensing.scorers import ChewScorer


def _corpus_reports(tmp_path_factory, **overrides):
    out_dir = tmp_path_factory.mktemp("corpus")
    reports = []
    for spec in corpus_specs(20, first_seed=1, **overrides):
        meal = synth_meal(spec)
        wav_path, _ = write_synth_meal(meal, out_dir)
        result = run_replay(wav_path, SessionConfig(intervention_mode="sensing_only"), truth=meal.truth)
        reports.append(result.evaluation)
    return reports


@pytest.fixture(scope="module")
def clean_corpus(tmp_path_factory):
    return _corpus_reports(tmp_path_factory)


@pytest.fixture(scope="module")
def noisy_corpus(tmp_path_factory):
    return _corpus_reports(tmp_path_factory, noise_floor_db=-50.0, artifact_fraction=0.1)


def test_clean_corpus_detection(clean_corpus) -> None:
    tp = sum(r.true_positives for r in clean_corpus)
    fp = sum(r.false_positives for r in clean_corpus)
    fn = sum(r.false_negatives for r in clean_corpus)

    assert 2 * tp / (2 * tp + fp + fn) >= 0.99
    assert min(r.f1 for r in clean_corpus) >= 0.97


def test_clean_corpus_pace_errors(clean_corpus) -> None:
    assert np.mean([r.mae_chews_per_min for r in clean_corpus]) <= 0.2
    assert np.mean([r.mae_cps for r in clean_corpus]) <= 1.0


def test_noisy_corpus_detection(noisy_corpus) -> None:
    tp = sum(r.true_positives for r in noisy_corpus)
    fp = sum(r.false_positives for r in noisy_corpus)
    fn = sum(r.false_negatives for r in noisy_corpus)

    assert 2 * tp / (2 * tp + fp + fn) >= 0.95


def test_replay_writes_all_outputs(clean_meal_files, tmp_path) -> None:
    wav_path, truth_path = clean_meal_files

    result = run_replay(wav_path, SessionConfig(), tmp_path / "run", truth=truth_path)

    assert set(result.paths) == {
        "events",
        "summary_txt",
        "summary_csv",
        "evaluation_txt",
        "evaluation_csv",
    }
    assert all(path.is_file() for path in result.paths.values())
    assert result.evaluation is not None
    records = read_event_log(result.paths["events"])
    assert records[-1]["kind"] == "summary"
    assert records[-1]["total_chews"] == result.summary.total_chews
    assert "Meal summary" in result.paths["summary_txt"].read_text(encoding="utf-8")


def test_replay_is_byte_identical_across_runs(clean_meal_files, tmp_path) -> None:
    wav_path, _ = clean_meal_files
    config = SessionConfig(rng_seed=11)

    first = run_replay(wav_path, config, tmp_path / "a").paths["events"]
    second = run_replay(wav_path, config, tmp_path / "b").paths["events"]

    assert first.read_bytes() == second.read_bytes()


def test_seed_changes_prompts_only(clean_meal_files, tmp_path) -> None:
    wav_path, _ = clean_meal_files

    one = run_replay(wav_path, SessionConfig(rng_seed=1))
    two = run_replay(wav_path, SessionConfig(rng_seed=2))

    def sensed(result):
        return [r for r in result.records if r["kind"] in {"chew", "swallow"}]

    assert sensed(one) == sensed(two)


def test_stream_matches_replay(clean_meal_files, tmp_path) -> None:
    wav_path, _ = clean_meal_files
    config = SessionConfig(rng_seed=4)
    replay = run_replay(wav_path, config, tmp_path / "replay")
    out = io.StringIO()

    streamed = run_stream(io.BytesIO(wav_pcm_payload(wav_path)), config, out)

    assert streamed.records == replay.records
    assert out.getvalue() == replay.paths["events"].read_text(encoding="utf-8")


def test_stream_cut_mid_window_matches_truncated_replay(clean_meal_files, tmp_path) -> None:
    wav_path, _ = clean_meal_files
    cut = 16000 * 10 + 1234
    truncated = write_wav(tmp_path / "cut.wav", read_wav(wav_path)[:cut])

    streamed = run_stream(io.BytesIO(wav_pcm_payload(wav_path)[: cut * 2]), SessionConfig())
    replay = run_replay(truncated, SessionConfig())

    assert streamed.records == replay.records
    assert streamed.summary.duration_s == pytest.approx(cut / 16000)


def test_empty_stream_gives_header_and_empty_summary() -> None:
    out = io.StringIO()

    result = run_stream(io.BytesIO(b""), SessionConfig(), out)

    assert [r["kind"] for r in result.records] == ["header", "summary"]
    assert result.summary.total_chews == 0
    assert result.summary.duration_s == 0.0
    assert out.getvalue().count("\n") == 2


def test_records_are_time_ordered(clean_meal_files) -> None:
    wav_path, _ = clean_meal_files

    result = run_replay(wav_path, SessionConfig())

    times = [r["time_s"] for r in result.records if r["kind"] != "header"]
    assert times == sorted(times)


def test_pre_meal_prompt_opens_closed_loop_log(clean_meal_files) -> None:
    wav_path, _ = clean_meal_files

    result = run_replay(wav_path, SessionConfig())

    first = result.records[1]
    assert first["kind"] == "prompt"
    assert first["phase"] == "pre_meal"
    assert first["time_s"] == 0.0


def test_in_meal_prompts_respect_cooldown(clean_meal_files) -> None:
    wav_path, _ = clean_meal_files
    config = SessionConfig(cps_trigger_threshold=40.0)

    result = run_replay(wav_path, config)

    times = [
        r["time_s"] for r in result.records if r["kind"] == "prompt" and r["phase"] == "in_meal"
    ]
    assert times
    assert all(b - a >= config.min_prompt_interval_s for a, b in zip(times, times[1:]))


def test_sensing_only_logs_no_prompts(clean_meal_files) -> None:
    wav_path, _ = clean_meal_files

    result = run_replay(wav_path, SessionConfig(intervention_mode="sensing_only"))

    assert not any(r["kind"] == "prompt" for r in result.records)
    assert result.summary.prompts_delivered == 0
    assert result.summary.total_chews > 0


def test_clean_meal_infers_the_planted_swallows(clean_meal, clean_meal_files) -> None:
    wav_path, _ = clean_meal_files

    result = run_replay(wav_path, SessionConfig(intervention_mode="sensing_only"))

    assert abs(result.summary.total_swallows - clean_meal.total_swallows) <= 1


def test_window_latency_is_well_inside_real_time(clean_meal_files) -> None:
    wav_path, _ = clean_meal_files

    latency = run_replay(wav_path, SessionConfig()).latency

    assert latency["windows"] == 30
    assert latency["mean_ms"] < 300.0


def test_latency_report_of_no_windows() -> None:
    assert latency_report([]) == {"windows": 0, "mean_ms": 0.0, "p95_ms": 0.0, "max_ms": 0.0}


class _FailingScorer(ChewScorer):
    id = "failing"

    def score(self, segment) -> float:
        raise ValueError("scorer exploded")


def test_window_errors_carry_the_window_index(bursts) -> None:
    session = new_session(SessionConfig(), scorer=_FailingScorer())
    pipeline = SessionPipeline(session)

    with pytest.raises(WindowProcessingError, match="window 0: ValueError: scorer exploded") as info:
        pipeline.feed(bursts([0.5]))
    assert info.value.window_index == 0


def test_feeding_after_finish_is_rejected() -> None:
    pipeline = SessionPipeline(SessionConfig(intervention_mode="sensing_only"))
    pipeline.finish()

    with pytest.raises(RuntimeError, match="already finished"):
        pipeline.feed(np.zeros(10))


def test_silent_windows_reach_the_sink_before_finish(bursts) -> None:
    released = []
    pipeline = SessionPipeline(SessionConfig(intervention_mode="sensing_only"), sink=released.append)

    pipeline.feed(bursts([0.5, 0.9, 1.3]))
    for _ in range(10):
        pipeline.feed(np.zeros(48000))

    live_pace = [r["time_s"] for r in released if r["kind"] == "pace"]
    assert live_pace[:5] == [3.0, 6.0, 9.0, 12.0, 15.0]
    assert not any(r["kind"] == "swallow" for r in released)

    result = pipeline.finish()

    swallows = [r["time_s"] for r in result.records if r["kind"] == "swallow"]
    assert swallows == [15.0]
    times = [r["time_s"] for r in result.records if r["kind"] != "header"]
    assert times == sorted(times)
    assert result.summary.cps_intervals == [3]
    assert released == result.records


def test_stream_reader_stops_when_processing_fails(bursts) -> None:
    config = SessionConfig(buffer_windows=1)
    session = new_session(config, scorer=_FailingScorer())
    samples = np.tile(bursts([0.5]), 20)
    payload = np.round(samples * 32767).astype("<i2").tobytes()

    with pytest.raises(WindowProcessingError):
        run_stream(io.BytesIO(payload), session=session)

    readers = [t for t in threading.enumerate() if t.name == "chewpace-pcm-reader"]
    for reader in readers:
        reader.join(timeout=1.0)
    assert not any(reader.is_alive() for reader in readers)
