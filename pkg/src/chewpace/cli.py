from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any

from .core.config import SessionConfig, read_key_value_file
from .evaluation.matching import DEFAULT_TOLERANCE_MS


def _existing_file(path: str) -> Path:
    candidate = Path(path)
    if not candidate.is_file():
        raise argparse.ArgumentTypeError(f"file not found: {path}")
    return candidate


def _configure_logging(verbose: bool) -> None:
    from rich.console import Console
    from rich.logging import RichHandler

    handler = RichHandler(console=Console(stderr=True), show_path=False)
    root = logging.getLogger("chewpace")
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)
    root.propagate = False


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chewpace",
        description=(
            "Detect chews, infer swallows and pace a meal from 16 kHz earbud audio.\n"
            "Use `chewpace <command> --help` for command-specific options."
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "Examples:\n"
            "  chewpace synth --out meals --seed 7 --duration 120\n"
            "  chewpace replay meals/synth-007.wav --truth meals/synth-007.tsv --out run\n"
            "  arecord -f S16_LE -r 16000 -c 1 | chewpace stream > events.jsonl\n"
            "  chewpace eval --pred run/events.jsonl --truth meals/synth-007.tsv\n"
            "  chewpace stats annotations/*.tsv --csv stats.csv"
        ),
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="Log debug messages to stderr."
    )
    subparsers = parser.add_subparsers(dest="command", required=True, title="Commands")

    def _add_session_options(command_parser: argparse.ArgumentParser) -> None:
        command_parser.add_argument(
            "--config", type=_existing_file, default=None, help="Session config file (key = value)."
        )
        command_parser.add_argument(
            "--seed", type=int, default=None, help="Seed for prompt selection (default: 0)."
        )
        command_parser.add_argument(
            "--mode",
            choices=("closed_loop", "sensing_only"),
            default=None,
            help="Deliver prompts (closed_loop) or only sense and log (sensing_only).",
        )
        command_parser.add_argument(
            "--scorer",
            choices=("heuristic", "table"),
            default=None,
            help="Chew scorer to use (default: heuristic).",
        )
        command_parser.add_argument(
            "--score-table",
            type=_existing_file,
            default=None,
            help="CSV of segment_id,probability for the table scorer.",
        )
        command_parser.add_argument(
            "--prompts",
            type=_existing_file,
            default=None,
            help="Prompt library TSV (default: bundled library).",
        )

    replay = subparsers.add_parser("replay", help="Process a recorded WAV file.")
    replay.add_argument("wav", type=_existing_file, help="PCM16 mono 16 kHz WAV file")
    replay.add_argument(
        "--truth", type=_existing_file, default=None, help="Annotation TSV to evaluate against."
    )
    replay.add_argument(
        "--out", type=Path, default=None, help="Directory for the event log and reports."
    )
    _add_session_options(replay)

    stream = subparsers.add_parser(
        "stream", help="Process raw s16le PCM from stdin, writing JSONL events to stdout."
    )
    _add_session_options(stream)

    synth = subparsers.add_parser("synth", help="Render synthetic meals with ground truth.")
    synth.add_argument("--out", type=Path, required=True, help="Output directory.")
    synth.add_argument(
        "--spec", type=_existing_file, default=None, help="Meal spec file (key = value)."
    )
    synth.add_argument("--seed", type=int, default=None, help="Seed (first seed for --meals).")
    synth.add_argument("--duration", type=float, default=None, help="Meal length in seconds.")
    synth.add_argument(
        "--meals", type=int, default=None, help="Render a corpus of N meals with consecutive seeds."
    )
    synth.add_argument(
        "--noise-db", type=float, default=None, help="Add a noise floor at this dBFS level."
    )
    synth.add_argument(
        "--artifacts",
        type=float,
        default=None,
        help="Broadband artifacts per chew, placed in swallow gaps (default: 0).",
    )
    synth.add_argument(
        "--template",
        choices=("low_freq_chew", "broadband_artifact"),
        default=None,
        help="Burst template (broadband_artifact renders a meal with no chews).",
    )

    evaluate = subparsers.add_parser("eval", help="Score an event log against annotations.")
    evaluate.add_argument("--pred", type=_existing_file, required=True, help="JSONL event log.")
    evaluate.add_argument("--truth", type=_existing_file, required=True, help="Annotation TSV.")
    evaluate.add_argument(
        "--tolerance-ms",
        type=float,
        default=DEFAULT_TOLERANCE_MS,
        help=f"Matching tolerance (default: {DEFAULT_TOLERANCE_MS:g} ms).",
    )
    evaluate.add_argument(
        "--out", type=Path, default=None, help="Directory for evaluation.txt/evaluation.csv."
    )

    stats = subparsers.add_parser("stats", help="Summarize annotation tracks.")
    stats.add_argument("tracks", type=_existing_file, nargs="+", help="Annotation TSV files.")
    stats.add_argument("--csv", type=Path, default=None, help="Write the table as CSV.")

    return parser


def _session_config(args: argparse.Namespace) -> SessionConfig:
    return SessionConfig.from_file(
        args.config,
        rng_seed=args.seed,
        intervention_mode=args.mode,
        scorer=args.scorer if args.scorer is not None or args.score_table is None else "table",
        score_table_path=args.score_table,
        prompt_library_path=args.prompts,
    )


def _run_replay(args: argparse.Namespace) -> int:
    from .engine.pipeline import run_replay
    from .formatting import print_pretty_evaluation, print_pretty_summary

    result = run_replay(args.wav, _session_config(args), args.out, truth=args.truth)
    print_pretty_summary(result.summary, result.latency)
    if result.evaluation is not None:
        print_pretty_evaluation(result.evaluation)
    for label, path in result.paths.items():
        print(f"{label}: {path}")
    return 0


def _run_stream(args: argparse.Namespace) -> int:
    from .engine.pipeline import run_stream

    result = run_stream(sys.stdin.buffer, _session_config(args), sys.stdout)
    logging.getLogger(__name__).info(
        "stream closed after %.3f s with %d chews",
        result.summary.duration_s,
        result.summary.total_chews,
    )
    return 0


def _run_synth(args: argparse.Namespace) -> int:
    from .io.synth import SynthMealSpec, render_corpus, synth_meal, write_synth_meal

    values: dict[str, Any] = {}
    if args.spec is not None:
        values.update(read_key_value_file(args.spec, allowed=SynthMealSpec.model_fields))
    overrides = {
        "seed": args.seed,
        "duration_s": args.duration,
        "noise_floor_db": args.noise_db,
        "artifact_fraction": args.artifacts,
        "burst_template": args.template,
    }
    values.update({key: value for key, value in overrides.items() if value is not None})

    if args.meals is not None:
        first_seed = int(values.pop("seed", 1))
        paths = render_corpus(args.meals, first_seed, args.out, **values)
    else:
        paths = [write_synth_meal(synth_meal(SynthMealSpec.model_validate(values)), args.out)]
    for wav_path, truth_path in paths:
        print(f"{wav_path}\t{truth_path}")
    return 0


def _run_eval(args: argparse.Namespace) -> int:
    from .evaluation.annotations import load_annotations
    from .evaluation.metrics import evaluate
    from .formatting import print_pretty_evaluation, render_evaluation_text
    from .io.eventlog import events_from_records, read_event_log, summary_from_records
    from .io.reports import EVALUATION_COLUMNS, evaluation_rows, write_report_csv

    records = read_event_log(args.pred)
    track = load_annotations(args.truth)
    summary = summary_from_records(records)
    duration_s = float(summary["duration_s"]) if summary is not None else track.duration_s
    report = evaluate(
        events_from_records(records),
        track,
        duration_s=duration_s,
        tolerance_ms=args.tolerance_ms,
    )
    print_pretty_evaluation(report)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "evaluation.txt").write_text(render_evaluation_text(report), encoding="utf-8")
        write_report_csv(evaluation_rows(report), args.out / "evaluation.csv", EVALUATION_COLUMNS)
    return 0


def _run_stats(args: argparse.Namespace) -> int:
    from .evaluation.annotations import load_annotations
    from .evaluation.stats import dataset_stats
    from .formatting import print_pretty_stats
    from .io.reports import STATS_COLUMNS, stats_rows, write_report_csv

    stats = dataset_stats([load_annotations(path) for path in args.tracks])
    print_pretty_stats(stats)
    if args.csv is not None:
        write_report_csv(stats_rows(stats), args.csv, STATS_COLUMNS)
    return 0


_HANDLERS = {
    "replay": _run_replay,
    "stream": _run_stream,
    "synth": _run_synth,
    "eval": _run_eval,
    "stats": _run_stats,
}


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    command = str(args.command)
    if command not in _HANDLERS:
        parser.error(f"Unsupported command: {command}")
    try:
        return _HANDLERS[command](args)
    except Exception as exc:
        print(f"chewpace: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    raise SystemExit(run())
