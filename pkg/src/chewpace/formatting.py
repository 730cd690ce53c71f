from __future__ import annotations

from typing import Any

from .contracts import LatencyReport
from .evaluation.metrics import EvaluationReport
from .evaluation.stats import DatasetStats, TrackStats
from .intervention.summary import SessionSummary

_RICH_BORDER_STYLE = "white"
_RICH_TITLE_STYLE = "bold white"
_RICH_HEADER_STYLE = "bold white"
_RICH_LABEL_STYLE = "bold white"
_RICH_TEXT_STYLE = "white"
_RICH_TABLE_BORDER_STYLE = "bright_black"


def _stringify(value: Any, digits: int = 4) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{digits}f}"
    return str(value)


def _join_counts(values: list[int] | list[float]) -> str:
    if not values:
        return "-"
    return " ".join(_stringify(value, 2) for value in values)


def _summary_items(summary: SessionSummary) -> list[tuple[str, str]]:
    return [
        ("Duration (s)", _stringify(summary.duration_s, 2)),
        ("Chews", _stringify(summary.total_chews)),
        ("Swallows", _stringify(summary.total_swallows)),
        ("Mean chews per swallow", _stringify(summary.mean_cps, 2)),
        ("Mean chews per minute", _stringify(summary.chews_per_min_mean, 2)),
        ("Prompts delivered", _stringify(summary.prompts_delivered)),
        ("In-meal prompts", _stringify(summary.in_meal_prompts)),
    ]


def _latency_items(latency: LatencyReport) -> list[tuple[str, str]]:
    return [
        ("Windows", str(latency["windows"])),
        ("Mean (ms)", f"{latency['mean_ms']:.3f}"),
        ("p95 (ms)", f"{latency['p95_ms']:.3f}"),
        ("Max (ms)", f"{latency['max_ms']:.3f}"),
    ]


def _evaluation_items(report: EvaluationReport) -> list[tuple[str, str]]:
    return [
        ("True positives", str(report.true_positives)),
        ("False positives", str(report.false_positives)),
        ("False negatives", str(report.false_negatives)),
        ("Precision", _stringify(report.precision)),
        ("Recall", _stringify(report.recall)),
        ("F1", _stringify(report.f1)),
        ("Accuracy", _stringify(report.accuracy)),
        ("Decisions", str(report.decisions)),
        ("MAE chews/min", _stringify(report.mae_chews_per_min)),
        ("MAE chews/swallow", _stringify(report.mae_cps)),
        ("Tolerance (ms)", _stringify(report.tolerance_ms, 1)),
    ]


def _plain_block(title: str, items: list[tuple[str, str]]) -> list[str]:
    width = max(len(label) for label, _ in items)
    lines = [title]
    lines.extend(f"  {label.ljust(width)}  {value}" for label, value in items)
    return lines


def render_summary_text(summary: SessionSummary, latency: LatencyReport | None = None) -> str:
    """Plain-text post-meal summary written next to the event log."""
    lines = _plain_block("Meal summary", _summary_items(summary))
    lines.append(f"  Chews per swallow series  {_join_counts(summary.cps_intervals)}")
    lines.append(f"  Chews per minute series   {_join_counts(summary.chews_per_minute_series)}")
    if latency is not None:
        lines.append("")
        lines.extend(_plain_block("Window latency", _latency_items(latency)))
    return "\n".join(lines) + "\n"


def render_evaluation_text(report: EvaluationReport) -> str:
    lines = _plain_block("Evaluation", _evaluation_items(report))
    if report.per_minute_truth:
        lines.append("")
        lines.append("Per-minute chews (predicted / truth)")
        for index, (pred, truth) in enumerate(
            zip(report.per_minute_predicted, report.per_minute_truth, strict=True)
        ):
            lines.append(f"  {index:>3}  {pred:8.2f}  {truth:8.2f}")
    if report.per_interval_truth:
        lines.append("")
        lines.append("Per-interval chews (predicted / truth)")
        for index, (pred, truth) in enumerate(
            zip(report.per_interval_predicted, report.per_interval_truth, strict=True)
        ):
            lines.append(f"  {index:>3}  {pred:8d}  {truth:8d}")
    return "\n".join(lines) + "\n"


def _stats_cells(row: TrackStats) -> list[str]:
    return [
        row.name,
        row.setting,
        f"{row.duration_s:.2f}",
        str(row.chews),
        str(row.swallows),
        _stringify(row.mean_cps, 2),
    ]


_STATS_HEADERS = ["Track", "Setting", "Duration (s)", "Chews", "Swallows", "Mean CPS"]


def render_stats_text(stats: DatasetStats) -> str:
    rows = [_STATS_HEADERS]
    rows.extend(_stats_cells(row) for row in stats.rows)
    rows.extend(_stats_cells(row) for row in stats.settings)
    rows.append(_stats_cells(stats.total))
    widths = [max(len(row[col]) for row in rows) for col in range(len(_STATS_HEADERS))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"


def _key_value_table(items: list[tuple[str, str]]) -> Any:
    from rich.table import Table

    table = Table(show_header=False, box=None, pad_edge=False)
    table.add_column("k", style=_RICH_LABEL_STYLE, justify="left")
    table.add_column("v", style=_RICH_TEXT_STYLE, justify="left")
    for label, value in items:
        table.add_row(label, value)
    return table


def _render_summary_with_rich(
    console: Any, summary: SessionSummary, latency: LatencyReport | None
) -> None:
    from rich.panel import Panel
    from rich.table import Table
    from rich.text import Text

    console.print(Panel(Text("Meal Summary", style=_RICH_TITLE_STYLE), border_style=_RICH_BORDER_STYLE))
    console.print(
        Panel(
            _key_value_table(_summary_items(summary)),
            title="Pace",
            border_style=_RICH_BORDER_STYLE,
            expand=False,
        )
    )
    if summary.chews_per_minute_series:
        minutes = Table(
            title="Chews per Minute",
            title_style=_RICH_TITLE_STYLE,
            header_style=_RICH_HEADER_STYLE,
            border_style=_RICH_TABLE_BORDER_STYLE,
        )
        minutes.add_column("Minute", style=_RICH_TEXT_STYLE, justify="right")
        minutes.add_column("Chews", style=_RICH_TEXT_STYLE, justify="right")
        for index, count in enumerate(summary.chews_per_minute_series, start=1):
            minutes.add_row(str(index), str(count))
        console.print(minutes)
    if latency is not None and latency["windows"]:
        console.print(
            Panel(
                _key_value_table(_latency_items(latency)),
                title="Window Latency",
                border_style=_RICH_BORDER_STYLE,
                expand=False,
            )
        )


def _render_evaluation_with_rich(console: Any, report: EvaluationReport) -> None:
    from rich.panel import Panel
    from rich.text import Text

    console.print(Panel(Text("Evaluation", style=_RICH_TITLE_STYLE), border_style=_RICH_BORDER_STYLE))
    if report.f1 >= 0.95:
        outcome = ("GOOD", "bright_green")
    elif report.f1 >= 0.8:
        outcome = ("FAIR", "yellow")
    else:
        outcome = ("POOR", "bold bright_red")
    head = _key_value_table(_evaluation_items(report))
    head.add_row("Detection", Text(outcome[0], style=outcome[1]))
    console.print(Panel(head, title="Metrics", border_style=_RICH_BORDER_STYLE, expand=False))


def _render_stats_with_rich(console: Any, stats: DatasetStats) -> None:
    from rich.table import Table

    table = Table(
        title="Dataset Statistics",
        title_style=_RICH_TITLE_STYLE,
        header_style=_RICH_HEADER_STYLE,
        border_style=_RICH_TABLE_BORDER_STYLE,
    )
    for header in _STATS_HEADERS:
        justify = "left" if header in {"Track", "Setting"} else "right"
        table.add_column(header, style=_RICH_TEXT_STYLE, justify=justify)
    for row in stats.rows:
        table.add_row(*_stats_cells(row))
    table.add_section()
    for row in stats.settings:
        table.add_row(*_stats_cells(row), style="bright_black")
    table.add_section()
    table.add_row(*_stats_cells(stats.total), style=_RICH_LABEL_STYLE)
    console.print(table)


def print_pretty_summary(summary: SessionSummary, latency: LatencyReport | None = None) -> None:
    """Print the post-meal summary with rich highlighting when available."""
    try:
        from rich.console import Console

        _render_summary_with_rich(Console(), summary, latency)
    except Exception:
        print(render_summary_text(summary, latency), end="")


def print_pretty_evaluation(report: EvaluationReport) -> None:
    try:
        from rich.console import Console

        _render_evaluation_with_rich(Console(), report)
    except Exception:
        print(render_evaluation_text(report), end="")


def print_pretty_stats(stats: DatasetStats) -> None:
    try:
        from rich.console import Console

        _render_stats_with_rich(Console(), stats)
    except Exception:
        print(render_stats_text(stats), end="")


__all__ = [
    "print_pretty_evaluation",
    "print_pretty_stats",
    "print_pretty_summary",
    "render_evaluation_text",
    "render_stats_text",
    "render_summary_text",
]
