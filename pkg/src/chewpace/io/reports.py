from __future__ import annotations

import csv
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

from ..evaluation.metrics import EvaluationReport
from ..evaluation.stats import DatasetStats, TrackStats
from ..intervention.summary import SessionSummary

SUMMARY_COLUMNS = (
    "duration_s",
    "total_chews",
    "total_swallows",
    "mean_cps",
    "chews_per_min_mean",
    "prompts_delivered",
    "in_meal_prompts",
)
EVALUATION_COLUMNS = (
    "true_positives",
    "false_positives",
    "false_negatives",
    "precision",
    "recall",
    "f1",
    "accuracy",
    "mae_chews_per_min",
    "mae_cps",
)
STATS_COLUMNS = ("level", "name", "setting", "duration_s", "chews", "swallows", "mean_cps")


def _cell(key: str, value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.2f}" if key == "duration_s" else f"{value:.4f}"
    return str(value)


def write_report_csv(
    rows: Sequence[Mapping[str, Any]],
    path: str | Path,
    columns: Sequence[str] | None = None,
) -> Path:
    """Write rows with a fixed column order; missing values become empty cells."""
    target = Path(path)
    header = list(columns) if columns is not None else (list(rows[0]) if rows else [])
    with target.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(key, row.get(key)) for key in header])
    return target


def summary_rows(summary: SessionSummary) -> list[dict[str, Any]]:
    data = summary.model_dump()
    return [{key: data[key] for key in SUMMARY_COLUMNS}]


def evaluation_rows(report: EvaluationReport) -> list[dict[str, Any]]:
    data = report.model_dump()
    return [{key: data[key] for key in EVALUATION_COLUMNS}]


def _stats_row(level: str, row: TrackStats) -> dict[str, Any]:
    return {
        "level": level,
        "name": row.name,
        "setting": row.setting,
        "duration_s": row.duration_s,
        "chews": row.chews,
        "swallows": row.swallows,
        "mean_cps": row.mean_cps,
    }


def stats_rows(stats: DatasetStats) -> list[dict[str, Any]]:
    rows = [_stats_row("track", row) for row in stats.rows]
    rows.extend(_stats_row("setting", row) for row in stats.settings)
    rows.append(_stats_row("total", stats.total))
    return rows
