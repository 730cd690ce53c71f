from __future__ import annotations

from ..core.config import SessionConfig
from ..core.errors import InvalidConfigError
from ..sensing.scorers import ChewScorer, HeuristicScorer, TableScorer, load_score_table
from .registry import RegisteredScorer, get_scorer, has_scorer, register_scorer


def _build_heuristic(config: SessionConfig) -> ChewScorer:
    return HeuristicScorer(config)


def _build_table(config: SessionConfig) -> ChewScorer:
    if config.score_table_path is None:
        raise InvalidConfigError("scorer='table' requires score_table_path")
    return TableScorer(load_score_table(config.score_table_path))


def register_default_scorers() -> None:
    if has_scorer("heuristic"):
        return

    register_scorer(
        RegisteredScorer(
            key="heuristic",
            build=_build_heuristic,
            description="low-band energy share x burst sustain",
        )
    )
    register_scorer(
        RegisteredScorer(
            key="table",
            build=_build_table,
            description="per-segment probabilities from a CSV score table",
        )
    )


def build_scorer(config: SessionConfig) -> ChewScorer:
    register_default_scorers()
    return get_scorer(config.scorer).build(config)
