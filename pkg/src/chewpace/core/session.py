from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any

from ..intervention.policy import PolicyState, new_policy
from ..intervention.prompts import PromptLibrary, load_prompt_library
from ..pace import PaceState
from ..sensing.scorers import ChewScorer
from ..sensing.segmentation import SegmenterState
from .config import SessionConfig, validate_config
from .events import Timeline


@dataclass
class SessionState:
    """Everything one meal's processing sequence owns.

    A session is driven by one caller at a time; independent sessions
    share nothing but the immutable prompt library.
    """

    config: SessionConfig
    scorer: ChewScorer
    policy: PolicyState
    library: PromptLibrary | None = None
    segmenter: SegmenterState = field(default_factory=SegmenterState)
    pace: PaceState = field(default_factory=PaceState)
    timeline: Timeline = field(default_factory=Timeline)

    @property
    def closed_loop(self) -> bool:
        return self.config.intervention_mode == "closed_loop"


def new_session(
    config: SessionConfig | Mapping[str, Any] | None = None,
    *,
    library: PromptLibrary | None = None,
    scorer: ChewScorer | None = None,
    session_start: datetime | None = None,
) -> SessionState:
    """Zeroed segmenter, pace and policy state for one meal.

    Raises ``InvalidConfigError`` naming the failed invariant.
    """
    from ..engine.defaults import build_scorer

    cfg = validate_config(config)
    if library is None and cfg.intervention_mode == "closed_loop":
        library = load_prompt_library(cfg.prompt_library_path)
    timeline = Timeline() if session_start is None else Timeline(session_start=session_start)
    return SessionState(
        config=cfg,
        scorer=scorer if scorer is not None else build_scorer(cfg),
        policy=new_policy(cfg),
        library=library,
        timeline=timeline,
    )
