from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..core.config import SessionConfig
from ..sensing.scorers import ChewScorer

ScorerFactory = Callable[[SessionConfig], ChewScorer]


@dataclass(frozen=True)
class RegisteredScorer:
    key: str
    build: ScorerFactory
    description: str = ""


_REGISTRY: dict[str, RegisteredScorer] = {}


def register_scorer(scorer: RegisteredScorer) -> None:
    _REGISTRY[scorer.key] = scorer


def get_scorer(key: str) -> RegisteredScorer:
    try:
        return _REGISTRY[key]
    except KeyError as exc:
        known = ", ".join(sorted(_REGISTRY))
        raise KeyError(f"Unknown scorer '{key}'. Registered scorers: {known}.") from exc


def has_scorer(key: str) -> bool:
    return key in _REGISTRY


def registered_scorer_keys() -> tuple[str, ...]:
    return tuple(_REGISTRY.keys())
