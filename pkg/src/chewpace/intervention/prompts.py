"""Prompt library loading and validation.

Library files are UTF-8, tab-separated, with a mandatory header row::

    id<TAB>family<TAB>length_class<TAB>nominal_duration_s<TAB>text

Blank lines and lines starting with ``#`` are ignored. ``text`` may not
contain tabs. Control-theory progress texts must contain the
``{remaining_chews}`` placeholder.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from importlib.resources import files
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..core.errors import MissingFamilyCoverageError, PromptLibraryParseError
from ..core.events import IN_MEAL_FAMILIES, LengthClass, PromptFamily

logger = logging.getLogger(__name__)

REMAINING_CHEWS_PLACEHOLDER = "{remaining_chews}"
LIBRARY_COLUMNS = ("id", "family", "length_class", "nominal_duration_s", "text")

LENGTH_BANDS_S: dict[LengthClass, tuple[float, float]] = {
    LengthClass.short: (1.0, 2.0),
    LengthClass.medium: (2.0, 3.0),
    LengthClass.long: (5.0, 9.0),
}


class Prompt(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    id: str = Field(min_length=1)
    family: PromptFamily
    length_class: LengthClass
    nominal_duration_s: float = Field(gt=0)
    text: str = Field(min_length=1)

    @model_validator(mode="after")
    def _check_template(self) -> Prompt:
        low, high = LENGTH_BANDS_S[self.length_class]
        if not low <= self.nominal_duration_s <= high:
            raise ValueError(
                f"nominal_duration_s={self.nominal_duration_s} outside the "
                f"{self.length_class.value} band [{low}, {high}] s"
            )
        if (
            self.family == PromptFamily.control_theory_progress
            and REMAINING_CHEWS_PLACEHOLDER not in self.text
        ):
            raise ValueError(
                f"control_theory_progress text must contain {REMAINING_CHEWS_PLACEHOLDER}"
            )
        return self

    def render(self, remaining_chews: int | None = None) -> str:
        if REMAINING_CHEWS_PLACEHOLDER not in self.text:
            return self.text
        value = "" if remaining_chews is None else str(remaining_chews)
        return self.text.replace(REMAINING_CHEWS_PLACEHOLDER, value)


@dataclass(frozen=True)
class PromptLibrary:
    prompts: tuple[Prompt, ...]
    source: str = "<memory>"

    def select(self, family: PromptFamily, length_class: LengthClass | None = None) -> tuple[Prompt, ...]:
        return tuple(
            prompt
            for prompt in self.prompts
            if prompt.family == family
            and (length_class is None or prompt.length_class == length_class)
        )

    @property
    def pre_meal(self) -> tuple[Prompt, ...]:
        return self.select(PromptFamily.pre_meal_goal)

    def __len__(self) -> int:
        return len(self.prompts)


def coverage_gaps(prompts: Iterable[Prompt]) -> list[str]:
    present = {(prompt.family, prompt.length_class) for prompt in prompts}
    gaps = [
        f"{family.value}/{length.value}"
        for family in IN_MEAL_FAMILIES
        for length in LengthClass
        if (family, length) not in present
    ]
    if not any(family == PromptFamily.pre_meal_goal for family, _ in present):
        gaps.append(f"{PromptFamily.pre_meal_goal.value}/any")
    return gaps


def build_library(prompts: Iterable[Prompt], *, source: str = "<memory>") -> PromptLibrary:
    items = tuple(prompts)
    gaps = coverage_gaps(items)
    if gaps:
        raise MissingFamilyCoverageError(
            f"{source}: prompt library lacks {', '.join(gaps)}"
        )
    return PromptLibrary(prompts=items, source=source)


def _parse_lines(lines: Iterable[str], source: Path | str) -> list[Prompt]:
    prompts: list[Prompt] = []
    seen: set[str] = set()
    header_seen = False
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if not header_seen:
            if tuple(field.strip() for field in fields) != LIBRARY_COLUMNS:
                raise PromptLibraryParseError(
                    f"expected header {'<TAB>'.join(LIBRARY_COLUMNS)}",
                    path=source,
                    line=line_no,
                )
            header_seen = True
            continue
        if len(fields) != len(LIBRARY_COLUMNS):
            raise PromptLibraryParseError(
                f"expected {len(LIBRARY_COLUMNS)} tab-separated fields, got {len(fields)}",
                path=source,
                line=line_no,
            )
        record = dict(zip(LIBRARY_COLUMNS, (field.strip() for field in fields)))
        try:
            prompt = Prompt.model_validate(record)
        except ValidationError as exc:
            problems = "; ".join(
                f"{'.'.join(str(part) for part in err['loc']) or 'prompt'}: {err['msg']}"
                for err in exc.errors()
            )
            raise PromptLibraryParseError(problems, path=source, line=line_no) from exc
        if prompt.id in seen:
            raise PromptLibraryParseError(
                f"duplicate prompt id '{prompt.id}'", path=source, line=line_no
            )
        seen.add(prompt.id)
        prompts.append(prompt)
    if not header_seen:
        raise PromptLibraryParseError("missing header row", path=source)
    return prompts


def load_prompt_library(path: str | Path | None = None) -> PromptLibrary:
    """Load and validate a library file; ``None`` loads the bundled default."""
    if path is None:
        resource = files("chewpace.intervention").joinpath("data").joinpath("default_prompts.tsv")
        text = resource.read_text(encoding="utf-8")
        source = "default_prompts.tsv"
        prompts = _parse_lines(text.splitlines(), source)
    else:
        source_path = Path(path)
        try:
            text = source_path.read_text(encoding="utf-8")
        except OSError as exc:
            raise PromptLibraryParseError(
                f"cannot read file ({exc.strerror})", path=source_path
            ) from exc
        source = str(source_path)
        prompts = _parse_lines(text.splitlines(), source_path)
    library = build_library(prompts, source=source)
    logger.info("loaded %d prompts from %s", len(library), source)
    return library


def default_prompt_library() -> PromptLibrary:
    return load_prompt_library(None)
