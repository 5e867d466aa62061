"""Configurable word lists and mapping tables backing the rule checks.

All tables live in UTF-8 text files so that a project can retarget the
toolkit to its own wording without touching code: one phrase per line for
plain lexicons, tab-separated ``phrase<TAB>target`` rows for mappings,
``#`` starts a comment either way.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .types import ComparisonOp

_CONFIG_PACKAGE = "reqdsl.fixtures.config"


def _read_lines(text: str) -> list[str]:
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append(line)
    return lines


def load_phrase_list(path: Path | str) -> tuple[str, ...]:
    return tuple(_read_lines(Path(path).read_text(encoding="utf-8")))


def load_table(path: Path | str) -> dict[str, str]:
    table: dict[str, str] = {}
    for line in _read_lines(Path(path).read_text(encoding="utf-8")):
        phrase, _, target = line.partition("\t")
        if not target:
            raise ValueError(f"{path}: expected 'phrase<TAB>target', got {line!r}")
        table[phrase.strip()] = target.strip()
    return table


def _bundled(name: str) -> str:
    return resources.files(_CONFIG_PACKAGE).joinpath(name).read_text(encoding="utf-8")


@dataclass(frozen=True)
class ComparatorEntry:
    """One natural-language comparator phrase and how to rewrite it."""

    phrase: str
    op: ComparisonOp
    verb_like: bool  # 'exceeds' needs a copula inserted; 'bigger than' does not


@dataclass(frozen=True)
class Lexicons:
    """All word lists used by the checks, loaded once and shared."""

    weak_modals: tuple[str, ...]
    trigger_markers: tuple[str, ...]
    auxiliaries: tuple[str, ...]
    comparators: tuple[ComparatorEntry, ...]
    units: tuple[str, ...]
    adjective_subjects: dict[str, str]
    superlatives: dict[str, ComparisonOp]
    determiners: tuple[str, ...] = ("the", "a", "an")
    possessors: tuple[str, ...] = ()
    stopwords: tuple[str, ...] = ()

    @property
    def units_longest_first(self) -> tuple[str, ...]:
        return tuple(sorted(self.units, key=len, reverse=True))

    def comparator_for_phrase(self, phrase: str) -> ComparatorEntry | None:
        needle = phrase.lower()
        for entry in self.comparators:
            if entry.phrase == needle:
                return entry
        return None


def _parse_comparators(text: str) -> tuple[ComparatorEntry, ...]:
    entries = []
    for line in _read_lines(text):
        parts = line.split("\t")
        if len(parts) < 2:
            raise ValueError(f"comparator table row needs phrase and keyword: {line!r}")
        phrase = parts[0].strip().lower()
        op = ComparisonOp.from_keyword(parts[1].strip())
        verb_like = len(parts) > 2 and parts[2].strip() == "verb"
        entries.append(ComparatorEntry(phrase, op, verb_like))
    # longest phrases first so 'no more than' wins over 'more than'
    return tuple(sorted(entries, key=lambda e: len(e.phrase), reverse=True))


def _parse_superlatives(text: str) -> dict[str, ComparisonOp]:
    return {
        phrase.lower(): ComparisonOp.from_keyword(target)
        for phrase, target in load_table_text(text).items()
    }


def load_table_text(text: str) -> dict[str, str]:
    table: dict[str, str] = {}
    for line in _read_lines(text):
        phrase, _, target = line.partition("\t")
        if not target:
            raise ValueError(f"expected 'phrase<TAB>target', got {line!r}")
        table[phrase.strip()] = target.strip()
    return table


@functools.lru_cache(maxsize=1)
def default_lexicons() -> Lexicons:
    """The bundled tables tuned for the automotive corpus."""
    return Lexicons(
        weak_modals=tuple(_read_lines(_bundled("weak_modals.txt"))),
        trigger_markers=tuple(_read_lines(_bundled("trigger_markers.txt"))),
        auxiliaries=tuple(_read_lines(_bundled("auxiliaries.txt"))),
        comparators=_parse_comparators(_bundled("comparators.tsv")),
        units=tuple(_read_lines(_bundled("units.txt"))),
        adjective_subjects={
            k.lower(): v for k, v in load_table_text(_bundled("adjective_subjects.tsv")).items()
        },
        superlatives=_parse_superlatives(_bundled("superlatives.tsv")),
        possessors=tuple(_read_lines(_bundled("possessors.txt"))),
        stopwords=tuple(_read_lines(_bundled("stopwords.txt"))),
    )


def lexicons_from_dir(directory: Path | str) -> Lexicons:
    """Load every table from ``directory``, falling back to bundled defaults."""
    directory = Path(directory)
    defaults = default_lexicons()

    def text_or_default(name: str) -> str:
        candidate = directory / name
        if candidate.exists():
            return candidate.read_text(encoding="utf-8")
        return _bundled(name)

    return Lexicons(
        weak_modals=tuple(_read_lines(text_or_default("weak_modals.txt"))),
        trigger_markers=tuple(_read_lines(text_or_default("trigger_markers.txt"))),
        auxiliaries=tuple(_read_lines(text_or_default("auxiliaries.txt"))),
        comparators=_parse_comparators(text_or_default("comparators.tsv")),
        units=tuple(_read_lines(text_or_default("units.txt"))),
        adjective_subjects={
            k.lower(): v
            for k, v in load_table_text(text_or_default("adjective_subjects.tsv")).items()
        },
        superlatives=_parse_superlatives(text_or_default("superlatives.tsv")),
        possessors=tuple(_read_lines(text_or_default("possessors.txt"))),
        stopwords=defaults.stopwords
        if not (directory / "stopwords.txt").exists()
        else tuple(_read_lines((directory / "stopwords.txt").read_text(encoding="utf-8"))),
    )
