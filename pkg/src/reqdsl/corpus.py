"""On-disk corpus store: requirements, support sets, recorded outputs.

The store is a directory of line-record files plus an index; loading then
saving is lossless.  All record files are UTF-8 JSON lines, support sets
additionally carry a small header file with id, rule, and provenance.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .fewshot import SupportPair, SupportSet, SupportSetProvenance, validate_support_set
from .lexicons import Lexicons, default_lexicons
from .types import Requirement, RuleKind, Source, normalize_whitespace

_FIXTURES_PACKAGE = "reqdsl.fixtures"


class CorpusError(Exception):
    pass


class MalformedRecordError(CorpusError):
    def __init__(self, file: str, line: int, message: str):
        super().__init__(f"{file}:{line}: {message}")
        self.file = file
        self.line = line


class DuplicateIdError(CorpusError):
    def __init__(self, kind: str, record_id: str):
        super().__init__(f"duplicate {kind} id: {record_id!r}")
        self.kind = kind
        self.record_id = record_id


@dataclass(frozen=True)
class ReplayRecord:
    """One recorded model output, optionally with its human quality label."""

    support_set_id: str
    query: str
    output: str
    human_class: int | None = None


@dataclass
class CorpusStore:
    """In-memory view of a corpus directory.

    Mutations go through the add_* methods so that id uniqueness holds; a
    single writer lock keeps concurrent service handlers consistent.
    """

    requirement_sets: dict[str, list[Requirement]] = field(default_factory=dict)
    support_sets: dict[str, SupportSet] = field(default_factory=dict)
    recordings: list[ReplayRecord] = field(default_factory=list)

    def __post_init__(self) -> None:
        self._lock = threading.RLock()

    # -- requirements -----------------------------------------------------

    def add_requirement_set(self, set_id: str, requirements: list[Requirement]) -> None:
        with self._lock:
            if set_id in self.requirement_sets:
                raise DuplicateIdError("requirement set", set_id)
            seen: set[str] = set()
            for req in requirements:
                if req.id in seen:
                    raise DuplicateIdError("requirement", req.id)
                seen.add(req.id)
            self.requirement_sets[set_id] = list(requirements)

    def add_requirement(self, set_id: str, requirement: Requirement) -> None:
        with self._lock:
            bucket = self.requirement_sets.setdefault(set_id, [])
            if any(r.id == requirement.id for r in bucket):
                raise DuplicateIdError("requirement", requirement.id)
            bucket.append(requirement)

    def get_requirement(self, requirement_id: str) -> Requirement | None:
        for bucket in self.requirement_sets.values():
            for req in bucket:
                if req.id == requirement_id:
                    return req
        return None

    def all_requirements(self) -> list[Requirement]:
        return [r for bucket in self.requirement_sets.values() for r in bucket]

    # -- support sets ------------------------------------------------------

    def add_support_set(self, support_set: SupportSet) -> None:
        with self._lock:
            if support_set.id in self.support_sets:
                raise DuplicateIdError("support set", support_set.id)
            self.support_sets[support_set.id] = support_set

    def get_support_set(self, set_id: str) -> SupportSet | None:
        return self.support_sets.get(set_id)

    def rules_by_set(self) -> dict[str, RuleKind]:
        return {set_id: s.rule for set_id, s in self.support_sets.items()}

    # -- recordings ----------------------------------------------------------

    def add_recording(self, record: ReplayRecord) -> None:
        with self._lock:
            self.recordings.append(record)

    def replay_outputs(self) -> dict[tuple[str, str], str]:
        return {
            (r.support_set_id, normalize_whitespace(r.query)): r.output
            for r in self.recordings
        }

    def labeled_records(self, support_set_id: str | None = None) -> list[ReplayRecord]:
        return [
            r
            for r in self.recordings
            if r.human_class is not None
            and (support_set_id is None or r.support_set_id == support_set_id)
        ]

    def find_recording(self, support_set_id: str, query: str) -> ReplayRecord | None:
        wanted = normalize_whitespace(query)
        for record in self.recordings:
            if (
                record.support_set_id == support_set_id
                and normalize_whitespace(record.query) == wanted
            ):
                return record
        return None


def _read_jsonl(path: Path) -> list[tuple[int, dict]]:
    rows: list[tuple[int, dict]] = []
    for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecordError(str(path), number, f"invalid record: {exc}") from exc
        if not isinstance(payload, dict):
            raise MalformedRecordError(str(path), number, "record is not a map")
        rows.append((number, payload))
    return rows


def _require(payload: dict, key: str, path: Path, line: int) -> object:
    if key not in payload:
        raise MalformedRecordError(str(path), line, f"missing required field {key!r}")
    return payload[key]


def _load_requirements(path: Path) -> list[Requirement]:
    requirements = []
    for line, payload in _read_jsonl(path):
        requirements.append(
            Requirement(
                id=str(_require(payload, "id", path, line)),
                text=str(_require(payload, "text", path, line)),
                source=Source(payload.get("source", "legacy")),
                tags=tuple(payload.get("tags", ())),
            )
        )
    return requirements


def _load_support_set(base: Path, set_id: str, lexicons: Lexicons) -> SupportSet:
    meta_path = base / f"{set_id}.meta.json"
    pairs_path = base / f"{set_id}.pairs.jsonl"
    try:
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedRecordError(str(meta_path), 1, str(exc)) from exc
    pairs = []
    for line, payload in _read_jsonl(pairs_path):
        pairs.append(
            SupportPair(
                input=str(_require(payload, "input", pairs_path, line)),
                dsl=str(_require(payload, "dsl", pairs_path, line)),
            )
        )
    support_set = SupportSet(
        id=str(meta.get("id", set_id)),
        rule=RuleKind.parse(str(meta["rule"])),
        pairs=tuple(pairs),
        provenance=SupportSetProvenance(meta.get("provenance", "user")),
    )
    validate_support_set(support_set, lexicons)
    return support_set


def _load_recordings(path: Path) -> list[ReplayRecord]:
    records = []
    for line, payload in _read_jsonl(path):
        human_class = payload.get("human_class")
        if human_class is not None and not isinstance(human_class, int):
            raise MalformedRecordError(str(path), line, "human_class must be an integer")
        records.append(
            ReplayRecord(
                support_set_id=str(_require(payload, "support_set_id", path, line)),
                query=str(_require(payload, "query", path, line)),
                output=str(_require(payload, "output", path, line)),
                human_class=human_class,
            )
        )
    return records


def load_corpus(path: Path | str, lexicons: Lexicons | None = None) -> CorpusStore:
    """Load a corpus directory; ids must be unique per record kind."""
    root = Path(path)
    lex = lexicons or default_lexicons()
    index_path = root / "index.json"
    if not index_path.exists():
        raise CorpusError(f"no index.json under {root}")
    index = json.loads(index_path.read_text(encoding="utf-8"))

    store = CorpusStore()
    for rel in index.get("requirement_sets", ()):
        file_path = root / rel
        store.add_requirement_set(file_path.name.removesuffix(".jsonl"), _load_requirements(file_path))
    for set_id in index.get("support_sets", ()):
        store.add_support_set(_load_support_set(root / "support_sets", set_id, lex))
    for rel in index.get("recordings", ()):
        for record in _load_recordings(root / rel):
            store.add_recording(record)
    return store


def _atomic_write(path: Path, content: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(content, encoding="utf-8")
    os.replace(tmp, path)


def save_corpus(store: CorpusStore, path: Path | str) -> None:
    """Write the store back out in the fixture file formats (atomically)."""
    root = Path(path)
    (root / "requirements").mkdir(parents=True, exist_ok=True)
    (root / "support_sets").mkdir(parents=True, exist_ok=True)
    (root / "recordings").mkdir(parents=True, exist_ok=True)

    requirement_files = []
    for set_id, requirements in store.requirement_sets.items():
        rel = f"requirements/{set_id}.jsonl"
        lines = [
            json.dumps(
                {
                    "id": r.id,
                    "text": r.text,
                    "source": r.source.value,
                    "tags": list(r.tags),
                },
                ensure_ascii=False,
            )
            for r in requirements
        ]
        _atomic_write(root / rel, "\n".join(lines) + ("\n" if lines else ""))
        requirement_files.append(rel)

    set_ids = []
    for set_id, support_set in store.support_sets.items():
        meta = {
            "id": support_set.id,
            "rule": support_set.rule.value,
            "provenance": support_set.provenance.value,
        }
        _atomic_write(
            root / "support_sets" / f"{set_id}.meta.json",
            json.dumps(meta, ensure_ascii=False, indent=2) + "\n",
        )
        pair_lines = [
            json.dumps({"input": p.input, "dsl": p.dsl}, ensure_ascii=False)
            for p in support_set.pairs
        ]
        _atomic_write(
            root / "support_sets" / f"{set_id}.pairs.jsonl",
            "\n".join(pair_lines) + "\n",
        )
        set_ids.append(set_id)

    recording_files = []
    if store.recordings:
        rel = "recordings/translations.jsonl"
        lines = []
        for record in store.recordings:
            payload: dict[str, object] = {
                "support_set_id": record.support_set_id,
                "query": record.query,
                "output": record.output,
            }
            if record.human_class is not None:
                payload["human_class"] = record.human_class
            lines.append(json.dumps(payload, ensure_ascii=False))
        _atomic_write(root / rel, "\n".join(lines) + "\n")
        recording_files.append(rel)

    index = {
        "version": 1,
        "requirement_sets": requirement_files,
        "support_sets": set_ids,
        "recordings": recording_files,
    }
    _atomic_write(root / "index.json", json.dumps(index, indent=2) + "\n")


def bundled_corpus_path() -> Path:
    return Path(str(resources.files(_FIXTURES_PACKAGE).joinpath("corpus")))


def load_bundled_corpus(lexicons: Lexicons | None = None) -> CorpusStore:
    """The corpus of bundled evaluation fixtures shipped with the package."""
    return load_corpus(bundled_corpus_path(), lexicons)
