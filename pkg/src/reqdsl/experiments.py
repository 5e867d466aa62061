"""End-to-end translation experiments and report generation.

An experiment fixes a rule, a support set, a test set, a backend, and a
grading mode; running it yields one graded translation per test requirement
plus a class histogram shaped like the evaluation tables.
"""

from __future__ import annotations

import enum
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .corpus import CorpusStore, load_bundled_corpus
from .fewshot import (
    BackendError,
    BackendKind,
    GenerationBackendConfig,
    TranslationResult,
    build_prompt,
    generate,
    make_backend,
    prompt_hash,
)
from .grading import GradeClass, GradedTranslation, grade_auto, ingest_labels
from .lexicons import Lexicons, default_lexicons
from .types import Requirement, RuleKind, normalize_whitespace

_FIXTURES_PACKAGE = "reqdsl.fixtures"


class ExperimentError(Exception):
    pass


class DisjointnessError(ExperimentError):
    """Test requirements must be absent from the support set."""


class MissingLabelError(ExperimentError):
    pass


class GradingMode(enum.Enum):
    AUTO = "auto"
    LABELS = "labels"
    BOTH = "both"


@dataclass(frozen=True)
class ExperimentSpec:
    rule: RuleKind
    support_set_id: str
    test_set_id: str
    backend: GenerationBackendConfig
    grading: GradingMode = GradingMode.LABELS
    variant: str | None = None  # distinguishes same-size support variants

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentSpec":
        backend_payload = dict(payload.get("backend", {"kind": "replay"}))
        kind = BackendKind(backend_payload.pop("kind", "replay"))
        if "stop_sequences" in backend_payload:
            backend_payload["stop_sequences"] = tuple(backend_payload["stop_sequences"])
        if "decoding_params" in backend_payload:
            backend_payload["decoding_params"] = tuple(
                sorted(dict(backend_payload["decoding_params"]).items())
            )
        return cls(
            rule=RuleKind.parse(str(payload["rule"])),
            support_set_id=str(payload["support_set_id"]),
            test_set_id=str(payload["test_set_id"]),
            backend=GenerationBackendConfig(kind=kind, **backend_payload),
            grading=GradingMode(payload.get("grading", "labels")),
            variant=payload.get("variant"),
        )


def validate_experiment(spec: ExperimentSpec, corpus: CorpusStore) -> None:
    """Resolve references and enforce support/test disjointness."""
    support_set = corpus.get_support_set(spec.support_set_id)
    if support_set is None:
        raise ExperimentError(f"unknown support set {spec.support_set_id!r}")
    if support_set.rule is not spec.rule:
        raise ExperimentError(
            f"support set {spec.support_set_id!r} targets {support_set.rule.value}"
        )
    if spec.test_set_id not in corpus.requirement_sets:
        raise ExperimentError(f"unknown test set {spec.test_set_id!r}")
    support_inputs = {normalize_whitespace(p.input) for p in support_set.pairs}
    for requirement in corpus.requirement_sets[spec.test_set_id]:
        if normalize_whitespace(requirement.text) in support_inputs:
            raise DisjointnessError(
                f"test requirement {requirement.id!r} appears in support set "
                f"{spec.support_set_id!r}"
            )


@dataclass(frozen=True)
class ClassHistogram:
    """Counts per quality class; ``failed`` tracks backend-errored rows."""

    counts: tuple[int, int, int, int, int, int]
    failed: int = 0

    @property
    def total(self) -> int:
        return sum(self.counts)

    @classmethod
    def from_grades(cls, grades: list[GradeClass], failed: int = 0) -> "ClassHistogram":
        counts = [0] * 6
        for grade in grades:
            counts[grade.value - 1] += 1
        return cls(counts=tuple(counts), failed=failed)


@dataclass
class ExperimentRow:
    requirement: Requirement
    result: TranslationResult | None = None
    human: GradedTranslation | None = None
    auto: GradedTranslation | None = None
    error: str | None = None

    def authoritative(self, grading: GradingMode) -> GradedTranslation | None:
        if grading is GradingMode.AUTO:
            return self.auto
        if self.human is not None:
            return self.human
        return self.auto if grading is GradingMode.BOTH else None


@dataclass
class ExperimentOutcome:
    spec: ExperimentSpec
    support_size: int
    rows: list[ExperimentRow]
    histogram: ClassHistogram
    agreement: float | None = None

    @property
    def graded(self) -> list[GradedTranslation]:
        out = []
        for row in self.rows:
            authoritative = row.authoritative(self.spec.grading)
            if authoritative is not None:
                out.append(authoritative)
        return out


def _max_parallel() -> int:
    raw = os.environ.get("REQDSL_MAX_PARALLEL", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 4


def run_experiment(
    spec: ExperimentSpec,
    corpus: CorpusStore | None = None,
    *,
    lexicons: Lexicons | None = None,
) -> ExperimentOutcome:
    """Translate and grade every test requirement; errors land in ``failed``."""
    corpus = corpus or load_bundled_corpus()
    lex = lexicons or default_lexicons()
    validate_experiment(spec, corpus)

    support_set = corpus.support_sets[spec.support_set_id]
    requirements = corpus.requirement_sets[spec.test_set_id]
    backend = make_backend(
        spec.backend, recordings=corpus.replay_outputs(), lexicons=lex
    )

    def run_row(requirement: Requirement) -> ExperimentRow:
        row = ExperimentRow(requirement=requirement)
        prompt = build_prompt(support_set, requirement.text)
        try:
            output = generate(
                backend,
                prompt,
                support_set_id=support_set.id,
                stop_sequences=spec.backend.stop_sequences,
            )
        except BackendError as error:
            row.error = str(error)
            return row
        row.result = TranslationResult(
            source=requirement,
            rule=spec.rule,
            output=output,
            backend_kind=spec.backend.kind.value,
            support_set_id=support_set.id,
            prompt_hash=prompt_hash(prompt),
        )
        if spec.grading in (GradingMode.AUTO, GradingMode.BOTH):
            row.auto = grade_auto(
                requirement.text, output, spec.rule, lex, requirement_id=requirement.id
            )
        if spec.grading in (GradingMode.LABELS, GradingMode.BOTH):
            record = corpus.find_recording(support_set.id, requirement.text)
            if record is not None and record.human_class is not None:
                row.human = ingest_labels(
                    [
                        {
                            "support_set_id": record.support_set_id,
                            "query": record.query,
                            "output": output,
                            "human_class": record.human_class,
                            "rule": spec.rule.value,
                            "id": requirement.id,
                        }
                    ]
                )[0]
            elif spec.grading is GradingMode.LABELS:
                raise MissingLabelError(
                    f"no human label for {requirement.id!r} under "
                    f"{support_set.id!r}"
                )
        return row

    workers = _max_parallel() if spec.backend.kind is BackendKind.HTTP else 1
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_row, requirements))
    else:
        rows = [run_row(requirement) for requirement in requirements]

    grades = []
    failed = 0
    for row in rows:
        if row.error is not None:
            failed += 1
            continue
        authoritative = row.authoritative(spec.grading)
        if authoritative is not None:
            grades.append(authoritative.grade)

    agreement = None
    if spec.grading is GradingMode.BOTH:
        pairs = [(r.human, r.auto) for r in rows if r.human and r.auto]
        if pairs:
            agreement = sum(1 for h, a in pairs if h.grade == a.grade) / len(pairs)

    return ExperimentOutcome(
        spec=spec,
        support_size=len(support_set.pairs),
        rows=rows,
        histogram=ClassHistogram.from_grades(grades, failed=failed),
        agreement=agreement,
    )


# ---------------------------------------------------------------------------
# reports

_RULE_HEADINGS = {
    RuleKind.IF_THEN: "Translation results for the If-Then structure",
    RuleKind.MODAL_VERB: "Translation results for the modal-verb structure",
    RuleKind.EXPRESSION: "Translation results for the logical-formula structure",
}


def _size_label(outcome: ExperimentOutcome) -> str:
    if outcome.spec.variant:
        return f"{outcome.support_size} ({outcome.spec.variant})"
    return str(outcome.support_size)


def emit_report(outcomes: list[ExperimentOutcome], format: str = "table_text") -> bytes:
    """Render experiment outcomes grouped by rule.

    ``table_text`` mirrors the evaluation-table layout (classes 1..6 and a
    total column, one row per support-set size); ``machine`` emits one JSON
    line per row with a stable field order.
    """
    if format == "machine":
        lines = []
        for outcome in outcomes:
            payload: dict[str, object] = {
                "rule": outcome.spec.rule.value,
                "support_size": outcome.support_size,
            }
            if outcome.spec.variant:
                payload["variant"] = outcome.spec.variant
            payload["class_counts"] = list(outcome.histogram.counts)
            payload["total"] = outcome.histogram.total
            if outcome.agreement is not None:
                payload["agreement"] = round(outcome.agreement, 4)
            if outcome.histogram.failed:
                payload["failed"] = outcome.histogram.failed
            lines.append(json.dumps(payload, ensure_ascii=False))
        return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")

    if format != "table_text":
        raise ValueError(f"unknown report format: {format!r}")

    show_agreement = any(o.agreement is not None for o in outcomes)
    show_failed = any(o.histogram.failed for o in outcomes)
    header = ["# of Training Set"] + [f"Class {i}" for i in range(1, 7)] + ["total"]
    if show_failed:
        header.append("failed")
    if show_agreement:
        header.append("agreement")

    sections: dict[RuleKind, list[list[str]]] = {}
    for outcome in outcomes:
        row = [_size_label(outcome)] + [str(c) for c in outcome.histogram.counts]
        row.append(str(outcome.histogram.total))
        if show_failed:
            row.append(str(outcome.histogram.failed))
        if show_agreement:
            row.append("" if outcome.agreement is None else f"{outcome.agreement:.2f}")
        sections.setdefault(outcome.spec.rule, []).append(row)

    all_rows = [header] + [r for rows in sections.values() for r in rows]
    widths = [
        max(len(row[i]) for row in all_rows if i < len(row))
        for i in range(len(header))
    ]

    def render_row(cells: list[str]) -> str:
        return " | ".join(cell.ljust(widths[i]) for i, cell in enumerate(cells)).rstrip()

    lines = [render_row(header), "-+-".join("-" * w for w in widths)]
    for rule in (RuleKind.IF_THEN, RuleKind.MODAL_VERB, RuleKind.EXPRESSION):
        if rule not in sections:
            continue
        lines.append(f"-- {_RULE_HEADINGS[rule]} --")
        lines.extend(render_row(row) for row in sections[rule])
    return ("\n".join(lines) + "\n").encode("utf-8")


def bundled_experiment_specs() -> list[ExperimentSpec]:
    """The ten replay experiments shipped with the bundled corpus."""
    raw = (
        resources.files(_FIXTURES_PACKAGE)
        .joinpath("experiments/replay_suite.json")
        .read_text(encoding="utf-8")
    )
    return [ExperimentSpec.from_dict(entry) for entry in json.loads(raw)]


def run_bundled_experiments(
    corpus: CorpusStore | None = None,
    grading: GradingMode = GradingMode.LABELS,
) -> list[ExperimentOutcome]:
    corpus = corpus or load_bundled_corpus()
    outcomes = []
    for spec in bundled_experiment_specs():
        if grading is not spec.grading:
            spec = ExperimentSpec(
                rule=spec.rule,
                support_set_id=spec.support_set_id,
                test_set_id=spec.test_set_id,
                backend=spec.backend,
                grading=grading,
                variant=spec.variant,
            )
        outcomes.append(run_experiment(spec, corpus))
    return outcomes


def load_experiment_specs(path: Path | str) -> list[ExperimentSpec]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(payload, dict):
        payload = [payload]
    return [ExperimentSpec.from_dict(entry) for entry in payload]
