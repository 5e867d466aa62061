"""Six-class quality grading of translations.

The scale is categorical, not ordinal: class 2 is not "better" than
class 3, so no ordering is exposed.  The automatic grader judges the
syntactic dimension exactly (it shares the rule checks) and the semantic
dimension heuristically; human labels always take precedence in reports.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import constraints as constraint_engine
from . import dsl
from .fewshot import TranslationResult
from .lexicons import Lexicons, default_lexicons
from .types import (
    Requirement,
    RuleKind,
    Severity,
    Source,
    aggregate_severity,
    light_stem,
    normalize_whitespace,
    tokenize,
)

# content-word recall below this counts as semantic loss; tunable heuristic
DEFAULT_COVERAGE_THRESHOLD = 0.85

_KEYWORD_TOKENS = {
    "if", "then", "must", "less", "greater", "equal", "or", "than", "dsl",
    "when", "once", "while",
    # modal/auxiliary verbs are exactly what the rules rewrite, so their
    # presence or absence says nothing about content fidelity
    "will", "shall", "should", "can", "could", "may", "might",
    "has", "have", "had", "does", "do", "did",
}
_NEGATION_TOKENS = {"not", "never", "cannot"}
_PARENTHETICAL_RE = re.compile(r"\(([^()]*)\)")


class GradeClass(enum.Enum):
    PERFECT = 1
    MINOR_SYNTAX = 2
    SEMANTIC_LOSS = 3
    MINOR_SYNTAX_AND_LOSS = 4
    RULE_NOT_IMPLEMENTED = 5
    SEMANTICALLY_WRONG = 6

    @classmethod
    def from_int(cls, value: int) -> "GradeClass":
        for grade in cls:
            if grade.value == value:
                return grade
        raise UnknownClassError(value)


class GradeProvenance(enum.Enum):
    HUMAN_LABEL = "human_label"
    AUTO = "auto"


class SyntaxLevel(enum.Enum):
    OK = "ok"
    MINOR = "minor"
    GRAVE = "grave"


class SemanticsLevel(enum.Enum):
    OK = "ok"
    LOSS = "loss"
    WRONG = "wrong"


def combine_levels(syntax: SyntaxLevel, semantics: SemanticsLevel) -> GradeClass:
    """Total mapping from the 3x3 evidence matrix to the six classes.

    Semantic wrongness takes precedence over grave syntax.
    """
    if semantics is SemanticsLevel.WRONG:
        return GradeClass.SEMANTICALLY_WRONG
    if syntax is SyntaxLevel.GRAVE:
        return GradeClass.RULE_NOT_IMPLEMENTED
    if syntax is SyntaxLevel.OK:
        return (
            GradeClass.PERFECT
            if semantics is SemanticsLevel.OK
            else GradeClass.SEMANTIC_LOSS
        )
    return (
        GradeClass.MINOR_SYNTAX
        if semantics is SemanticsLevel.OK
        else GradeClass.MINOR_SYNTAX_AND_LOSS
    )


@dataclass(frozen=True)
class GradedTranslation:
    result: TranslationResult
    grade: GradeClass
    provenance: GradeProvenance
    evidence: tuple[str, ...] = ()


class UnknownClassError(ValueError):
    def __init__(self, value: object):
        super().__init__(f"quality class must be 1..6, got {value!r}")
        self.value = value


class DanglingReferenceError(ValueError):
    pass


def _rule_severity(text: str, rule: RuleKind, lex: Lexicons) -> Severity | None:
    if rule is RuleKind.IF_THEN:
        return aggregate_severity(dsl.check_if_then(text, lex))
    if rule is RuleKind.MODAL_VERB:
        return aggregate_severity(dsl.check_modal(text, lex))
    return aggregate_severity(dsl.check_expression_keywords(text, lex))


def _syntax_level(source: str, output: str, rule: RuleKind, lex: Lexicons):
    evidence: list[str] = []
    source_severity = _rule_severity(source, rule, lex)
    if normalize_whitespace(output) == normalize_whitespace(source):
        if source_severity in (Severity.VIOLATION, None):
            evidence.append("identity mapping on a non-conformant input")
            return SyntaxLevel.GRAVE, evidence

    severity = _rule_severity(output, rule, lex)
    if severity is Severity.CONFORMANT:
        return SyntaxLevel.OK, evidence
    if severity is Severity.MINOR:
        evidence.append("near-miss syntax (miscased/missing token)")
        return SyntaxLevel.MINOR, evidence
    evidence.append("rule keywords absent or malformed")
    return SyntaxLevel.GRAVE, evidence


def _content_tokens(text: str, lex: Lexicons) -> set[str]:
    tokens = set()
    for word, _, _ in tokenize(text):
        lowered = word.lower()
        if len(lowered) < 2 or lowered.isdigit():
            continue
        stemmed = light_stem(lowered)
        if {lowered, stemmed} & (set(lex.stopwords) | _KEYWORD_TOKENS):
            continue
        if lowered in lex.weak_modals:
            continue
        tokens.add(stemmed)
    return tokens


def _negation_parity(text: str, lex: Lexicons) -> int:
    """Negations folded into a comparison operator don't count.

    "must not be louder than 50dB" and "must be LESS OR EQUAL 50dB" carry
    the same polarity; the folding already moved the 'not' into the operator.
    """
    folded_spans = [
        (m.start, m.end)
        for m in constraint_engine.scan_comparators(text, lex)
        if m.negated
    ]
    count = 0
    for word, start, _end in tokenize(text):
        lowered = word.lower()
        if lowered in _NEGATION_TOKENS or lowered.endswith("n't"):
            if any(s <= start < e for s, e in folded_spans):
                continue
            count += 1
    return count % 2


def _numbers(text: str) -> list[str]:
    return re.findall(r"\d+(?:\.\d+)?", text)


def _paired_ops(source: str, output: str, lex: Lexicons):
    source_constraints = constraint_engine.extract(source, lex).constraints
    output_constraints = constraint_engine.extract(output, lex).constraints
    if not source_constraints or not output_constraints:
        return None
    for s in source_constraints:
        for o in output_constraints:
            if s.variable == o.variable:
                return s.op, o.op
    return source_constraints[0].op, output_constraints[0].op


def _semantics_level(
    source: str,
    output: str,
    lex: Lexicons,
    coverage_threshold: float,
):
    evidence: list[str] = []

    if _negation_parity(source, lex) != _negation_parity(output, lex):
        evidence.append("negation parity differs")
        return SemanticsLevel.WRONG, evidence

    source_numbers = _numbers(source)
    output_numbers = _numbers(output)
    remaining = list(output_numbers)
    for number in source_numbers:
        if number in remaining:
            remaining.remove(number)
        else:
            evidence.append(f"numeric token {number} dropped or altered")
            return SemanticsLevel.WRONG, evidence

    ops = _paired_ops(source, output, lex)
    if ops is not None:
        source_op, output_op = ops
        if source_op.direction * output_op.direction == -1:
            evidence.append(
                f"comparison direction flips ({source_op.symbol} vs {output_op.symbol})"
            )
            return SemanticsLevel.WRONG, evidence
        if source_op is not output_op:
            evidence.append(
                f"comparison strictness changes ({source_op.symbol} vs {output_op.symbol})"
            )
            return SemanticsLevel.LOSS, evidence

    output_tokens = _content_tokens(output, lex)
    for parenthetical in _PARENTHETICAL_RE.findall(source):
        needed = _content_tokens(parenthetical, lex)
        if needed and not needed.issubset(output_tokens):
            evidence.append(f"parenthetical ({parenthetical}) dropped")
            return SemanticsLevel.LOSS, evidence

    source_tokens = _content_tokens(source, lex)
    if source_tokens:
        recall = len(source_tokens & output_tokens) / len(source_tokens)
        if recall < coverage_threshold:
            evidence.append(f"content-word recall {recall:.2f} below threshold")
            return SemanticsLevel.LOSS, evidence

    return SemanticsLevel.OK, evidence


def grade_auto(
    source: str,
    output: str,
    rule: RuleKind,
    lexicons: Lexicons | None = None,
    *,
    coverage_threshold: float = DEFAULT_COVERAGE_THRESHOLD,
    requirement_id: str = "adhoc",
) -> GradedTranslation:
    """Grade one translation automatically; evidence lists the checks that fired."""
    lex = lexicons or default_lexicons()
    syntax, syntax_evidence = _syntax_level(source, output, rule, lex)
    semantics, semantics_evidence = _semantics_level(
        source, output, lex, coverage_threshold
    )
    grade = combine_levels(syntax, semantics)
    result = TranslationResult(
        source=Requirement(id=requirement_id, text=source, source=Source.LEGACY),
        rule=rule,
        output=output,
        backend_kind="none",
        support_set_id="",
        prompt_hash="",
    )
    evidence = (
        f"syntax={syntax.value}",
        f"semantics={semantics.value}",
        *syntax_evidence,
        *semantics_evidence,
    )
    return GradedTranslation(
        result=result,
        grade=grade,
        provenance=GradeProvenance.AUTO,
        evidence=evidence,
    )


def ingest_labels(
    records: Iterable[Mapping[str, object]],
    *,
    rules_by_set: Mapping[str, RuleKind] | None = None,
) -> list[GradedTranslation]:
    """Wrap human-labeled records as ground-truth graded translations.

    Records carry inline source/output plus the 1..6 label; the rule comes
    from the record itself or from the owning support set.
    """
    graded: list[GradedTranslation] = []
    for index, record in enumerate(records):
        label = record.get("human_class")
        if not isinstance(label, int) or isinstance(label, bool):
            raise UnknownClassError(label)
        grade = GradeClass.from_int(label)

        rule: RuleKind | None = None
        if "rule" in record:
            rule = RuleKind.parse(str(record["rule"]))
        elif rules_by_set is not None:
            set_id = str(record.get("support_set_id", ""))
            rule = rules_by_set.get(set_id)
        if rule is None:
            raise DanglingReferenceError(
                f"record {index} references no known rule or support set"
            )

        query = str(record.get("query", ""))
        output = str(record.get("output", ""))
        if not query:
            raise DanglingReferenceError(f"record {index} carries no query text")
        result = TranslationResult(
            source=Requirement(id=str(record.get("id", f"label-{index}")), text=query),
            rule=rule,
            output=output,
            backend_kind="replay",
            support_set_id=str(record.get("support_set_id", "")),
            prompt_hash="",
        )
        graded.append(
            GradedTranslation(
                result=result,
                grade=grade,
                provenance=GradeProvenance.HUMAN_LABEL,
                evidence=("human label",),
            )
        )
    return graded
