"""Shared domain types for the requirements DSL toolkit.

Everything here is immutable. Values can be handed between threads freely;
none of the operations in the package mutate their inputs.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from decimal import Decimal


class RuleKind(enum.Enum):
    """The three formulation rules the DSL enforces."""

    IF_THEN = "if_then"
    MODAL_VERB = "modal_verb"
    EXPRESSION = "expression"

    @classmethod
    def parse(cls, value: str) -> "RuleKind":
        aliases = {
            "if_then": cls.IF_THEN,
            "ifthen": cls.IF_THEN,
            "if-then": cls.IF_THEN,
            "modal_verb": cls.MODAL_VERB,
            "modal": cls.MODAL_VERB,
            "expression": cls.EXPRESSION,
            "expressions": cls.EXPRESSION,
        }
        key = value.strip().lower()
        if key not in aliases:
            raise ValueError(f"unknown rule kind: {value!r}")
        return aliases[key]


class Source(enum.Enum):
    """Where a requirement sentence comes from."""

    LEGACY = "legacy"
    DSL = "dsl"
    GENERATED = "generated"


@dataclass(frozen=True)
class Requirement:
    """A single requirement sentence (possibly multi-sentence legacy text)."""

    id: str
    text: str
    source: Source = Source.LEGACY
    tags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError(f"requirement {self.id!r} has empty text")


class Severity(enum.Enum):
    CONFORMANT = "conformant"
    MINOR = "minor"
    VIOLATION = "violation"


@dataclass(frozen=True)
class Diagnostic:
    """One finding of a rule check, anchored to a half-open character span."""

    rule: RuleKind
    severity: Severity
    span: tuple[int, int]
    message: str
    fix_hint: str | None = None

    def __post_init__(self) -> None:
        start, end = self.span
        if start < 0 or end < start:
            raise ValueError(f"invalid span {self.span}")
        if self.severity is Severity.CONFORMANT and self.fix_hint is not None:
            raise ValueError("conformant diagnostics carry no fix hint")

    def shifted(self, offset: int) -> "Diagnostic":
        return Diagnostic(
            rule=self.rule,
            severity=self.severity,
            span=(self.span[0] + offset, self.span[1] + offset),
            message=self.message,
            fix_hint=self.fix_hint,
        )


@dataclass(frozen=True)
class IfThenReq:
    """Parsed trigger/action requirement.

    Equality deliberately ignores ``raw`` so that a canonical re-rendering
    round-trips to an equal value.
    """

    trigger: str
    action: str
    raw: str = field(compare=False, default="")

    def render(self) -> str:
        return f"IF: {self.trigger}, THEN: {self.action}."


class ParseFailureCode(enum.Enum):
    UNKNOWN_KEYWORD = "unknown_keyword"
    MISSING_KEYWORD = "missing_keyword"
    EMPTY_PART = "empty_part"
    STRAY_KEYWORD = "stray_keyword"


class IfThenParseError(ValueError):
    """Raised when a candidate DSL sentence does not parse as IF/THEN.

    ``code`` names the first unmet expectation; ``detail`` carries the
    offending keyword or the empty part's name.
    """

    def __init__(self, code: ParseFailureCode, detail: str, position: int = 0):
        super().__init__(f"{code.value}: {detail}")
        self.code = code
        self.detail = detail
        self.position = position


class ComparisonOp(enum.Enum):
    """Comparison operators with their two fixed surface forms."""

    LESS = ("LESS", "<")
    LESS_OR_EQUAL = ("LESS OR EQUAL", "<=")
    GREATER = ("GREATER", ">")
    GREATER_OR_EQUAL = ("GREATER OR EQUAL", ">=")
    EQUAL = ("EQUAL", "=")

    @property
    def keyword(self) -> str:
        return self.value[0]

    @property
    def symbol(self) -> str:
        return self.value[1]

    @property
    def direction(self) -> int:
        """-1 for the less family, +1 for the greater family, 0 for equality."""
        if self in (ComparisonOp.LESS, ComparisonOp.LESS_OR_EQUAL):
            return -1
        if self in (ComparisonOp.GREATER, ComparisonOp.GREATER_OR_EQUAL):
            return 1
        return 0

    def complement(self) -> "ComparisonOp":
        """Negation folding: 'not <op>' maps to the complement half-line.

        Equality has no complement in the DSL (there is no NOT-EQUAL
        keyword), so asking for it is an error.
        """
        table = {
            ComparisonOp.LESS: ComparisonOp.GREATER_OR_EQUAL,
            ComparisonOp.GREATER_OR_EQUAL: ComparisonOp.LESS,
            ComparisonOp.GREATER: ComparisonOp.LESS_OR_EQUAL,
            ComparisonOp.LESS_OR_EQUAL: ComparisonOp.GREATER,
        }
        if self not in table:
            raise ValueError("equality cannot be negated in the DSL")
        return table[self]

    @classmethod
    def from_keyword(cls, keyword: str) -> "ComparisonOp":
        for op in cls:
            if op.keyword == keyword:
                return op
        raise ValueError(f"unknown comparison keyword: {keyword!r}")

    @classmethod
    def from_symbol(cls, symbol: str) -> "ComparisonOp":
        for op in cls:
            if op.symbol == symbol:
                return op
        raise ValueError(f"unknown comparison symbol: {symbol!r}")


@dataclass(frozen=True)
class Constraint:
    """Normalized (variable, op, value, unit) tuple extracted from text."""

    variable: str
    op: ComparisonOp
    value: Decimal | str
    unit: str | None = None
    source_requirement: str | None = None
    span: tuple[int, int] = (0, 0)

    def __post_init__(self) -> None:
        if not self.variable:
            raise ValueError("constraint variable must be non-empty")
        if isinstance(self.value, int) and not isinstance(self.value, bool):
            object.__setattr__(self, "value", Decimal(self.value))
        if self.is_symbolic and self.op is not ComparisonOp.EQUAL:
            raise ValueError("symbolic values only combine with EQUAL")

    @property
    def is_symbolic(self) -> bool:
        return isinstance(self.value, str)

    @property
    def value_text(self) -> str:
        if self.is_symbolic:
            return str(self.value)
        return format_decimal(self.value)


def format_decimal(value: Decimal) -> str:
    """Render a Decimal without exponent notation or trailing zeros."""
    text = format(value.normalize(), "f")
    return text


class FindingKind(enum.Enum):
    CONTRADICTION = "contradiction"
    LINK = "link"
    UNIT_MISMATCH = "unit_mismatch"


@dataclass(frozen=True)
class ConsistencyFinding:
    """Cross-requirement relation between constraints on one variable."""

    kind: FindingKind
    variable: str
    constraints: tuple[Constraint, ...]
    explanation: str


@dataclass(frozen=True)
class DslDocumentAnalysis:
    """Aggregated per-rule diagnostics plus parsed fragments for one text."""

    requirement_id: str
    per_rule: dict[RuleKind, tuple[Diagnostic, ...]]
    if_then: IfThenReq | None
    constraints: tuple[Constraint, ...]
    classification: frozenset[RuleKind]
    notes: tuple[str, ...] = ()

    def severity(self, rule: RuleKind) -> Severity | None:
        return aggregate_severity(self.per_rule.get(rule, ()))

    def is_conformant(self, rule: RuleKind) -> bool:
        return self.severity(rule) is Severity.CONFORMANT


def aggregate_severity(diagnostics: tuple[Diagnostic, ...] | list[Diagnostic]) -> Severity | None:
    """Worst severity wins; no diagnostics means the rule was not applicable."""
    if not diagnostics:
        return None
    if any(d.severity is Severity.VIOLATION for d in diagnostics):
        return Severity.VIOLATION
    if any(d.severity is Severity.MINOR for d in diagnostics):
        return Severity.MINOR
    return Severity.CONFORMANT


_WORD_RE = re.compile(r"[A-Za-z0-9_'’]+")
_SENTENCE_BREAK_RE = re.compile(r'(?<=\.)\s+(?=["(A-Z])')


def tokenize(text: str) -> list[tuple[str, int, int]]:
    """Word tokens with character offsets."""
    return [(m.group(0), m.start(), m.end()) for m in _WORD_RE.finditer(text)]


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Naive sentence split: period followed by whitespace and a capital."""
    spans: list[tuple[int, int]] = []
    start = 0
    for m in _SENTENCE_BREAK_RE.finditer(text):
        spans.append((start, m.start()))
        start = m.end()
    spans.append((start, len(text)))
    return [(s, e) for s, e in spans if text[s:e].strip()]


def light_stem(word: str) -> str:
    """Suffix stripper good enough for content-word overlap; not a stemmer."""
    for suffix in ("ing", "ed", "es", "s"):
        if word.endswith(suffix) and len(word) > len(suffix) + 2:
            return word[: -len(suffix)]
    return word


def normalize_whitespace(text: str) -> str:
    return " ".join(text.split())
