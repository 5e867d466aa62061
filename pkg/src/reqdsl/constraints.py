"""Comparison-constraint extraction and cross-requirement consistency checks.

The comparator scanner is shared by the expression rule check (diagnostics),
the constraint extractor, and the deterministic rewriter used by the mock
translation backend, so that all three agree on what counts as a comparison.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal

from .lexicons import Lexicons, default_lexicons
from .types import (
    ComparisonOp,
    Constraint,
    ConsistencyFinding,
    Diagnostic,
    FindingKind,
    Requirement,
    RuleKind,
    Severity,
    sentence_spans,
    tokenize,
)

_KEYWORDS_LONGEST_FIRST = (
    ComparisonOp.LESS_OR_EQUAL,
    ComparisonOp.GREATER_OR_EQUAL,
    ComparisonOp.GREATER,
    ComparisonOp.LESS,
    ComparisonOp.EQUAL,
)

_MATH_RE = re.compile(r"<=|>=|<|>|=")
_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?")
_COPULAS = ("is", "are", "was", "were", "be", "been", "being")
_NEGATIONS = ("not", "never", "cannot")
_COPULA_NUMBER_RE = re.compile(
    r"\b(is|are|was|were|be|been)\s+(not\s+)?(?:(?:exactly|always|currently|still)\s+)?(?=\d)",
    re.IGNORECASE,
)
_COPULA_SYMBOL_RE = re.compile(
    r"\b(is|are|was|were|be|been)\s+([A-Z][A-Za-z0-9\-]*)\b"
)
_DSL_WORDS = {"IF", "THEN", "MUST", "LESS", "GREATER", "EQUAL", "OR", "THAN", "NOT"}

# Comparative adjectives that are ordinary size/amount words; they never
# need an adjective-to-subject mapping and raise no note when unmapped.
_GENERIC_COMPARATIVES = {"bigger", "greater", "larger", "smaller", "higher", "lower", "less", "more"}

# Words that may sit between a comparator and the variable it constrains.
_VERB_CHAIN = set(_COPULAS) | set(_NEGATIONS) | {
    "must", "shall", "should", "can", "could", "will", "may", "might",
    "has", "have", "had", "does", "do", "did", "to", "still", "always",
    "by", "at", "than",
}
_VARIABLE_BOUNDARIES = {
    "when", "if", "while", "where", "that", "which", "and", "or", "but",
    "before", "after", "because", "then", "unless", "until", "once", "so",
}
_BREAK_CHARS = set(",;:()")


@dataclass(frozen=True)
class ComparatorMatch:
    """One detected comparison site.

    ``start``/``end`` cover the full matched context (copula, negation,
    comparator words); ``phrase_span`` covers only the comparator words,
    which is the region rewritten by fix-its.
    """

    op: ComparisonOp
    base_op: ComparisonOp
    kind: str  # keyword | math | phrase | copula_number | copula_symbol | stray_keyword | miscased_keyword
    start: int
    end: int
    phrase_span: tuple[int, int]
    surface: str
    negated: bool = False
    rejected_negated_equality: bool = False
    verb_like: bool = False
    adjective: str | None = None

    @property
    def diagnostic_relevant(self) -> bool:
        """copula+symbol equalities are extracted but never diagnosed."""
        return self.kind != "copula_symbol"

    @property
    def conformant(self) -> bool:
        return self.kind in ("keyword", "math") and not self.rejected_negated_equality


def _candidate_overlaps(taken: list[tuple[int, int]], start: int, end: int) -> bool:
    return any(start < t_end and end > t_start for t_start, t_end in taken)


def _next_word(text: str, pos: int) -> tuple[str, int, int] | None:
    m = re.compile(r"\S+").search(text, pos)
    if not m:
        return None
    return m.group(0), m.start(), m.end()


def scan_comparators(text: str, lexicons: Lexicons | None = None) -> list[ComparatorMatch]:
    """All comparison sites in ``text``, left to right, non-overlapping."""
    lex = lexicons or default_lexicons()
    candidates: list[tuple[int, int, dict]] = []

    # DSL keywords (case-sensitive, uppercase by definition)
    for op in _KEYWORDS_LONGEST_FIRST:
        pattern = re.compile(r"\b" + re.escape(op.keyword).replace(r"\ ", r"\s+") + r"\b")
        for m in pattern.finditer(text):
            kind = "keyword"
            end = m.end()
            follower = _next_word(text, m.end())
            if (
                op in (ComparisonOp.LESS, ComparisonOp.GREATER)
                and follower is not None
                and follower[0].rstrip(".,;").lower() == "than"
            ):
                # "LESS THAN": keyword plus a stray token
                kind = "stray_keyword"
                end = follower[1] + len("than")
            candidates.append(
                (m.start(), end, {"op": op, "kind": kind, "phrase": (m.start(), end)})
            )

    # mathematical forms
    for m in _MATH_RE.finditer(text):
        op = ComparisonOp.from_symbol(m.group(0))
        candidates.append(
            (m.start(), m.end(), {"op": op, "kind": "math", "phrase": (m.start(), m.end())})
        )

    # natural-language phrases
    for entry in lex.comparators:
        pattern = re.compile(
            r"\b" + r"\s+".join(re.escape(w) for w in entry.phrase.split()) + r"\b",
            re.IGNORECASE,
        )
        for m in pattern.finditer(text):
            surface = m.group(0)
            if surface.split()[0].isupper() and surface.split()[0] in _DSL_WORDS:
                # e.g. "LESS than": handled as a stray-keyword near miss above
                continue
            kind = "stray_keyword" if surface.isupper() else "phrase"
            adjective = None
            first = surface.split()[0].lower()
            if first.endswith("er") and len(surface.split()) > 1:
                adjective = first
            candidates.append(
                (
                    m.start(),
                    m.end(),
                    {
                        "op": entry.op,
                        "kind": kind,
                        "phrase": (m.start(), m.end()),
                        "verb_like": entry.verb_like,
                        "adjective": adjective,
                    },
                )
            )

    # miscased keywords ("less or equal 5", "greater 10km/h")
    for op in _KEYWORDS_LONGEST_FIRST:
        pattern = re.compile(
            r"\b" + re.escape(op.keyword.lower()).replace(r"\ ", r"\s+") + r"\b",
            re.IGNORECASE,
        )
        for m in pattern.finditer(text):
            if m.group(0).isupper():
                continue  # the real keyword, handled above
            if " " not in op.keyword:
                # single-word candidates only count right before an operand
                tail = text[m.end() : m.end() + 24]
                if not re.match(r"\s+(?:(?:a|an|the)\s+)?(?:\d|[A-Z])", tail):
                    continue
            candidates.append(
                (
                    m.start(),
                    m.end(),
                    {"op": op, "kind": "miscased_keyword", "phrase": (m.start(), m.end())},
                )
            )

    # bare copula followed by a number: an unconverted equality
    for m in _COPULA_NUMBER_RE.finditer(text):
        candidates.append(
            (
                m.start(),
                m.end(2) if m.group(2) else m.end(1),
                {
                    "op": ComparisonOp.EQUAL,
                    "kind": "copula_number",
                    "phrase": (m.start(1), m.end(1)),
                    "negated": bool(m.group(2)),
                    "value_at": m.end(),
                },
            )
        )

    # copula followed by a capitalized symbol: extraction-only equality
    for m in _COPULA_SYMBOL_RE.finditer(text):
        token = m.group(2)
        if token in _DSL_WORDS or token.isdigit():
            continue
        candidates.append(
            (
                m.start(),
                m.end(1),
                {
                    "op": ComparisonOp.EQUAL,
                    "kind": "copula_symbol",
                    "phrase": (m.start(1), m.end(1)),
                    "value_at": m.start(2),
                },
            )
        )

    candidates.sort(key=lambda c: (c[0], -(c[1] - c[0])))
    taken: list[tuple[int, int]] = []
    matches: list[ComparatorMatch] = []
    for start, end, info in candidates:
        if _candidate_overlaps(taken, start, end):
            continue
        taken.append((start, end))
        matches.append(_finalize_match(text, start, end, info))
    matches.sort(key=lambda m: m.start)
    return matches


def _finalize_match(text: str, start: int, end: int, info: dict) -> ComparatorMatch:
    """Fold negation, pull in the copula context, and build the match."""
    op: ComparisonOp = info["op"]
    kind: str = info["kind"]
    negated = info.get("negated", False)
    outer_start = start

    if kind not in ("copula_number", "copula_symbol"):
        # walk left over copulas and negation tokens
        preceding = tokenize(text[:start])
        for word, w_start, _w_end in reversed(preceding[-3:]):
            lowered = word.lower()
            if lowered in _COPULAS:
                outer_start = w_start
                continue
            if lowered in _NEGATIONS or lowered.endswith("n't"):
                outer_start = w_start
                negated = True
                continue
            break

    rejected = False
    base_op = op
    if negated:
        if op is ComparisonOp.EQUAL:
            rejected = True
        else:
            op = op.complement()

    return ComparatorMatch(
        op=op,
        base_op=base_op,
        kind=kind,
        start=outer_start,
        end=end,
        phrase_span=info["phrase"],
        surface=text[start:end],
        negated=negated,
        rejected_negated_equality=rejected,
        verb_like=info.get("verb_like", False),
        adjective=info.get("adjective"),
    )


@dataclass(frozen=True)
class Extraction:
    """Constraints plus the notes the extractor produced along the way."""

    constraints: tuple[Constraint, ...]
    diagnostics: tuple[Diagnostic, ...]
    matches: tuple[ComparatorMatch, ...]


def _match_value(text: str, match: ComparatorMatch, lex: Lexicons):
    """Parse the operand after a comparator: number+unit or a symbol."""
    pos = match.end
    # skip glue words between the comparator and its operand
    glue = re.compile(r"\s*(?:(?:be|to|than|a|an|the)\s+)*", re.IGNORECASE)
    pos = glue.match(text, pos).end()

    m = _NUMBER_RE.match(text, pos)
    if m:
        number_end = m.end()
        if number_end < len(text) and text[number_end] == ":":
            return None  # ratios like "1:1" are not constraint values
        unit, unit_end = _match_unit(text, number_end, lex)
        return Decimal(m.group(0)), unit, (pos, unit_end)

    sym = re.match(r"[A-Z][A-Za-z0-9\-]*", text[pos:])
    if sym:
        return sym.group(0), None, (pos, pos + sym.end())
    return None


def _match_unit(text: str, pos: int, lex: Lexicons) -> tuple[str | None, int]:
    probe = pos
    if probe < len(text) and text[probe] == " ":
        probe += 1
    for unit in lex.units_longest_first:
        if text.startswith(unit, probe):
            after = probe + len(unit)
            if after >= len(text) or not text[after].isalnum():
                return unit, after
    return None, pos


def _variable_before(text: str, match: ComparatorMatch, lex: Lexicons):
    """The noun phrase the comparator constrains, walked back from the match."""
    sent_start = 0
    for s, e in sentence_spans(text):
        if s <= match.start < e:
            sent_start = s
            break
    segment = text[sent_start : match.start]
    tokens = tokenize(segment)

    while tokens and tokens[-1][0].lower() in _VERB_CHAIN:
        tokens.pop()

    collected: list[tuple[str, int, int]] = []
    prev_start: int | None = None
    for word, w_start, w_end in reversed(tokens):
        if word.lower() in _VARIABLE_BOUNDARIES:
            break
        gap = segment[w_end:prev_start] if prev_start is not None else segment[w_end:]
        if any(ch in _BREAK_CHARS or ch == "." for ch in gap):
            break
        collected.insert(0, (word, w_start, w_end))
        prev_start = w_start
    return collected


def normalize_variable(words: list[str], lex: Lexicons) -> tuple[str, list[str]]:
    """Lowercase, strip determiners/possessives, pull out superlative markers."""
    cleaned: list[str] = []
    markers: list[str] = []
    for raw in words:
        word = raw.lower().rstrip("'’")
        if word.endswith("'s") or word.endswith("’s"):
            word = word[:-2]
        if word in lex.determiners:
            continue
        if word in lex.superlatives:
            markers.append(word)
            continue
        cleaned.append(word)
    while len(cleaned) > 1 and cleaned[0] in lex.possessors:
        cleaned.pop(0)
    return " ".join(cleaned), markers


def extract(text: str, lexicons: Lexicons | None = None, source_id: str | None = None) -> Extraction:
    """Scan ``text`` and build normalized constraints for every comparator."""
    lex = lexicons or default_lexicons()
    matches = scan_comparators(text, lex)
    constraints: list[Constraint] = []
    diagnostics: list[Diagnostic] = []

    for match in matches:
        if match.rejected_negated_equality:
            diagnostics.append(
                Diagnostic(
                    rule=RuleKind.EXPRESSION,
                    severity=Severity.VIOLATION,
                    span=(match.start, match.end),
                    message="negated equality has no DSL operator; rephrase the comparison",
                )
            )
            continue

        value = _match_value(text, match, lex)
        if value is None:
            continue
        raw_value, unit, _value_span = value

        op = match.op
        variable_tokens = _variable_before(text, match, lex)
        variable, markers = normalize_variable([w for w, _, _ in variable_tokens], lex)
        if not variable:
            continue

        if (
            markers
            and op is ComparisonOp.EQUAL
            and match.kind in ("copula_number", "copula_symbol", "phrase")
        ):
            # "the minimum X is 5" constrains X from below; an explicit
            # EQUAL keyword stays an equality
            op = lex.superlatives[markers[0]]

        if match.adjective:
            subject = lex.adjective_subjects.get(match.adjective)
            if subject and not variable.endswith(subject):
                variable = f"{variable} {subject}"
            elif subject is None and match.adjective not in _GENERIC_COMPARATIVES:
                diagnostics.append(
                    Diagnostic(
                        rule=RuleKind.EXPRESSION,
                        severity=Severity.CONFORMANT,
                        span=match.phrase_span,
                        message=(
                            f"comparative '{match.adjective}' has no mapped physical "
                            "quantity; variable left unchanged"
                        ),
                    )
                )

        if isinstance(raw_value, str) and op is not ComparisonOp.EQUAL:
            # symbolic values only combine with equality
            continue

        constraints.append(
            Constraint(
                variable=variable,
                op=op,
                value=raw_value,
                unit=unit,
                source_requirement=source_id,
                span=(match.start, match.end),
            )
        )

    return Extraction(tuple(constraints), tuple(diagnostics), tuple(matches))


def extract_constraints(
    requirement: Requirement | str, lexicons: Lexicons | None = None
) -> list[Constraint]:
    """Normalized constraints for one requirement; empty when none match."""
    if isinstance(requirement, Requirement):
        return list(extract(requirement.text, lexicons, requirement.id).constraints)
    return list(extract(requirement, lexicons).constraints)


def render_formula(constraint: Constraint, style: str = "mathematical") -> str:
    """Render as "variable <op> value[unit]" text."""
    if style not in ("keyword", "mathematical"):
        raise ValueError(f"unknown render style: {style!r}")
    op_text = constraint.op.keyword if style == "keyword" else constraint.op.symbol
    unit = constraint.unit or ""
    return f"{constraint.variable} {op_text} {constraint.value_text}{unit}"


# ---------------------------------------------------------------------------
# consistency checking


class _Bound:
    """Half-line bound with strictness, tightened constraint by constraint."""

    __slots__ = ("value", "strict")

    def __init__(self) -> None:
        self.value: Decimal | None = None
        self.strict = False

    def tighten_lower(self, value: Decimal, strict: bool) -> None:
        if self.value is None or value > self.value or (value == self.value and strict):
            self.value, self.strict = value, strict

    def tighten_upper(self, value: Decimal, strict: bool) -> None:
        if self.value is None or value < self.value or (value == self.value and strict):
            self.value, self.strict = value, strict


def _numeric_feasible(constraints: list[Constraint]) -> bool:
    lower, upper = _Bound(), _Bound()
    for c in constraints:
        value = c.value
        assert isinstance(value, Decimal)
        if c.op is ComparisonOp.LESS:
            upper.tighten_upper(value, strict=True)
        elif c.op is ComparisonOp.LESS_OR_EQUAL:
            upper.tighten_upper(value, strict=False)
        elif c.op is ComparisonOp.GREATER:
            lower.tighten_lower(value, strict=True)
        elif c.op is ComparisonOp.GREATER_OR_EQUAL:
            lower.tighten_lower(value, strict=False)
        else:
            lower.tighten_lower(value, strict=False)
            upper.tighten_upper(value, strict=False)
    if lower.value is None or upper.value is None:
        return True
    if lower.value < upper.value:
        return True
    if lower.value == upper.value:
        return not lower.strict and not upper.strict
    return False


def _distinct_sources(constraints: list[Constraint]) -> int:
    return len({c.source_requirement for c in constraints})


def check_consistency(constraints: list[Constraint]) -> list[ConsistencyFinding]:
    """Group constraints by variable and flag contradictions and links.

    Constraints sharing a variable but carrying different units are never
    compared numerically; they surface as a unit-mismatch finding instead.
    """
    findings: list[ConsistencyFinding] = []
    by_variable: dict[str, list[Constraint]] = {}
    for c in constraints:
        by_variable.setdefault(c.variable, []).append(c)

    for variable, group in by_variable.items():
        units = {c.unit for c in group}
        if len(units) > 1 and _distinct_sources(group) >= 2:
            findings.append(
                ConsistencyFinding(
                    kind=FindingKind.UNIT_MISMATCH,
                    variable=variable,
                    constraints=tuple(group),
                    explanation=(
                        f"'{variable}' is constrained with different units "
                        f"({', '.join(sorted(str(u) for u in units))}); not compared"
                    ),
                )
            )
            continue

        for unit in units:
            subgroup = [c for c in group if c.unit == unit]
            numeric = [c for c in subgroup if not c.is_symbolic]
            symbolic = [c for c in subgroup if c.is_symbolic]

            if len(numeric) >= 2 and _distinct_sources(numeric) >= 2:
                rendered = "; ".join(render_formula(c) for c in numeric)
                if _numeric_feasible(numeric):
                    findings.append(
                        ConsistencyFinding(
                            kind=FindingKind.LINK,
                            variable=variable,
                            constraints=tuple(numeric),
                            explanation=f"jointly satisfiable bounds: {rendered}",
                        )
                    )
                else:
                    findings.append(
                        ConsistencyFinding(
                            kind=FindingKind.CONTRADICTION,
                            variable=variable,
                            constraints=tuple(numeric),
                            explanation=f"no value satisfies all of: {rendered}",
                        )
                    )

            if len(symbolic) >= 2 and _distinct_sources(symbolic) >= 2:
                values = {c.value for c in symbolic}
                if len(values) > 1:
                    findings.append(
                        ConsistencyFinding(
                            kind=FindingKind.CONTRADICTION,
                            variable=variable,
                            constraints=tuple(symbolic),
                            explanation=(
                                f"'{variable}' is equated to distinct values: "
                                + ", ".join(sorted(map(str, values)))
                            ),
                        )
                    )
                else:
                    findings.append(
                        ConsistencyFinding(
                            kind=FindingKind.LINK,
                            variable=variable,
                            constraints=tuple(symbolic),
                            explanation=f"'{variable}' consistently equals {next(iter(values))}",
                        )
                    )

    return findings
