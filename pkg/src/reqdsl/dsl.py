"""Surface syntax of the requirements DSL: parsing and rule checks.

Keyword matching is case-sensitive on the DSL side ("IF:", "THEN:", "MUST",
comparison keywords are uppercase by definition); natural-language detection
is case-insensitive, since legacy text is mixed case.
"""

from __future__ import annotations

import re

from . import constraints as constraint_engine
from .lexicons import Lexicons, default_lexicons
from .types import (
    Diagnostic,
    DslDocumentAnalysis,
    IfThenParseError,
    IfThenReq,
    ParseFailureCode,
    Requirement,
    RuleKind,
    Severity,
    aggregate_severity,
    sentence_spans,
    tokenize,
)

IF_KEYWORD = "IF:"
THEN_KEYWORD = "THEN:"
MUST_KEYWORD = "MUST"

_LEADING_KEYWORD_RE = re.compile(r"^\s*([A-Z]{2,}):")
_CONTEXT_PREFIX_RE = re.compile(r"^\s*([A-Z][\w'\-]*(?:\s+[\w'\-]+){0,3}):\s+")
_TOLERANT_IF_THEN_RE = re.compile(
    r"^\s*(if)\s*(:)?\s*(.*?)\s*,?\s*\b(then)\s*(:)?\s*(.+?)\s*$",
    re.IGNORECASE | re.DOTALL,
)
_TRIGGER_PREPOSITIONS = ("with", "by", "in", "on", "at", "for", "during", "of")


def parse_if_then(text: str) -> IfThenReq:
    """Split a candidate DSL sentence at the first "THEN:" after "IF:".

    Trailing sentence punctuation and the optional comma before "THEN:"
    are stripped; rendering re-adds them canonically.  Raises
    :class:`IfThenParseError` naming the first unmet expectation.
    """
    stripped = text.strip()
    if not stripped.startswith(IF_KEYWORD):
        if stripped.startswith(THEN_KEYWORD):
            raise IfThenParseError(ParseFailureCode.MISSING_KEYWORD, IF_KEYWORD)
        leading = _LEADING_KEYWORD_RE.match(stripped)
        if leading and leading.group(1) + ":" != IF_KEYWORD:
            raise IfThenParseError(
                ParseFailureCode.UNKNOWN_KEYWORD, leading.group(1) + ":"
            )
        raise IfThenParseError(ParseFailureCode.MISSING_KEYWORD, IF_KEYWORD)

    body = stripped[len(IF_KEYWORD) :]
    then_index = body.find(THEN_KEYWORD)
    if then_index < 0:
        raise IfThenParseError(ParseFailureCode.MISSING_KEYWORD, THEN_KEYWORD)

    trigger = body[:then_index].strip().rstrip(",").strip()
    action = body[then_index + len(THEN_KEYWORD) :].strip().rstrip(".").strip()

    if not trigger:
        raise IfThenParseError(ParseFailureCode.EMPTY_PART, "trigger")
    if not action:
        raise IfThenParseError(ParseFailureCode.EMPTY_PART, "action")
    for part, name in ((trigger, "trigger"), (action, "action")):
        if IF_KEYWORD in part or THEN_KEYWORD in part:
            raise IfThenParseError(ParseFailureCode.STRAY_KEYWORD, name)

    return IfThenReq(trigger=trigger, action=action, raw=text)


def render_if_then(req: IfThenReq) -> str:
    return req.render()


def _leading_trigger_marker(sentence: str, lex: Lexicons) -> tuple[int, int] | None:
    """Span of a conditional marker at the start of ``sentence``, if any."""
    stripped = sentence.lstrip()
    offset = len(sentence) - len(stripped)
    head = stripped.lower()
    for marker in sorted(lex.trigger_markers, key=len, reverse=True):
        if head.startswith(marker):
            after = head[len(marker) : len(marker) + 1]
            if after == "" or not after.isalnum():
                return (offset, offset + len(marker))
    return None


def check_if_then(text: str, lexicons: Lexicons | None = None) -> list[Diagnostic]:
    """Diagnostics for the trigger/action rule on one sentence.

    Returns an empty list when the sentence neither is nor needs an
    IF/THEN formulation.
    """
    lex = lexicons or default_lexicons()
    stripped = text.strip()
    if not stripped:
        return []
    offset = text.index(stripped[0])

    if stripped.startswith(IF_KEYWORD) or _LEADING_KEYWORD_RE.match(stripped):
        return [d.shifted(offset) for d in _check_dsl_if_then(stripped)]

    tolerant = _TOLERANT_IF_THEN_RE.match(stripped)
    if tolerant and (tolerant.group(2) or tolerant.group(5)):
        # an attempted IF/THEN with miscased keywords or missing colons
        diags = []
        if tolerant.group(1) != "IF" or not tolerant.group(2):
            diags.append(
                Diagnostic(
                    rule=RuleKind.IF_THEN,
                    severity=Severity.MINOR,
                    span=(offset + tolerant.start(1), offset + tolerant.end(1)),
                    message="keyword should be spelled 'IF:'",
                    fix_hint=IF_KEYWORD,
                )
            )
        if tolerant.group(4) != "THEN" or not tolerant.group(5):
            diags.append(
                Diagnostic(
                    rule=RuleKind.IF_THEN,
                    severity=Severity.MINOR,
                    span=(offset + tolerant.start(4), offset + tolerant.end(4)),
                    message="keyword should be spelled 'THEN:'",
                    fix_hint=THEN_KEYWORD,
                )
            )
        if diags:
            return diags

    marker = _leading_trigger_marker(text, lex)
    if marker is not None:
        return [
            Diagnostic(
                rule=RuleKind.IF_THEN,
                severity=Severity.VIOLATION,
                span=marker,
                message="trigger/action requirement is not in 'IF: ..., THEN: ...' form",
            )
        ]
    return []


def _check_dsl_if_then(stripped: str) -> list[Diagnostic]:
    try:
        parsed = parse_if_then(stripped)
    except IfThenParseError as error:
        return [
            Diagnostic(
                rule=RuleKind.IF_THEN,
                severity=Severity.VIOLATION,
                span=(0, len(stripped)),
                message=str(error),
            )
        ]

    diags: list[Diagnostic] = []
    if not re.search(r",\s*" + re.escape(THEN_KEYWORD), stripped):
        then_at = stripped.find(THEN_KEYWORD)
        diags.append(
            Diagnostic(
                rule=RuleKind.IF_THEN,
                severity=Severity.MINOR,
                span=(then_at, then_at + len(THEN_KEYWORD)),
                message="missing comma before 'THEN:'",
                fix_hint=", THEN:",
            )
        )
    first_word = parsed.trigger.split()[0].lower() if parsed.trigger.split() else ""
    if first_word in _TRIGGER_PREPOSITIONS:
        trigger_at = stripped.find(parsed.trigger)
        diags.append(
            Diagnostic(
                rule=RuleKind.IF_THEN,
                severity=Severity.MINOR,
                span=(trigger_at, trigger_at + len(first_word)),
                message=f"trigger starts with the preposition '{first_word}'; consider rephrasing",
                fix_hint=parsed.trigger,
            )
        )
    if diags:
        return diags
    return [
        Diagnostic(
            rule=RuleKind.IF_THEN,
            severity=Severity.CONFORMANT,
            span=(0, len(stripped)),
            message="trigger/action structure conforms",
        )
    ]


def check_modal(text: str, lexicons: Lexicons | None = None) -> list[Diagnostic]:
    """Diagnostics for the MUST rule.

    A sentence containing "MUST" (optionally followed by NOT/not) conforms;
    weak modals and modal-free declarative sentences are violations with a
    replacement hint.
    """
    lex = lexicons or default_lexicons()
    if not text.strip():
        return [
            Diagnostic(
                rule=RuleKind.MODAL_VERB,
                severity=Severity.VIOLATION,
                span=(0, 0),
                message="no sentence",
            )
        ]

    tokens = tokenize(text)
    for word, start, end in tokens:
        if word == MUST_KEYWORD:
            return [
                Diagnostic(
                    rule=RuleKind.MODAL_VERB,
                    severity=Severity.CONFORMANT,
                    span=(start, end),
                    message="prescriptive keyword present",
                )
            ]

    diags: list[Diagnostic] = []
    for word, start, end in tokens:
        if word.lower() == "must":
            diags.append(
                Diagnostic(
                    rule=RuleKind.MODAL_VERB,
                    severity=Severity.MINOR,
                    span=(start, end),
                    message="keyword should be spelled 'MUST'",
                    fix_hint=MUST_KEYWORD,
                )
            )
    if diags:
        return diags

    lowered = [(w.lower(), s, e) for w, s, e in tokens]
    phrase_modals = [m for m in lex.weak_modals if " " in m]
    single_modals = {m for m in lex.weak_modals if " " not in m}

    consumed: set[int] = set()
    for phrase in phrase_modals:
        words = phrase.split()
        for i in range(len(lowered) - len(words) + 1):
            if [w for w, _, _ in lowered[i : i + len(words)]] == words:
                start = lowered[i][1]
                end = lowered[i + len(words) - 1][2]
                diags.append(
                    Diagnostic(
                        rule=RuleKind.MODAL_VERB,
                        severity=Severity.VIOLATION,
                        span=(start, end),
                        message=f"weak modal '{text[start:end]}'; use 'MUST'",
                        fix_hint=MUST_KEYWORD,
                    )
                )
                consumed.update(range(i, i + len(words)))
    for i, (word, start, end) in enumerate(lowered):
        if i in consumed:
            continue
        if word in single_modals:
            diags.append(
                Diagnostic(
                    rule=RuleKind.MODAL_VERB,
                    severity=Severity.VIOLATION,
                    span=(start, end),
                    message=f"weak modal '{text[start:end]}'; use 'MUST'",
                    fix_hint=MUST_KEYWORD,
                )
            )
    if diags:
        diags.sort(key=lambda d: d.span)
        return diags

    copulas = {"is", "are", "was", "were", "be", "been", "being"}
    for word, start, end in lowered:
        if word in copulas:
            return [
                Diagnostic(
                    rule=RuleKind.MODAL_VERB,
                    severity=Severity.VIOLATION,
                    span=(start, end),
                    message="declarative sentence without a modal; insert 'MUST'",
                    fix_hint=f"{MUST_KEYWORD} be",
                )
            ]
    aux_hints = {"does": MUST_KEYWORD, "do": MUST_KEYWORD, "did": MUST_KEYWORD,
                 "has": f"{MUST_KEYWORD} have", "have": f"{MUST_KEYWORD} have",
                 "had": f"{MUST_KEYWORD} have"}
    for word, start, end in lowered:
        if word in aux_hints:
            return [
                Diagnostic(
                    rule=RuleKind.MODAL_VERB,
                    severity=Severity.VIOLATION,
                    span=(start, end),
                    message="declarative sentence without a modal; insert 'MUST'",
                    fix_hint=aux_hints[word],
                )
            ]

    # headings and fragments legitimately carry no modal
    return [
        Diagnostic(
            rule=RuleKind.MODAL_VERB,
            severity=Severity.CONFORMANT,
            span=(0, len(text)),
            message="no prescriptive clause detected",
        )
    ]


def check_expression_keywords(text: str, lexicons: Lexicons | None = None) -> list[Diagnostic]:
    """Diagnostics for the comparison-keyword rule.

    Conformant iff every detected comparison is realized as a DSL keyword
    or mathematical operator.
    """
    lex = lexicons or default_lexicons()
    matches = constraint_engine.scan_comparators(text, lex)
    diags: list[Diagnostic] = []
    saw_conformant = False

    for match in matches:
        if not match.diagnostic_relevant:
            continue
        if match.rejected_negated_equality:
            diags.append(
                Diagnostic(
                    rule=RuleKind.EXPRESSION,
                    severity=Severity.VIOLATION,
                    span=(match.start, match.end),
                    message="negated equality has no DSL operator; rephrase the comparison",
                )
            )
        elif match.kind in ("keyword", "math"):
            saw_conformant = True
        elif match.kind == "stray_keyword":
            diags.append(
                Diagnostic(
                    rule=RuleKind.EXPRESSION,
                    severity=Severity.MINOR,
                    span=(match.phrase_span[0], match.phrase_span[1]),
                    message=f"malformed keyword '{text[match.phrase_span[0]:match.phrase_span[1]]}'",
                    fix_hint=match.base_op.keyword,
                )
            )
        elif match.kind == "miscased_keyword":
            diags.append(
                Diagnostic(
                    rule=RuleKind.EXPRESSION,
                    severity=Severity.MINOR,
                    span=(match.phrase_span[0], match.phrase_span[1]),
                    message=f"keyword should be uppercase '{match.base_op.keyword}'",
                    fix_hint=match.base_op.keyword,
                )
            )
        elif match.kind == "copula_number":
            copula = text[match.phrase_span[0] : match.phrase_span[1]]
            diags.append(
                Diagnostic(
                    rule=RuleKind.EXPRESSION,
                    severity=Severity.VIOLATION,
                    span=(match.start, match.end),
                    message="unconverted equality; use a comparison keyword",
                    fix_hint=f"{copula} {match.op.keyword}",
                )
            )
        else:  # natural-language phrase
            diags.append(
                Diagnostic(
                    rule=RuleKind.EXPRESSION,
                    severity=Severity.VIOLATION,
                    span=(match.start, match.end),
                    message=(
                        f"natural-language comparator "
                        f"'{text[match.start:match.end]}'; use '{match.op.keyword}'"
                    ),
                    fix_hint=match.op.keyword,
                )
            )

    if diags:
        diags.sort(key=lambda d: d.span)
        return diags
    if saw_conformant:
        return [
            Diagnostic(
                rule=RuleKind.EXPRESSION,
                severity=Severity.CONFORMANT,
                span=(0, len(text)),
                message="comparisons use DSL operators",
            )
        ]
    return [
        Diagnostic(
            rule=RuleKind.EXPRESSION,
            severity=Severity.CONFORMANT,
            span=(0, len(text)),
            message="no comparison phrases detected",
        )
    ]


def context_prefix(sentence: str) -> tuple[int, int] | None:
    """Span of a "Context:" style prefix, which never introduces a trigger."""
    stripped = sentence.lstrip()
    if stripped.startswith(IF_KEYWORD) or _LEADING_KEYWORD_RE.match(stripped):
        return None
    m = _CONTEXT_PREFIX_RE.match(sentence)
    if m:
        return (m.start(1), m.end(1) + 1)
    return None


def classify(text: str, lexicons: Lexicons | None = None) -> set[RuleKind]:
    """The set of rules whose transformation applies to ``text``.

    Deterministic and lexicon-driven; no model is involved.
    """
    lex = lexicons or default_lexicons()
    applicable: set[RuleKind] = set()

    for start, end in sentence_spans(text):
        sentence = text[start:end]
        stripped = sentence.strip()
        if not stripped:
            continue

        if not stripped.startswith(IF_KEYWORD):
            remainder = stripped
            prefix = context_prefix(stripped)
            if prefix is not None:
                remainder = stripped[prefix[1] :]
            if _leading_trigger_marker(remainder, lex) is not None:
                applicable.add(RuleKind.IF_THEN)

        if aggregate_severity(check_modal(sentence, lex)) in (
            Severity.MINOR,
            Severity.VIOLATION,
        ):
            applicable.add(RuleKind.MODAL_VERB)
        if aggregate_severity(check_expression_keywords(sentence, lex)) in (
            Severity.MINOR,
            Severity.VIOLATION,
        ):
            applicable.add(RuleKind.EXPRESSION)

    return applicable


def analyze(
    requirement: Requirement | str,
    lexicons: Lexicons | None = None,
    *,
    requirement_id: str | None = None,
) -> DslDocumentAnalysis:
    """Run every rule check plus constraint extraction over one requirement.

    Multi-sentence texts are analyzed sentence by sentence; spans always
    index into the full original text.
    """
    lex = lexicons or default_lexicons()
    if isinstance(requirement, str):
        # ad-hoc drafts may be empty; emptiness is a finding, not an error
        requirement_id, text = requirement_id or "adhoc", requirement
    else:
        requirement_id, text = requirement.id, requirement.text

    per_rule: dict[RuleKind, list[Diagnostic]] = {rule: [] for rule in RuleKind}
    notes: list[str] = []

    spans = sentence_spans(text)
    if len(spans) > 1:
        notes.append(
            f"text contains {len(spans)} sentences; each is analyzed separately"
        )
    if not spans:
        spans = [(0, len(text))]

    for start, end in spans:
        sentence = text[start:end]
        prefix = context_prefix(sentence)
        if prefix is not None:
            # informational only; a context prefix never opens a trigger,
            # and it must not make the rule look conformant on its own
            notes.append(
                f"context prefix {sentence[prefix[0]:prefix[1]]!r} is not a trigger"
            )
        for diag in check_if_then(sentence, lex):
            per_rule[RuleKind.IF_THEN].append(diag.shifted(start))
        for diag in check_modal(sentence, lex):
            per_rule[RuleKind.MODAL_VERB].append(diag.shifted(start))
        for diag in check_expression_keywords(sentence, lex):
            per_rule[RuleKind.EXPRESSION].append(diag.shifted(start))

    extraction = constraint_engine.extract(text, lex, requirement_id)
    for diag in extraction.diagnostics:
        if diag.severity is Severity.CONFORMANT:
            per_rule[RuleKind.EXPRESSION].append(diag)

    if_then = None
    if aggregate_severity(per_rule[RuleKind.IF_THEN]) is Severity.CONFORMANT:
        first_sentence = text[spans[0][0] : spans[0][1]].strip()
        if first_sentence.startswith(IF_KEYWORD):
            if_then = parse_if_then(first_sentence)

    return DslDocumentAnalysis(
        requirement_id=requirement_id,
        per_rule={rule: tuple(diags) for rule, diags in per_rule.items()},
        if_then=if_then,
        constraints=extraction.constraints,
        classification=frozenset(classify(text, lex)),
        notes=tuple(notes),
    )
