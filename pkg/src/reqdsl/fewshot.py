"""Few-shot prompt construction and pluggable text-generation backends.

Prompt construction is byte-exact and deterministic: the same support set
and query always produce the same bytes and therefore the same prompt hash.
Three backends exist: ``http`` talks to a completion-style inference server,
``mock`` applies the deterministic rule-based rewriter below, and ``replay``
returns recorded outputs keyed by (support set id, query).
"""

from __future__ import annotations

import enum
import hashlib
import logging
import os
import re
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import httpx

from . import constraints as constraint_engine
from . import dsl
from .lexicons import Lexicons, default_lexicons
from .types import (
    Requirement,
    RuleKind,
    Severity,
    aggregate_severity,
    normalize_whitespace,
)

logger = logging.getLogger(__name__)

PROMPT_INSTRUCTION = "Translate input to DSL"
PAIR_SEPARATOR = "###"
DEFAULT_STOP_SEQUENCES = ("\n###", "\nInput:", "\n\n")
DEFAULT_PROMPT_BYTE_BUDGET = 16384

# cascade stages always run in this order
RULE_ORDER = (RuleKind.IF_THEN, RuleKind.MODAL_VERB, RuleKind.EXPRESSION)


class SupportSetProvenance(enum.Enum):
    BUNDLED = "bundled"
    USER = "user"


@dataclass(frozen=True)
class SupportPair:
    """One few-shot example: unstructured input and its DSL formulation."""

    input: str
    dsl: str

    def __post_init__(self) -> None:
        if not self.input.strip() or not self.dsl.strip():
            raise ValueError("support pair sides must be non-empty")


@dataclass(frozen=True)
class SupportSet:
    """Ordered examples for one translation rule; order is significant."""

    id: str
    rule: RuleKind
    pairs: tuple[SupportPair, ...]
    provenance: SupportSetProvenance = SupportSetProvenance.USER

    def __post_init__(self) -> None:
        if not self.pairs:
            raise EmptySupportSetError(self.id)


class EmptySupportSetError(ValueError):
    def __init__(self, set_id: str):
        super().__init__(f"support set {set_id!r} has no pairs")
        self.set_id = set_id


class BackendError(Exception):
    """Base class for generation backend failures."""


class BackendTimeout(BackendError):
    pass


class TransportError(BackendError):
    pass


class BackendRejected(BackendError):
    def __init__(self, status: int, body: str = ""):
        super().__init__(f"backend rejected request with status {status}")
        self.status = status
        self.body = body


class ReplayMiss(BackendError):
    def __init__(self, support_set_id: str | None, query: str):
        super().__init__(
            f"no recorded output for set {support_set_id!r} and query {query!r}"
        )
        self.support_set_id = support_set_id
        self.query = query


class TranslationStageError(BackendError):
    """A generate() failure annotated with the cascade stage it occurred in."""

    def __init__(self, stage: int, rule: RuleKind, cause: BackendError):
        super().__init__(f"stage {stage} ({rule.value}): {cause}")
        self.stage = stage
        self.rule = rule
        self.cause = cause


class BackendKind(enum.Enum):
    HTTP = "http"
    MOCK = "mock"
    REPLAY = "replay"


@dataclass(frozen=True)
class GenerationBackendConfig:
    """How to reach a generation backend; decoding params pass through opaquely."""

    kind: BackendKind
    endpoint_url: str | None = None
    api_key: str | None = None
    timeout: float = 30.0
    max_output_tokens: int = 256
    stop_sequences: tuple[str, ...] = DEFAULT_STOP_SEQUENCES
    decoding_params: tuple[tuple[str, object], ...] = ()
    # field names for the http wire contract, to match common servers
    prompt_field: str = "prompt"
    max_tokens_field: str = "max_tokens"
    stop_field: str = "stop"
    response_field: str = "text"
    auth_header: str = "Authorization"

    def __post_init__(self) -> None:
        if self.kind is BackendKind.HTTP and not self.endpoint_url:
            raise ValueError("http backend requires endpoint_url")
        if not self.stop_sequences:
            raise ValueError("stop_sequences must be non-empty")
        if self.max_output_tokens <= 0:
            raise ValueError("max_output_tokens must be positive")

    @classmethod
    def from_env(cls, env: Mapping[str, str] | None = None) -> "GenerationBackendConfig":
        env = os.environ if env is None else env
        kind = BackendKind(env.get("REQDSL_BACKEND_KIND", "mock"))
        timeout_ms = env.get("REQDSL_TIMEOUT_MS")
        return cls(
            kind=kind,
            endpoint_url=env.get("REQDSL_BACKEND_URL"),
            api_key=env.get("REQDSL_API_KEY"),
            timeout=float(timeout_ms) / 1000.0 if timeout_ms else 30.0,
        )


@dataclass(frozen=True)
class TranslationResult:
    """Output of one cascade stage."""

    source: Requirement
    rule: RuleKind
    output: str
    backend_kind: str
    support_set_id: str
    prompt_hash: str
    latency: float = 0.0


def build_prompt(
    support_set: SupportSet,
    query: str,
    byte_budget: int = DEFAULT_PROMPT_BYTE_BUDGET,
) -> str:
    """Byte-exact few-shot prompt: instruction, Input/DSL pairs, final query."""
    if not support_set.pairs:
        raise EmptySupportSetError(support_set.id)
    blocks = [
        f"{PROMPT_INSTRUCTION}\nInput: {pair.input}\nDSL: {pair.dsl}"
        for pair in support_set.pairs
    ]
    blocks.append(f"{PROMPT_INSTRUCTION}\nInput: {query}\nDSL:")
    prompt = f"\n{PAIR_SEPARATOR}\n".join(blocks)
    if len(prompt.encode("utf-8")) > byte_budget:
        logger.warning(
            "prompt for set %s exceeds byte budget (%d > %d)",
            support_set.id,
            len(prompt.encode("utf-8")),
            byte_budget,
        )
    return prompt


def prompt_hash(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# deterministic mock rewriter


def mock_translate(rule: RuleKind, text: str, lexicons: Lexicons | None = None) -> str:
    """Apply the rule's fix-hints mechanically.

    The output passes the target rule's conformance check whenever a
    transformation site exists; otherwise the input is returned unchanged.
    """
    lex = lexicons or default_lexicons()
    if rule is RuleKind.IF_THEN:
        return _mock_if_then(text, lex)
    if rule is RuleKind.MODAL_VERB:
        return _mock_modal(text, lex)
    return _mock_expression(text, lex)


def _mock_if_then(text: str, lex: Lexicons) -> str:
    stripped = text.strip()
    if not stripped:
        return text
    if stripped.startswith(dsl.IF_KEYWORD):
        return text

    tolerant = dsl._TOLERANT_IF_THEN_RE.match(stripped)
    if tolerant and (tolerant.group(2) or tolerant.group(5)):
        trigger = tolerant.group(3).strip().rstrip(",").strip()
        action = tolerant.group(6).strip().rstrip(".").strip()
        if trigger and action:
            return f"IF: {trigger}, THEN: {action}."

    marker = dsl._leading_trigger_marker(stripped, lex)
    if marker is None:
        return text
    comma = stripped.find(",", marker[1])
    if comma < 0:
        return text
    trigger = stripped[marker[1] : comma].strip()
    action = stripped[comma + 1 :].strip().rstrip(".").strip()
    if not trigger or not action:
        return text
    return f"IF: {trigger}, THEN: {action}."


def _mock_modal(text: str, lex: Lexicons) -> str:
    stripped = text.strip()
    if stripped.startswith(dsl.IF_KEYWORD):
        # rewrite the action part only; the trigger keeps its wording
        try:
            parsed = dsl.parse_if_then(stripped)
        except Exception:
            return text
        new_action = _mock_modal(parsed.action, lex)
        if new_action == parsed.action:
            return text
        return f"IF: {parsed.trigger}, THEN: {new_action.rstrip('.')}."

    diags = dsl.check_modal(text, lex)
    severity = aggregate_severity(diags)
    if severity is Severity.CONFORMANT or severity is None:
        return text
    first = next(
        (d for d in diags if d.severity in (Severity.VIOLATION, Severity.MINOR)), None
    )
    if first is None or first.fix_hint is None:
        return text
    start, end = first.span
    if start == end:
        return text
    replacement = first.fix_hint
    # "is not available" becomes "MUST not be available"
    follower = re.match(r"\s+not\b", text[end:])
    if follower and replacement.endswith(" be"):
        end += follower.end()
        replacement = f"{dsl.MUST_KEYWORD} not be"
    return text[:start] + replacement + text[end:]


def _mock_expression(text: str, lex: Lexicons) -> str:
    current = text
    for _ in range(10):
        rewritten = _rewrite_first_comparator(current, lex)
        if rewritten is None:
            return current
        current = rewritten
    return current


def _rewrite_first_comparator(text: str, lex: Lexicons) -> str | None:
    extraction = constraint_engine.extract(text, lex)
    for match in extraction.matches:
        if not match.diagnostic_relevant or match.conformant:
            continue
        if match.rejected_negated_equality:
            continue
        op = match.op
        for constraint in extraction.constraints:
            if constraint.span == (match.start, match.end):
                op = constraint.op
                break
        if match.kind == "copula_number":
            copula_start, copula_end = match.phrase_span
            copula = text[copula_start:copula_end]
            return text[:copula_start] + f"{copula} {op.keyword}" + text[copula_end:]
        if match.negated:
            return text[: match.start] + f"be {op.keyword}" + text[match.end :]
        if match.verb_like:
            return (
                text[: match.phrase_span[0]]
                + f"is {op.keyword}"
                + text[match.phrase_span[1] :]
            )
        return (
            text[: match.phrase_span[0]] + op.keyword + text[match.phrase_span[1] :]
        )
    return None


# ---------------------------------------------------------------------------
# backends


class GenerationBackend:
    kind: BackendKind

    def complete(self, prompt: str, *, support_set_id: str | None = None) -> str:
        raise NotImplementedError


class MockBackend(GenerationBackend):
    """Continues the prompt with the deterministic rewriter's output."""

    kind = BackendKind.MOCK

    def __init__(self, lexicons: Lexicons | None = None):
        self.lexicons = lexicons or default_lexicons()

    def complete(self, prompt: str, *, support_set_id: str | None = None) -> str:
        query = _query_from_prompt(prompt)
        rule = _rule_from_prompt(prompt)
        return " " + mock_translate(rule, query, self.lexicons)


class ReplayBackend(GenerationBackend):
    """Returns recorded outputs keyed by (support set id, query)."""

    kind = BackendKind.REPLAY

    def __init__(self, recordings: Mapping[tuple[str, str], str]):
        self._recordings = dict(recordings)

    def complete(self, prompt: str, *, support_set_id: str | None = None) -> str:
        query = _query_from_prompt(prompt)
        key = (support_set_id or "", normalize_whitespace(query))
        if key not in self._recordings:
            raise ReplayMiss(support_set_id, query)
        return self._recordings[key]


class HttpBackend(GenerationBackend):
    """Single-request client for completion-style inference servers."""

    kind = BackendKind.HTTP

    def __init__(self, config: GenerationBackendConfig):
        if config.endpoint_url is None:
            raise ValueError("http backend requires endpoint_url")
        self.config = config

    def complete(self, prompt: str, *, support_set_id: str | None = None) -> str:
        attempts = 2  # one retry on timeout, none on rejection
        for attempt in range(attempts):
            try:
                return self._request(prompt)
            except BackendTimeout:
                if attempt == attempts - 1:
                    raise
        raise BackendTimeout("unreachable")

    def _request(self, prompt: str) -> str:
        cfg = self.config
        payload = {
            cfg.prompt_field: prompt,
            cfg.max_tokens_field: cfg.max_output_tokens,
            cfg.stop_field: list(cfg.stop_sequences),
        }
        payload.update(dict(cfg.decoding_params))
        headers = {}
        if cfg.api_key:
            headers[cfg.auth_header] = f"Bearer {cfg.api_key}"
        try:
            response = httpx.post(
                cfg.endpoint_url, json=payload, headers=headers, timeout=cfg.timeout
            )
        except httpx.TimeoutException as exc:
            raise BackendTimeout(str(exc)) from exc
        except httpx.HTTPError as exc:
            raise TransportError(str(exc)) from exc
        if response.status_code >= 400:
            raise BackendRejected(response.status_code, response.text)
        body = response.json()
        return _continuation_from_body(body, cfg.response_field)


def _continuation_from_body(body: object, response_field: str) -> str:
    if isinstance(body, dict):
        if response_field in body and isinstance(body[response_field], str):
            return body[response_field]
        choices = body.get("choices")
        if isinstance(choices, list) and choices:
            first = choices[0]
            if isinstance(first, dict) and isinstance(first.get(response_field), str):
                return first[response_field]
    raise TransportError("response carries no continuation text")


def _query_from_prompt(prompt: str) -> str:
    marker = f"\n{PROMPT_INSTRUCTION}\nInput: "
    at = prompt.rfind(marker)
    if at < 0:
        raise ValueError("prompt does not end with a query block")
    tail = prompt[at + len(marker) :]
    if not tail.endswith("\nDSL:"):
        raise ValueError("prompt does not end with a query block")
    return tail[: -len("\nDSL:")]


def _rule_from_prompt(prompt: str) -> RuleKind:
    m = re.search(r"\nDSL: (.+)", prompt)
    if m is None:
        raise ValueError("prompt carries no example DSL line")
    example = m.group(1)
    if example.startswith(dsl.IF_KEYWORD):
        return RuleKind.IF_THEN
    if dsl.MUST_KEYWORD in example:
        return RuleKind.MODAL_VERB
    return RuleKind.EXPRESSION


def make_backend(
    config: GenerationBackendConfig,
    *,
    recordings: Mapping[tuple[str, str], str] | None = None,
    lexicons: Lexicons | None = None,
) -> GenerationBackend:
    if config.kind is BackendKind.MOCK:
        return MockBackend(lexicons)
    if config.kind is BackendKind.REPLAY:
        if recordings is None:
            from .corpus import load_bundled_corpus

            recordings = load_bundled_corpus().replay_outputs()
        return ReplayBackend(recordings)
    return HttpBackend(config)


def generate(
    backend: GenerationBackend | GenerationBackendConfig,
    prompt: str,
    *,
    support_set_id: str | None = None,
    recordings: Mapping[tuple[str, str], str] | None = None,
    stop_sequences: tuple[str, ...] = DEFAULT_STOP_SEQUENCES,
) -> str:
    """One backend invocation: raw continuation, truncated and trimmed."""
    if isinstance(backend, GenerationBackendConfig):
        stop_sequences = backend.stop_sequences
        backend = make_backend(backend, recordings=recordings)
    raw = backend.complete(prompt, support_set_id=support_set_id)
    return _postprocess(raw, stop_sequences)


def _postprocess(raw: str, stop_sequences: Iterable[str]) -> str:
    cut = len(raw)
    for stop in stop_sequences:
        at = raw.find(stop)
        if at >= 0:
            cut = min(cut, at)
    return raw[:cut].lstrip()


SetSelector = Callable[[RuleKind], SupportSet]


def translate(
    requirement: Requirement,
    rules: Iterable[RuleKind],
    set_selector: SetSelector | Mapping[RuleKind, SupportSet],
    backend: GenerationBackend | GenerationBackendConfig,
    *,
    recordings: Mapping[tuple[str, str], str] | None = None,
    lexicons: Lexicons | None = None,
) -> list[TranslationResult]:
    """Cascaded translation: each stage's output is the next stage's query."""
    rules = list(rules)
    if not rules:
        return []
    if isinstance(backend, GenerationBackendConfig):
        stop_sequences = backend.stop_sequences
        backend = make_backend(backend, recordings=recordings, lexicons=lexicons)
    else:
        stop_sequences = DEFAULT_STOP_SEQUENCES

    results: list[TranslationResult] = []
    current = requirement.text
    for stage, rule in enumerate(rules):
        support_set = (
            set_selector(rule) if callable(set_selector) else set_selector[rule]
        )
        if support_set.rule is not rule:
            raise ValueError(
                f"support set {support_set.id!r} targets {support_set.rule.value}, "
                f"not {rule.value}"
            )
        prompt = build_prompt(support_set, current)
        started = time.perf_counter()
        try:
            raw = backend.complete(prompt, support_set_id=support_set.id)
        except BackendError as error:
            raise TranslationStageError(stage, rule, error) from error
        output = _postprocess(raw, stop_sequences)
        results.append(
            TranslationResult(
                source=requirement,
                rule=rule,
                output=output,
                backend_kind=backend.kind.value,
                support_set_id=support_set.id,
                prompt_hash=prompt_hash(prompt),
                latency=time.perf_counter() - started,
            )
        )
        current = output
    return results


def ordered_rules(applicable: set[RuleKind]) -> list[RuleKind]:
    """Classification sets are unordered; the cascade runs in a fixed order."""
    return [rule for rule in RULE_ORDER if rule in applicable]


def validate_support_set(support_set: SupportSet, lexicons: Lexicons | None = None) -> None:
    """Every DSL side must conform to the owning set's rule."""
    lex = lexicons or default_lexicons()
    for index, pair in enumerate(support_set.pairs):
        if not dsl_side_conformant(pair.dsl, support_set.rule, lex):
            raise ValueError(
                f"support set {support_set.id!r} pair {index} DSL side does not "
                f"conform to rule {support_set.rule.value}: {pair.dsl!r}"
            )


def dsl_side_conformant(text: str, rule: RuleKind, lexicons: Lexicons | None = None) -> bool:
    lex = lexicons or default_lexicons()
    if rule is RuleKind.IF_THEN:
        diags = dsl.check_if_then(text, lex)
    elif rule is RuleKind.MODAL_VERB:
        diags = dsl.check_modal(text, lex)
    else:
        diags = dsl.check_expression_keywords(text, lex)
    return aggregate_severity(diags) is Severity.CONFORMANT
