"""HTTP facade over validation, translation, extraction, and the corpus.

Compute endpoints are stateless: responses depend only on the request body,
the immutable configuration, and the current corpus snapshot.  Every error
response carries a machine code from :data:`ERROR_CODES`.
"""

from __future__ import annotations

import os
from decimal import Decimal
from pathlib import Path
from typing import Iterable

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import constraints as constraint_engine
from . import dsl
from .corpus import CorpusStore, DuplicateIdError, load_bundled_corpus, save_corpus
from .fewshot import (
    BackendError,
    BackendKind,
    BackendTimeout,
    GenerationBackendConfig,
    SupportPair,
    SupportSet,
    TranslationStageError,
    ordered_rules,
    translate,
    validate_support_set,
)
from .grading import grade_auto
from .lexicons import Lexicons, default_lexicons
from .types import (
    ConsistencyFinding,
    Constraint,
    Diagnostic,
    DslDocumentAnalysis,
    Requirement,
    RuleKind,
    Source,
)

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 8642

# the closed set of machine error codes
ERROR_CODES = frozenset(
    {
        "parse_error",
        "unknown_set",
        "unknown_id",
        "duplicate_id",
        "backend_error",
        "backend_timeout",
        "unauthorized",
    }
)

# largest bundled set per rule; explicit ids in the request override these
DEFAULT_SUPPORT_SETS = {
    RuleKind.IF_THEN: "ifthen-6",
    RuleKind.MODAL_VERB: "modal-6",
    RuleKind.EXPRESSION: "expr-8",
}


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: object = None):
        assert code in ERROR_CODES, code
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail

    def response(self) -> JSONResponse:
        body: dict[str, object] = {"code": self.code, "message": self.message}
        if self.detail is not None:
            body["detail"] = self.detail
        return JSONResponse(status_code=self.status, content=body)


# ---------------------------------------------------------------------------
# serialization helpers


def _diagnostic_payload(diag: Diagnostic) -> dict:
    return {
        "rule": diag.rule.value,
        "severity": diag.severity.value,
        "span": list(diag.span),
        "message": diag.message,
        "fix_hint": diag.fix_hint,
    }


def _constraint_payload(constraint: Constraint) -> dict:
    value: object = constraint.value
    if isinstance(value, Decimal):
        value = float(value)
    return {
        "variable": constraint.variable,
        "op": constraint.op.symbol,
        "op_keyword": constraint.op.keyword,
        "value": value,
        "value_text": constraint.value_text,
        "unit": constraint.unit,
        "source_requirement": constraint.source_requirement,
        "span": list(constraint.span),
        "rendered": constraint_engine.render_formula(constraint),
    }


def _analysis_payload(analysis: DslDocumentAnalysis) -> dict:
    return {
        "requirement_id": analysis.requirement_id,
        "per_rule": {
            rule.value: [_diagnostic_payload(d) for d in diags]
            for rule, diags in analysis.per_rule.items()
        },
        "if_then": (
            None
            if analysis.if_then is None
            else {"trigger": analysis.if_then.trigger, "action": analysis.if_then.action}
        ),
        "constraints": [_constraint_payload(c) for c in analysis.constraints],
        "classification": sorted(rule.value for rule in analysis.classification),
        "notes": list(analysis.notes),
    }


def _finding_payload(finding: ConsistencyFinding) -> dict:
    return {
        "kind": finding.kind.value,
        "variable": finding.variable,
        "explanation": finding.explanation,
        "constraints": [_constraint_payload(c) for c in finding.constraints],
    }


def _require_text(body: object, field: str = "text") -> str:
    if not isinstance(body, dict) or field not in body or not isinstance(body[field], str):
        raise ApiError(400, "parse_error", f"request body must carry a string {field!r} field")
    return body[field]


# ---------------------------------------------------------------------------
# app factory


def create_app(
    corpus: CorpusStore | None = None,
    *,
    corpus_path: Path | str | None = None,
    lexicons: Lexicons | None = None,
    token: str | None = None,
    ui_dir: Path | str | None = None,
) -> FastAPI:
    """Build the service; ``corpus_path`` enables persistent corpus mutations."""
    lex = lexicons or default_lexicons()
    store = corpus or load_bundled_corpus(lex)
    auth_token = token if token is not None else os.environ.get("REQDSL_TOKEN")

    app = FastAPI(title="reqdsl", version="0.1.0", docs_url=None, redoc_url=None)

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, error: ApiError):
        return error.response()

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(_request: Request, error: RequestValidationError):
        return ApiError(400, "parse_error", "malformed request body").response()

    @app.middleware("http")
    async def check_token(request: Request, call_next):
        if auth_token and request.url.path.startswith("/v1"):
            header = request.headers.get("Authorization", "")
            if header != f"Bearer {auth_token}":
                return ApiError(401, "unauthorized", "missing or invalid token").response()
        return await call_next(request)

    def persist() -> None:
        if corpus_path is not None:
            save_corpus(store, corpus_path)

    # -- compute endpoints -------------------------------------------------

    @app.post("/v1/validate")
    async def validate(request: Request):
        body = await _json_body(request)
        text = _require_text(body)
        analysis = dsl.analyze(text, lex, requirement_id=str(body.get("id", "draft")))
        return _analysis_payload(analysis)

    @app.post("/v1/translate")
    async def translate_endpoint(request: Request):
        body = await _json_body(request)
        text = _require_text(body)
        if not text.strip():
            return {"stages": []}

        if isinstance(body.get("rules"), list):
            try:
                rules = [RuleKind.parse(str(r)) for r in body["rules"]]
            except ValueError as exc:
                raise ApiError(400, "parse_error", str(exc)) from exc
        else:
            rules = ordered_rules(dsl.classify(text, lex))
        if not rules:
            return {"stages": []}

        set_ids = dict(DEFAULT_SUPPORT_SETS)
        overrides = body.get("support_set_ids")
        if isinstance(overrides, dict):
            for key, value in overrides.items():
                set_ids[RuleKind.parse(str(key))] = str(value)
        elif isinstance(overrides, list):
            for value in overrides:
                support_set = store.get_support_set(str(value))
                if support_set is None:
                    raise ApiError(404, "unknown_set", f"unknown support set {value!r}")
                set_ids[support_set.rule] = support_set.id

        selector: dict[RuleKind, SupportSet] = {}
        for rule in rules:
            support_set = store.get_support_set(set_ids[rule])
            if support_set is None:
                raise ApiError(404, "unknown_set", f"unknown support set {set_ids[rule]!r}")
            selector[rule] = support_set

        backend_config = _backend_config(body.get("backend"))
        requirement = Requirement(id=str(body.get("id", "draft")), text=text)
        try:
            results = translate(
                requirement,
                rules,
                selector,
                backend_config,
                recordings=store.replay_outputs(),
                lexicons=lex,
            )
        except TranslationStageError as error:
            if isinstance(error.cause, BackendTimeout):
                raise ApiError(
                    504, "backend_timeout", str(error), detail={"stage": error.stage}
                ) from error
            raise ApiError(
                502, "backend_error", str(error), detail={"stage": error.stage}
            ) from error
        except BackendError as error:
            raise ApiError(502, "backend_error", str(error)) from error

        stages = []
        for result in results:
            graded = grade_auto(
                result.source.text if not stages else stages[-1]["output"],
                result.output,
                result.rule,
                lex,
            )
            stages.append(
                {
                    "rule": result.rule.value,
                    "output": result.output,
                    "support_set_id": result.support_set_id,
                    "prompt_hash": result.prompt_hash,
                    "auto_grade": graded.grade.value,
                }
            )
        return {"stages": stages}

    @app.post("/v1/extract")
    async def extract_endpoint(request: Request):
        body = await _json_body(request)
        text = _require_text(body)
        extraction = constraint_engine.extract(text, lex, str(body.get("id", "draft")))
        return {"constraints": [_constraint_payload(c) for c in extraction.constraints]}

    @app.post("/v1/consistency")
    async def consistency_endpoint(request: Request):
        body = await _json_body(request)
        if not isinstance(body, dict):
            raise ApiError(400, "parse_error", "request body must be a map")
        constraints: list[Constraint] = []
        if isinstance(body.get("requirement_ids"), list):
            for requirement_id in body["requirement_ids"]:
                requirement = store.get_requirement(str(requirement_id))
                if requirement is None:
                    raise ApiError(
                        404, "unknown_id", f"unknown requirement {requirement_id!r}"
                    )
                constraints.extend(constraint_engine.extract_constraints(requirement, lex))
        elif isinstance(body.get("texts"), list):
            for index, text in enumerate(body["texts"]):
                requirement = Requirement(id=f"text-{index}", text=str(text))
                constraints.extend(constraint_engine.extract_constraints(requirement, lex))
        else:
            for requirement in store.all_requirements():
                constraints.extend(constraint_engine.extract_constraints(requirement, lex))
        findings = constraint_engine.check_consistency(constraints)
        return {"findings": [_finding_payload(f) for f in findings]}

    # -- corpus endpoints ----------------------------------------------------

    @app.get("/v1/requirements")
    async def list_requirements(set: str | None = None):
        sets: Iterable[tuple[str, list[Requirement]]]
        if set is not None:
            if set not in store.requirement_sets:
                raise ApiError(404, "unknown_id", f"unknown requirement set {set!r}")
            sets = [(set, store.requirement_sets[set])]
        else:
            sets = store.requirement_sets.items()
        return {
            "requirements": [
                {
                    "id": r.id,
                    "text": r.text,
                    "source": r.source.value,
                    "tags": list(r.tags),
                    "set": set_id,
                }
                for set_id, requirements in sets
                for r in requirements
            ]
        }

    @app.get("/v1/requirements/{requirement_id}")
    async def get_requirement(requirement_id: str):
        requirement = store.get_requirement(requirement_id)
        if requirement is None:
            raise ApiError(404, "unknown_id", f"unknown requirement {requirement_id!r}")
        return {
            "id": requirement.id,
            "text": requirement.text,
            "source": requirement.source.value,
            "tags": list(requirement.tags),
        }

    @app.post("/v1/requirements")
    async def add_requirement(request: Request):
        body = await _json_body(request)
        text = _require_text(body)
        if "id" not in body:
            raise ApiError(400, "parse_error", "requirement needs an 'id' field")
        try:
            requirement = Requirement(
                id=str(body["id"]),
                text=text,
                source=Source(body.get("source", "legacy")),
                tags=tuple(body.get("tags", ())),
            )
        except ValueError as exc:
            raise ApiError(400, "parse_error", str(exc)) from exc
        try:
            store.add_requirement(str(body.get("set", "user")), requirement)
        except DuplicateIdError as exc:
            raise ApiError(409, "duplicate_id", str(exc)) from exc
        persist()
        return JSONResponse(status_code=201, content={"id": requirement.id})

    @app.get("/v1/support-sets")
    async def list_support_sets():
        return {
            "support_sets": [
                {
                    "id": s.id,
                    "rule": s.rule.value,
                    "size": len(s.pairs),
                    "provenance": s.provenance.value,
                }
                for s in store.support_sets.values()
            ]
        }

    @app.get("/v1/support-sets/{set_id}")
    async def get_support_set(set_id: str):
        support_set = store.get_support_set(set_id)
        if support_set is None:
            raise ApiError(404, "unknown_set", f"unknown support set {set_id!r}")
        return {
            "id": support_set.id,
            "rule": support_set.rule.value,
            "provenance": support_set.provenance.value,
            "pairs": [{"input": p.input, "dsl": p.dsl} for p in support_set.pairs],
        }

    @app.post("/v1/support-sets")
    async def add_support_set(request: Request):
        body = await _json_body(request)
        if not isinstance(body, dict):
            raise ApiError(400, "parse_error", "request body must be a map")
        try:
            support_set = SupportSet(
                id=str(body["id"]),
                rule=RuleKind.parse(str(body["rule"])),
                pairs=tuple(
                    SupportPair(input=str(p["input"]), dsl=str(p["dsl"]))
                    for p in body.get("pairs", ())
                ),
            )
            validate_support_set(support_set, lex)
        except (KeyError, ValueError, TypeError) as exc:
            raise ApiError(400, "parse_error", str(exc)) from exc
        try:
            store.add_support_set(support_set)
        except DuplicateIdError as exc:
            raise ApiError(409, "duplicate_id", str(exc)) from exc
        persist()
        return JSONResponse(status_code=201, content={"id": support_set.id})

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception as exc:
        raise ApiError(400, "parse_error", "request body is not valid JSON") from exc
    if not isinstance(body, dict):
        raise ApiError(400, "parse_error", "request body must be a map")
    return body


def _backend_config(payload: object) -> GenerationBackendConfig:
    if payload is None:
        return GenerationBackendConfig.from_env()
    if isinstance(payload, str):
        try:
            return GenerationBackendConfig(kind=BackendKind(payload))
        except ValueError as exc:
            raise ApiError(400, "parse_error", f"unknown backend kind {payload!r}") from exc
    if isinstance(payload, dict):
        data = dict(payload)
        try:
            kind = BackendKind(data.pop("kind", "mock"))
            if "stop_sequences" in data:
                data["stop_sequences"] = tuple(data["stop_sequences"])
            if "decoding_params" in data:
                data["decoding_params"] = tuple(sorted(dict(data["decoding_params"]).items()))
            return GenerationBackendConfig(kind=kind, **data)
        except (TypeError, ValueError) as exc:
            raise ApiError(400, "parse_error", f"invalid backend config: {exc}") from exc
    raise ApiError(400, "parse_error", "backend must be a kind string or a config map")
