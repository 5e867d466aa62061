"""reqdsl: a toolkit for a structured-requirements DSL.

Validates requirement sentences against three formulation rules (trigger/
action structure, MUST enforcement, comparison keywords), translates
unstructured requirements into the DSL via few-shot prompts over pluggable
generation backends, extracts comparison constraints for consistency
checking, and grades translation quality on a six-class scale.
"""

from .constraints import (
    check_consistency,
    extract_constraints,
    render_formula,
    scan_comparators,
)
from .corpus import (
    CorpusStore,
    DuplicateIdError,
    MalformedRecordError,
    ReplayRecord,
    load_bundled_corpus,
    load_corpus,
    save_corpus,
)
from .dsl import (
    analyze,
    check_expression_keywords,
    check_if_then,
    check_modal,
    classify,
    parse_if_then,
    render_if_then,
)
from .experiments import (
    ClassHistogram,
    ExperimentOutcome,
    ExperimentSpec,
    GradingMode,
    emit_report,
    run_bundled_experiments,
    run_experiment,
)
from .fewshot import (
    BackendKind,
    BackendRejected,
    BackendTimeout,
    EmptySupportSetError,
    GenerationBackendConfig,
    ReplayMiss,
    SupportPair,
    SupportSet,
    TranslationResult,
    TransportError,
    build_prompt,
    generate,
    mock_translate,
    prompt_hash,
    translate,
)
from .grading import (
    GradeClass,
    GradedTranslation,
    GradeProvenance,
    grade_auto,
    ingest_labels,
)
from .lexicons import Lexicons, default_lexicons
from .types import (
    ComparisonOp,
    ConsistencyFinding,
    Constraint,
    Diagnostic,
    DslDocumentAnalysis,
    FindingKind,
    IfThenParseError,
    IfThenReq,
    ParseFailureCode,
    Requirement,
    RuleKind,
    Severity,
    Source,
)

__version__ = "0.1.0"

__all__ = [
    "BackendKind",
    "BackendRejected",
    "BackendTimeout",
    "ClassHistogram",
    "ComparisonOp",
    "ConsistencyFinding",
    "Constraint",
    "CorpusStore",
    "Diagnostic",
    "DslDocumentAnalysis",
    "DuplicateIdError",
    "EmptySupportSetError",
    "ExperimentOutcome",
    "ExperimentSpec",
    "FindingKind",
    "GenerationBackendConfig",
    "GradeClass",
    "GradeProvenance",
    "GradedTranslation",
    "GradingMode",
    "IfThenParseError",
    "IfThenReq",
    "Lexicons",
    "MalformedRecordError",
    "ParseFailureCode",
    "ReplayMiss",
    "ReplayRecord",
    "Requirement",
    "RuleKind",
    "Severity",
    "Source",
    "SupportPair",
    "SupportSet",
    "TranslationResult",
    "TransportError",
    "analyze",
    "build_prompt",
    "check_consistency",
    "check_expression_keywords",
    "check_if_then",
    "check_modal",
    "classify",
    "default_lexicons",
    "emit_report",
    "extract_constraints",
    "generate",
    "grade_auto",
    "ingest_labels",
    "load_bundled_corpus",
    "load_corpus",
    "mock_translate",
    "parse_if_then",
    "prompt_hash",
    "render_formula",
    "render_if_then",
    "run_bundled_experiments",
    "run_experiment",
    "save_corpus",
    "scan_comparators",
    "translate",
]
