"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 backend error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import constraints as constraint_engine
from . import dsl
from .corpus import CorpusError, load_bundled_corpus, load_corpus, save_corpus
from .experiments import (
    ExperimentError,
    GradingMode,
    bundled_experiment_specs,
    emit_report,
    load_experiment_specs,
    run_experiment,
)
from .fewshot import (
    BackendError,
    BackendKind,
    GenerationBackendConfig,
    translate,
)
from .lexicons import default_lexicons, lexicons_from_dir
from .service import DEFAULT_HOST, DEFAULT_PORT, create_app
from .types import Requirement, RuleKind, Severity

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_BACKEND = 3


class DataError(click.ClickException):
    exit_code = EXIT_DATA


def _read_texts(source: str) -> list[str]:
    if source == "-":
        raw = sys.stdin.read()
    else:
        path = Path(source)
        if not path.exists():
            raise DataError(f"no such file: {source}")
        raw = path.read_text(encoding="utf-8")
    return [line for line in raw.splitlines() if line.strip()]


def _lexicons(lexicon_dir: str | None):
    if lexicon_dir:
        return lexicons_from_dir(lexicon_dir)
    return default_lexicons()


@click.group()
@click.option("--lexicon-dir", type=click.Path(), default=None, help="Directory with override lexicon files.")
@click.pass_context
def cli(ctx: click.Context, lexicon_dir: str | None) -> None:
    """Structured-requirements DSL toolkit."""
    ctx.obj = {"lexicons": _lexicons(lexicon_dir)}


@cli.command()
@click.argument("source")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
def validate(ctx: click.Context, source: str, fmt: str) -> None:
    """Validate requirements from FILE (or '-' for stdin), one per line."""
    lex = ctx.obj["lexicons"]
    exit_code = 0
    for index, text in enumerate(_read_texts(source), start=1):
        analysis = dsl.analyze(Requirement(id=f"line-{index}", text=text), lex)
        if fmt == "json":
            from .service import _analysis_payload

            click.echo(json.dumps(_analysis_payload(analysis), ensure_ascii=False))
            continue
        click.echo(f"[{index}] {text}")
        for rule, diags in analysis.per_rule.items():
            for diag in diags:
                if diag.severity is Severity.CONFORMANT:
                    continue
                snippet = text[diag.span[0] : diag.span[1]]
                hint = f" -> {diag.fix_hint}" if diag.fix_hint else ""
                click.echo(
                    f"    {rule.value}: {diag.severity.value} at {diag.span} "
                    f"{snippet!r}: {diag.message}{hint}"
                )
    sys.exit(exit_code)


@cli.command("translate")
@click.option("--rule", "rules", multiple=True, help="Rule(s) to apply, in order; default: classify.")
@click.option("--set", "set_ids", multiple=True, help="Support set id(s) to use.")
@click.option("--backend", default="mock", help="Backend kind: mock, replay, or http.")
@click.option("--text", default=None, help="Requirement text; default: read stdin.")
@click.pass_context
def translate_cmd(
    ctx: click.Context,
    rules: tuple[str, ...],
    set_ids: tuple[str, ...],
    backend: str,
    text: str | None,
) -> None:
    """Translate one requirement into the DSL."""
    lex = ctx.obj["lexicons"]
    if text is None:
        text = sys.stdin.read().strip()
    if not text:
        raise click.UsageError("no input text")

    corpus = load_bundled_corpus(lex)
    try:
        kind = BackendKind(backend)
    except ValueError:
        raise click.UsageError(f"unknown backend kind {backend!r}")
    config = (
        GenerationBackendConfig.from_env()
        if kind is BackendKind.HTTP
        else GenerationBackendConfig(kind=kind)
    )

    rule_list = (
        [RuleKind.parse(r) for r in rules]
        if rules
        else [r for r in (RuleKind.IF_THEN, RuleKind.MODAL_VERB, RuleKind.EXPRESSION) if r in dsl.classify(text, lex)]
    )
    if not rule_list:
        click.echo(text)
        return

    defaults = {RuleKind.IF_THEN: "ifthen-6", RuleKind.MODAL_VERB: "modal-6", RuleKind.EXPRESSION: "expr-8"}
    selector = {}
    explicit = list(set_ids)
    for rule in rule_list:
        set_id = None
        for candidate in explicit:
            candidate_set = corpus.get_support_set(candidate)
            if candidate_set is None:
                raise DataError(f"unknown support set {candidate!r}")
            if candidate_set.rule is rule:
                set_id = candidate
        support_set = corpus.get_support_set(set_id or defaults[rule])
        if support_set is None:
            raise DataError(f"no support set for rule {rule.value}")
        selector[rule] = support_set

    try:
        results = translate(
            Requirement(id="cli", text=text),
            rule_list,
            selector,
            config,
            recordings=corpus.replay_outputs(),
            lexicons=lex,
        )
    except BackendError as error:
        click.echo(f"backend error: {error}", err=True)
        sys.exit(EXIT_BACKEND)

    for result in results:
        click.echo(f"[{result.rule.value} via {result.support_set_id}]")
        click.echo(result.output)


@cli.command()
@click.argument("source")
@click.option("--style", type=click.Choice(["mathematical", "keyword"]), default="mathematical")
@click.pass_context
def extract(ctx: click.Context, source: str, style: str) -> None:
    """Extract comparison constraints from FILE (or '-'), one text per line."""
    lex = ctx.obj["lexicons"]
    for index, text in enumerate(_read_texts(source), start=1):
        constraints = constraint_engine.extract_constraints(
            Requirement(id=f"line-{index}", text=text), lex
        )
        for constraint in constraints:
            click.echo(constraint_engine.render_formula(constraint, style))


@cli.command("check-consistency")
@click.argument("corpus_dir")
@click.pass_context
def check_consistency_cmd(ctx: click.Context, corpus_dir: str) -> None:
    """Check every requirement in a corpus directory for contradictions."""
    lex = ctx.obj["lexicons"]
    try:
        store = load_bundled_corpus(lex) if corpus_dir == "bundled" else load_corpus(corpus_dir, lex)
    except (CorpusError, OSError) as error:
        raise DataError(str(error))
    constraints = []
    for requirement in store.all_requirements():
        constraints.extend(constraint_engine.extract_constraints(requirement, lex))
    findings = constraint_engine.check_consistency(constraints)
    for finding in findings:
        ids = ", ".join(
            sorted({c.source_requirement or "?" for c in finding.constraints})
        )
        click.echo(f"{finding.kind.value}: {finding.variable} [{ids}] {finding.explanation}")
    if not findings:
        click.echo("no findings")


@cli.command()
@click.option("--spec", "spec_path", type=click.Path(), default=None, help="Experiment spec JSON file.")
@click.option("--bundled", is_flag=True, help="Run the bundled replay suite.")
@click.option("--grading", type=click.Choice(["auto", "labels", "both"]), default=None)
@click.option("--format", "fmt", type=click.Choice(["table_text", "machine"]), default="table_text")
@click.option("--corpus", "corpus_dir", type=click.Path(), default=None, help="Corpus directory; default bundled.")
@click.pass_context
def experiment(
    ctx: click.Context,
    spec_path: str | None,
    bundled: bool,
    grading: str | None,
    fmt: str,
    corpus_dir: str | None,
) -> None:
    """Run translation experiments and print the class-histogram report."""
    lex = ctx.obj["lexicons"]
    if not spec_path and not bundled:
        raise click.UsageError("pass --spec FILE or --bundled")
    try:
        specs = bundled_experiment_specs() if bundled else load_experiment_specs(spec_path)
        store = load_bundled_corpus(lex) if corpus_dir is None else load_corpus(corpus_dir, lex)
        outcomes = []
        for spec in specs:
            if grading is not None:
                from dataclasses import replace

                spec = replace(spec, grading=GradingMode(grading))
            outcomes.append(run_experiment(spec, store, lexicons=lex))
    except (ExperimentError, CorpusError, OSError, json.JSONDecodeError, KeyError) as error:
        raise DataError(str(error))
    except BackendError as error:
        click.echo(f"backend error: {error}", err=True)
        sys.exit(EXIT_BACKEND)
    sys.stdout.buffer.write(emit_report(outcomes, fmt))


@cli.group()
def corpus() -> None:
    """Corpus store operations."""


@corpus.command("load")
@click.argument("corpus_dir")
@click.pass_context
def corpus_load(ctx: click.Context, corpus_dir: str) -> None:
    """Load and validate a corpus directory."""
    lex = ctx.obj["lexicons"]
    try:
        store = load_bundled_corpus(lex) if corpus_dir == "bundled" else load_corpus(corpus_dir, lex)
    except (CorpusError, OSError, ValueError) as error:
        raise DataError(str(error))
    click.echo(
        f"{sum(len(v) for v in store.requirement_sets.values())} requirements, "
        f"{len(store.support_sets)} support sets, "
        f"{len(store.recordings)} recordings"
    )


@corpus.command("save")
@click.argument("corpus_dir")
@click.argument("destination")
@click.pass_context
def corpus_save(ctx: click.Context, corpus_dir: str, destination: str) -> None:
    """Copy a corpus directory through the store (load then save)."""
    lex = ctx.obj["lexicons"]
    try:
        store = load_bundled_corpus(lex) if corpus_dir == "bundled" else load_corpus(corpus_dir, lex)
        save_corpus(store, destination)
    except (CorpusError, OSError, ValueError) as error:
        raise DataError(str(error))
    click.echo(f"saved to {destination}")


@corpus.command("list")
@click.argument("corpus_dir")
@click.option("--kind", type=click.Choice(["requirements", "support-sets", "recordings"]), default="requirements")
@click.pass_context
def corpus_list(ctx: click.Context, corpus_dir: str, kind: str) -> None:
    """List records of one kind from a corpus directory."""
    lex = ctx.obj["lexicons"]
    try:
        store = load_bundled_corpus(lex) if corpus_dir == "bundled" else load_corpus(corpus_dir, lex)
    except (CorpusError, OSError, ValueError) as error:
        raise DataError(str(error))
    if kind == "requirements":
        for set_id, requirements in store.requirement_sets.items():
            for requirement in requirements:
                click.echo(f"{set_id}/{requirement.id}: {requirement.text}")
    elif kind == "support-sets":
        for support_set in store.support_sets.values():
            click.echo(
                f"{support_set.id} ({support_set.rule.value}, {len(support_set.pairs)} pairs)"
            )
    else:
        for record in store.recordings:
            label = f" class={record.human_class}" if record.human_class else ""
            click.echo(f"{record.support_set_id}: {record.query[:60]}...{label}")


@cli.command()
@click.option("--host", default=DEFAULT_HOST)
@click.option("--port", default=DEFAULT_PORT, type=int)
@click.option("--corpus", "corpus_dir", type=click.Path(), default=None)
@click.option("--ui-dir", type=click.Path(), default=None, help="Static editor assets to serve at /.")
@click.pass_context
def serve(
    ctx: click.Context,
    host: str,
    port: int,
    corpus_dir: str | None,
    ui_dir: str | None,
) -> None:
    """Run the HTTP service (default 127.0.0.1:8642)."""
    import uvicorn

    lex = ctx.obj["lexicons"]
    try:
        store = None if corpus_dir is None else load_corpus(corpus_dir, lex)
    except (CorpusError, OSError, ValueError) as error:
        raise DataError(str(error))
    app = create_app(store, corpus_path=corpus_dir, lexicons=lex, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.UsageError as error:
        click.echo(f"usage error: {error.format_message()}", err=True)
        sys.exit(EXIT_USAGE)
    except click.ClickException as error:
        error.show()
        sys.exit(error.exit_code)
    except click.exceptions.Abort:
        sys.exit(EXIT_USAGE)


if __name__ == "__main__":
    main()
