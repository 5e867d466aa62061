from __future__ import annotations

import json

import pytest

from reqdsl import (
    BackendKind,
    ClassHistogram,
    ExperimentSpec,
    GenerationBackendConfig,
    GradeClass,
    GradingMode,
    Requirement,
    RuleKind,
    emit_report,
    run_bundled_experiments,
    run_experiment,
)
from reqdsl.corpus import CorpusStore
from reqdsl.experiments import (
    DisjointnessError,
    ExperimentError,
    bundled_experiment_specs,
    validate_experiment,
)


def replay_spec(rule, support_set_id, test_set_id, grading=GradingMode.LABELS):
    return ExperimentSpec(
        rule=rule,
        support_set_id=support_set_id,
        test_set_id=test_set_id,
        backend=GenerationBackendConfig(kind=BackendKind.REPLAY),
        grading=grading,
    )


class TestHistogram:
    def test_counts_sum_to_total(self):
        histogram = ClassHistogram.from_grades(
            [GradeClass.PERFECT, GradeClass.PERFECT, GradeClass.RULE_NOT_IMPLEMENTED]
        )
        assert histogram.counts == (2, 0, 0, 0, 1, 0)
        assert histogram.total == 3

    def test_failed_bucket_separate(self):
        histogram = ClassHistogram.from_grades([GradeClass.PERFECT], failed=2)
        assert histogram.total == 1
        assert histogram.failed == 2


class TestRunExperiment:
    def test_if_then_size_6_row(self, corpus):
        outcome = run_experiment(replay_spec(RuleKind.IF_THEN, "ifthen-6", "ifthen-test"), corpus)
        assert outcome.histogram.counts == (6, 3, 0, 0, 0, 2)
        assert outcome.histogram.total == 11

    def test_modal_size_1_row(self, corpus):
        outcome = run_experiment(replay_spec(RuleKind.MODAL_VERB, "modal-1", "modal-test"), corpus)
        assert outcome.histogram.counts == (3, 0, 0, 0, 5, 0)
        assert outcome.histogram.total == 8

    def test_empty_test_set(self, corpus):
        store = CorpusStore(
            requirement_sets={"empty": []},
            support_sets=dict(corpus.support_sets),
            recordings=list(corpus.recordings),
        )
        outcome = run_experiment(replay_spec(RuleKind.MODAL_VERB, "modal-1", "empty"), store)
        assert outcome.histogram.counts == (0, 0, 0, 0, 0, 0)
        assert outcome.histogram.total == 0

    def test_both_grading_reports_agreement(self, corpus):
        spec = replay_spec(RuleKind.MODAL_VERB, "modal-6", "modal-test", GradingMode.BOTH)
        outcome = run_experiment(spec, corpus)
        assert outcome.agreement == 1.0  # every modal row auto-grades to its label
        assert outcome.histogram.counts == (6, 0, 0, 0, 2, 0)

    def test_unknown_support_set(self, corpus):
        with pytest.raises(ExperimentError):
            run_experiment(replay_spec(RuleKind.MODAL_VERB, "nope", "modal-test"), corpus)

    def test_rows_carry_results(self, corpus):
        outcome = run_experiment(replay_spec(RuleKind.MODAL_VERB, "modal-6", "modal-test"), corpus)
        for row in outcome.rows:
            assert row.error is None
            assert row.result is not None
            assert row.result.prompt_hash


class TestDisjointness:
    def test_overlap_is_rejected(self, corpus):
        store = CorpusStore(
            requirement_sets={
                "bad": [
                    Requirement(
                        id="bad-1",
                        text="The duration of a flashing cycle is 1 second.",
                    )
                ]
            },
            support_sets=dict(corpus.support_sets),
            recordings=list(corpus.recordings),
        )
        spec = replay_spec(RuleKind.MODAL_VERB, "modal-4", "bad")
        with pytest.raises(DisjointnessError):
            validate_experiment(spec, store)

    def test_whitespace_normalized_comparison(self, corpus):
        store = CorpusStore(
            requirement_sets={
                "bad": [
                    Requirement(
                        id="bad-1",
                        text="The duration of a   flashing cycle is 1 second.",
                    )
                ]
            },
            support_sets=dict(corpus.support_sets),
            recordings=list(corpus.recordings),
        )
        with pytest.raises(DisjointnessError):
            validate_experiment(replay_spec(RuleKind.MODAL_VERB, "modal-4", "bad"), store)

    def test_bundled_fixtures_are_disjoint(self, corpus):
        for spec in bundled_experiment_specs():
            validate_experiment(spec, corpus)


class TestReports:
    def test_machine_format_stable_fields(self, corpus):
        outcomes = [run_experiment(replay_spec(RuleKind.MODAL_VERB, "modal-1", "modal-test"), corpus)]
        payloads = [
            json.loads(line)
            for line in emit_report(outcomes, "machine").decode().splitlines()
        ]
        assert payloads == [
            {
                "rule": "modal_verb",
                "support_size": 1,
                "class_counts": [3, 0, 0, 0, 5, 0],
                "total": 8,
            }
        ]

    def test_table_groups_by_rule(self, corpus):
        outcomes = run_bundled_experiments(corpus)
        table = emit_report(outcomes, "table_text").decode()
        assert "Translation results for the If-Then structure" in table
        assert "Translation results for the modal-verb structure" in table
        assert "Translation results for the logical-formula structure" in table
        assert "1 (trained on keyword: equal)" in table
        # every row conserves its total
        for outcome in outcomes:
            assert sum(outcome.histogram.counts) == outcome.histogram.total

    def test_empty_report(self):
        table = emit_report([], "table_text").decode()
        assert table.splitlines()[0].startswith("# of Training Set")

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            emit_report([], "csv")

    def test_agreement_column_appears_for_both(self, corpus):
        spec = replay_spec(RuleKind.MODAL_VERB, "modal-6", "modal-test", GradingMode.BOTH)
        table = emit_report([run_experiment(spec, corpus)], "table_text").decode()
        assert "agreement" in table.splitlines()[0]
