from __future__ import annotations

import pytest

from reqdsl import GradeClass, GradeProvenance, RuleKind, grade_auto, ingest_labels
from reqdsl.grading import (
    DanglingReferenceError,
    SemanticsLevel,
    SyntaxLevel,
    UnknownClassError,
    combine_levels,
)


class TestMatrix:
    def test_every_cell_maps_to_exactly_one_class(self):
        expected = {
            (SyntaxLevel.OK, SemanticsLevel.OK): GradeClass.PERFECT,
            (SyntaxLevel.MINOR, SemanticsLevel.OK): GradeClass.MINOR_SYNTAX,
            (SyntaxLevel.OK, SemanticsLevel.LOSS): GradeClass.SEMANTIC_LOSS,
            (SyntaxLevel.MINOR, SemanticsLevel.LOSS): GradeClass.MINOR_SYNTAX_AND_LOSS,
            (SyntaxLevel.GRAVE, SemanticsLevel.OK): GradeClass.RULE_NOT_IMPLEMENTED,
            (SyntaxLevel.GRAVE, SemanticsLevel.LOSS): GradeClass.RULE_NOT_IMPLEMENTED,
            (SyntaxLevel.OK, SemanticsLevel.WRONG): GradeClass.SEMANTICALLY_WRONG,
            (SyntaxLevel.MINOR, SemanticsLevel.WRONG): GradeClass.SEMANTICALLY_WRONG,
            (SyntaxLevel.GRAVE, SemanticsLevel.WRONG): GradeClass.SEMANTICALLY_WRONG,
        }
        for syntax in SyntaxLevel:
            for semantics in SemanticsLevel:
                assert combine_levels(syntax, semantics) is expected[(syntax, semantics)]

    def test_wrong_semantics_beats_grave_syntax(self):
        assert combine_levels(SyntaxLevel.GRAVE, SemanticsLevel.WRONG) is GradeClass.SEMANTICALLY_WRONG


class TestAutoGrader:
    def test_dropped_parenthetical_is_class_3(self):
        graded = grade_auto(
            "With activated darkness switch (only armored vehicles) the cornering light is not activated.",
            "IF: darkness switch is activated, THEN: cornering light is not activated.",
            RuleKind.IF_THEN,
        )
        assert graded.grade is GradeClass.SEMANTIC_LOSS
        assert graded.provenance is GradeProvenance.AUTO

    def test_identity_on_nonconformant_input_is_class_5(self):
        text = "When moving the pitman arm in position turn left the vehicle flashes all left direction indicators."
        graded = grade_auto(text, text, RuleKind.IF_THEN)
        assert graded.grade is GradeClass.RULE_NOT_IMPLEMENTED
        assert any("identity" in e for e in graded.evidence)

    def test_direction_flip_is_class_6(self):
        graded = grade_auto(
            "The minimun distance to a vehicle in front has to be 5m.",
            "The minimun distance to a vehicle in front has to be LESS OR EQUAL 5m.",
            RuleKind.EXPRESSION,
        )
        assert graded.grade is GradeClass.SEMANTICALLY_WRONG
        assert any("direction flips" in e for e in graded.evidence)

    def test_perfect_modal_insertion_is_class_1(self):
        graded = grade_auto(
            "The frame rate of the camera is 60 Hz.",
            "The frame rate of the camera MUST be 60 Hz.",
            RuleKind.MODAL_VERB,
        )
        assert graded.grade is GradeClass.PERFECT

    def test_preposition_trigger_is_class_2(self):
        graded = grade_auto(
            "With activated darkness switch (only armored vehicles) the cornering light is not activated.",
            "IF: with activated darkness switch (only armored vehicles), THEN: the cornering light is not activated.",
            RuleKind.IF_THEN,
        )
        assert graded.grade is GradeClass.MINOR_SYNTAX

    def test_missing_comma_plus_dropped_parenthetical_is_class_4(self):
        graded = grade_auto(
            "With activated darkness switch (only armored vehicles) the cornering light is not activated.",
            "IF: darkness switch is activated THEN: cornering light is not activated.",
            RuleKind.IF_THEN,
        )
        assert graded.grade is GradeClass.MINOR_SYNTAX_AND_LOSS

    def test_dropped_number_is_class_6(self):
        graded = grade_auto(
            "The high beam is restored within 2 seconds.",
            "The high beam MUST be restored quickly.",
            RuleKind.MODAL_VERB,
        )
        assert graded.grade is GradeClass.SEMANTICALLY_WRONG

    def test_negation_drop_is_class_6(self):
        graded = grade_auto(
            "The cornering light is not activated.",
            "The cornering light MUST be activated.",
            RuleKind.MODAL_VERB,
        )
        assert graded.grade is GradeClass.SEMANTICALLY_WRONG

    def test_folded_negation_keeps_parity(self):
        graded = grade_auto(
            "Also after 1000 flashing cycles the cumulated deviation will not exceed 0.05s.",
            "Also after 1000 flashing cycles the cumulated deviation MUST NOT exceed 0.05s.",
            RuleKind.MODAL_VERB,
        )
        assert graded.grade is GradeClass.PERFECT

    def test_never_class_2_or_4_on_conformant_output(self):
        # fully conformant outputs can only be 1, 3, or 6
        samples = [
            ("The light shall glow.", "The light MUST glow.", RuleKind.MODAL_VERB),
            (
                "When a, then b happens.",
                "IF: a, THEN: b happens.",
                RuleKind.IF_THEN,
            ),
            (
                "The braking distance can not be longer than 300m.",
                "The braking distance can be LESS OR EQUAL 300m.",
                RuleKind.EXPRESSION,
            ),
        ]
        from reqdsl.fewshot import dsl_side_conformant

        for source, output, rule in samples:
            assert dsl_side_conformant(output, rule)
            graded = grade_auto(source, output, rule)
            assert graded.grade not in (GradeClass.MINOR_SYNTAX, GradeClass.MINOR_SYNTAX_AND_LOSS)


class TestIngestLabels:
    def test_wraps_with_human_provenance(self):
        records = [
            {
                "support_set_id": "modal-6",
                "query": "Low beam illuminant shall be LED.",
                "output": "Low beam illuminant MUST be LED.",
                "human_class": 1,
            }
        ]
        graded = ingest_labels(records, rules_by_set={"modal-6": RuleKind.MODAL_VERB})
        assert len(graded) == 1
        assert graded[0].grade is GradeClass.PERFECT
        assert graded[0].provenance is GradeProvenance.HUMAN_LABEL

    def test_unknown_class_rejected(self):
        with pytest.raises(UnknownClassError):
            ingest_labels(
                [{"rule": "modal_verb", "query": "q", "output": "o", "human_class": 7}]
            )

    def test_non_integer_class_rejected(self):
        with pytest.raises(UnknownClassError):
            ingest_labels([{"rule": "modal_verb", "query": "q", "output": "o", "human_class": "1"}])

    def test_dangling_reference(self):
        with pytest.raises(DanglingReferenceError):
            ingest_labels(
                [{"support_set_id": "nope", "query": "q", "output": "o", "human_class": 1}],
                rules_by_set={},
            )

    def test_empty_records(self):
        assert ingest_labels([]) == []

    def test_human_labels_never_overwritten(self, corpus):
        # the same row graded automatically keeps its human label in reports
        record = corpus.labeled_records("modal-1")[0]
        human = ingest_labels(
            [
                {
                    "support_set_id": record.support_set_id,
                    "query": record.query,
                    "output": record.output,
                    "human_class": record.human_class,
                }
            ],
            rules_by_set=corpus.rules_by_set(),
        )[0]
        assert human.provenance is GradeProvenance.HUMAN_LABEL


class TestGradeClassScale:
    def test_six_values(self):
        assert [g.value for g in GradeClass] == [1, 2, 3, 4, 5, 6]

    def test_not_ordered(self):
        with pytest.raises(TypeError):
            GradeClass.PERFECT < GradeClass.MINOR_SYNTAX  # noqa: B015
