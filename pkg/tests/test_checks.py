from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from reqdsl import (
    Requirement,
    RuleKind,
    Severity,
    analyze,
    check_expression_keywords,
    check_if_then,
    check_modal,
    classify,
)
from reqdsl.types import aggregate_severity


def worst(diags):
    return aggregate_severity(diags)


class TestModal:
    def test_must_conforms(self):
        diags = check_modal("The duration of a flashing cycle MUST be 1 second.")
        assert worst(diags) is Severity.CONFORMANT

    def test_must_not_conforms(self):
        text = "Also after 1000 flashing cycles the cumulated deviation MUST NOT exceed 0.05s."
        assert worst(check_modal(text)) is Severity.CONFORMANT
        assert worst(check_modal("With subvoltage the ambient light MUST not be available.")) is Severity.CONFORMANT

    def test_weak_modal_flagged_with_hint(self):
        text = "Low beam illuminant shall be LED."
        diags = check_modal(text)
        assert worst(diags) is Severity.VIOLATION
        flagged = diags[0]
        assert text[flagged.span[0] : flagged.span[1]] == "shall"
        assert flagged.fix_hint == "MUST"

    def test_empty_text_is_a_violation(self):
        diags = check_modal("")
        assert worst(diags) is Severity.VIOLATION
        assert diags[0].message == "no sentence"

    def test_copula_without_modal_flagged(self):
        diags = check_modal("The frame rate of the camera is 60 Hz.")
        assert worst(diags) is Severity.VIOLATION
        assert diags[0].fix_hint == "MUST be"

    def test_phrase_modal_has_to(self):
        diags = check_modal("The adaptation of the pulse ratio has to occur at the latest.")
        assert worst(diags) is Severity.VIOLATION
        assert diags[0].fix_hint == "MUST"

    def test_must_dominates_subordinate_weak_modal(self):
        text = "A flashing cycle (bright to dark) MUST always be completed, before a new flashing cycle can occur."
        assert worst(check_modal(text)) is Severity.CONFORMANT

    def test_heading_needs_no_modal(self):
        assert worst(check_modal("Exterior lighting overview")) is Severity.CONFORMANT

    def test_lowercase_must_is_a_near_miss(self):
        diags = check_modal("The door must be closed.")
        assert worst(diags) is Severity.MINOR
        assert diags[0].fix_hint == "MUST"


class TestExpression:
    def test_keyword_form_conforms(self):
        text = "The vehicles doors are closed automaticly when speeding velocity is GREATER 10km/h."
        assert worst(check_expression_keywords(text)) is Severity.CONFORMANT

    def test_symbol_equality_keyword_conforms(self):
        assert worst(check_expression_keywords("The interior material is EQUAL Velour.")) is Severity.CONFORMANT

    def test_mathematical_form_conforms(self):
        text = "The vehicle's doors are closed automatically when speeding velocity > 10 km/h."
        assert worst(check_expression_keywords(text)) is Severity.CONFORMANT

    def test_natural_phrase_flagged_with_span_and_hint(self):
        text = "The vehicles doors are closed automaticly when speeding velocity is bigger than 10km/h."
        diags = check_expression_keywords(text)
        assert worst(diags) is Severity.VIOLATION
        flagged = diags[0]
        assert text[flagged.span[0] : flagged.span[1]] == "is bigger than"
        assert flagged.fix_hint == "GREATER"

    def test_copula_number_equality_flagged(self):
        diags = check_expression_keywords("The frame rate of the camera is 60 Hz.")
        assert worst(diags) is Severity.VIOLATION
        assert diags[0].fix_hint == "is EQUAL"

    def test_stray_than_is_a_near_miss(self):
        diags = check_expression_keywords("The weight must be LESS THAN 3.5t.")
        assert worst(diags) is Severity.MINOR
        assert diags[0].fix_hint == "LESS"

    def test_negated_equality_rejected(self):
        diags = check_expression_keywords("The delay is not 5ms.")
        assert worst(diags) is Severity.VIOLATION
        assert "negated equality" in diags[0].message

    def test_no_comparators_is_vacuously_conformant(self):
        assert worst(check_expression_keywords("A flashing cycle has to be completed.")) is Severity.CONFORMANT


class TestIfThen:
    def test_dsl_sentence_conformant(self):
        text = "IF: no advancing vehicle is recognized any more, THEN: high beam illumination is restored within 2 seconds."
        assert worst(check_if_then(text)) is Severity.CONFORMANT

    def test_missing_comma_is_minor(self):
        assert worst(check_if_then("IF: a holds THEN: b happens.")) is Severity.MINOR

    def test_preposition_trigger_is_minor(self):
        text = "IF: with activated darkness switch (only armored vehicles), THEN: the cornering light is not activated."
        assert worst(check_if_then(text)) is Severity.MINOR

    def test_miscased_keywords_are_minor(self):
        assert worst(check_if_then("If: the vehicle exceeds walking speed, THEN: the door locks engage automatically.")) is Severity.MINOR
        assert worst(check_if_then("IF moving the pitman arm, THEN: the vehicle flashes.")) is Severity.MINOR

    def test_unknown_keyword_is_a_violation(self):
        text = "WHEN: hazard warning is deactivated, THEN: direction blinking cycle should be released."
        assert worst(check_if_then(text)) is Severity.VIOLATION

    def test_natural_conditional_is_a_violation(self):
        text = "When the brake is pushed, the cruise control is deactivated."
        assert worst(check_if_then(text)) is Severity.VIOLATION

    def test_unconditional_sentence_not_applicable(self):
        assert check_if_then("The horn MUST be quiet.") == []


class TestClassify:
    def test_conditional_without_must(self):
        text = "When no advancing vehicle is recognized anymore, the high beam illumination is restored within 2 seconds."
        assert classify(text) == {RuleKind.IF_THEN, RuleKind.MODAL_VERB}

    def test_copula_equality_without_must(self):
        assert classify("The frame rate of the camera is 60 Hz") == {
            RuleKind.MODAL_VERB,
            RuleKind.EXPRESSION,
        }

    def test_fully_conformant_dsl(self):
        assert classify("IF: x, THEN: y MUST hold.") == set()

    def test_weak_modal_with_symbol_value_is_modal_only(self):
        # "shall be LED" needs MUST, but the symbolic equality is left alone
        assert classify("Low beam illuminant shall be LED.") == {RuleKind.MODAL_VERB}

    def test_context_prefix_is_not_a_trigger(self):
        text = "Distance Warning: The vehicle warns the driver visually if the vehicle is closer to the car ahead than allowed."
        assert RuleKind.IF_THEN not in classify(text)

    def test_with_activated_marker(self):
        text = "With activated darkness switch the cornering light is not activated."
        assert RuleKind.IF_THEN in classify(text)


class TestAnalyze:
    def test_combined_dsl_sentence_all_conformant(self):
        text = "IF: speeding velocity is GREATER 10 km/h, THEN: the vehicle's doors MUST be closed automatically."
        analysis = analyze(text)
        for rule in RuleKind:
            assert analysis.is_conformant(rule), rule
        assert analysis.if_then is not None
        assert analysis.if_then.trigger == "speeding velocity is GREATER 10 km/h"
        assert analysis.classification == frozenset()

    def test_empty_text(self):
        analysis = analyze("")
        assert analysis.severity(RuleKind.MODAL_VERB) is Severity.VIOLATION
        assert analysis.if_then is None
        assert analysis.constraints == ()

    def test_if_then_present_iff_conformant(self):
        conformant = analyze("IF: a holds, THEN: b MUST happen.")
        assert conformant.is_conformant(RuleKind.IF_THEN)
        assert conformant.if_then is not None
        minor = analyze("IF: a holds THEN: b MUST happen.")
        assert not minor.is_conformant(RuleKind.IF_THEN)
        assert minor.if_then is None

    def test_multi_sentence_analyzed_separately(self):
        text = "The hazard warning MUST be available. The driver presses the button. The lights flash."
        analysis = analyze(text)
        assert any("3 sentences" in note for note in analysis.notes)

    def test_spans_lie_within_text(self):
        text = "Distance Warning: The vehicle warns the driver if it is closer than allowed. It also beeps."
        analysis = analyze(text)
        for diags in analysis.per_rule.values():
            for diag in diags:
                assert 0 <= diag.span[0] <= diag.span[1] <= len(text)

    def test_deterministic(self):
        text = "When hazard warning is deactivated, the cycle should be released."
        assert analyze(text) == analyze(text)

    def test_requirement_object_keeps_id(self):
        analysis = analyze(Requirement(id="r-9", text="The lamp shall glow."))
        assert analysis.requirement_id == "r-9"


_FILLER_ALPHABET = st.characters(whitelist_categories=("Ll",), whitelist_characters=" ")


@given(st.text(alphabet=_FILLER_ALPHABET, min_size=1, max_size=30))
def test_monotone_conformance(filler):
    """Appending keyword-free, comparator-free text never fixes a violation."""
    from reqdsl import default_lexicons
    from reqdsl.constraints import scan_comparators

    lex = default_lexicons()
    # the generated filler must really be free of keywords and comparator phrases
    suffix = " " + filler
    if scan_comparators(suffix, lex):
        return
    if any(w in suffix.split() for w in lex.weak_modals if " " not in w):
        return
    base = "Low beam illuminant shall be LED."
    before = aggregate_severity(check_modal(base))
    after = aggregate_severity(check_modal(base + suffix))
    assert before is Severity.VIOLATION
    assert after is not Severity.CONFORMANT

    expr_base = "The braking distance can not be longer than 300m."
    assert aggregate_severity(check_expression_keywords(expr_base)) is Severity.VIOLATION
    assert (
        aggregate_severity(check_expression_keywords(expr_base + suffix))
        is not Severity.CONFORMANT
    )
