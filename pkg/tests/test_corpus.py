from __future__ import annotations

import json

import pytest

from reqdsl import (
    CorpusStore,
    DuplicateIdError,
    MalformedRecordError,
    Requirement,
    RuleKind,
    load_bundled_corpus,
    load_corpus,
    save_corpus,
)
from reqdsl.corpus import ReplayRecord
from reqdsl.fewshot import SupportPair, SupportSet


class TestBundled:
    def test_test_set_sizes(self, corpus):
        assert len(corpus.requirement_sets["ifthen-test"]) == 11
        assert len(corpus.requirement_sets["modal-test"]) == 8
        assert len(corpus.requirement_sets["expr-test"]) == 8

    def test_support_set_sizes(self, corpus):
        sizes = {set_id: len(s.pairs) for set_id, s in corpus.support_sets.items()}
        assert sizes == {
            "ifthen-1": 1,
            "ifthen-4": 4,
            "ifthen-6": 6,
            "modal-1": 1,
            "modal-4": 4,
            "modal-6": 6,
            "expr-1-equal": 1,
            "expr-1-lessorequal": 1,
            "expr-4": 4,
            "expr-6": 6,
            "expr-8": 8,
        }

    def test_every_recording_has_a_label(self, corpus):
        assert all(r.human_class in range(1, 7) for r in corpus.recordings)

    def test_unique_requirement_ids_within_sets(self, corpus):
        for set_id, requirements in corpus.requirement_sets.items():
            ids = [r.id for r in requirements]
            assert len(ids) == len(set(ids)), set_id


class TestRoundTrip:
    def test_save_then_load_is_lossless(self, corpus, tmp_path):
        save_corpus(corpus, tmp_path)
        reloaded = load_corpus(tmp_path)
        assert reloaded == corpus
        # and once more through a second directory
        save_corpus(reloaded, tmp_path / "again")
        assert load_corpus(tmp_path / "again") == corpus

    def test_mutated_store_round_trips(self, tmp_path):
        store = CorpusStore()
        store.add_requirement_set(
            "mine", [Requirement(id="m-1", text="The lamp MUST glow.", tags=("lighting",))]
        )
        store.add_support_set(
            SupportSet(
                id="tiny",
                rule=RuleKind.MODAL_VERB,
                pairs=(SupportPair(input="The lamp glows.", dsl="The lamp MUST glow."),),
            )
        )
        store.add_recording(
            ReplayRecord(support_set_id="tiny", query="q", output="o", human_class=2)
        )
        save_corpus(store, tmp_path)
        assert load_corpus(tmp_path) == store


class TestErrors:
    def test_missing_field_names_file_and_line(self, corpus, tmp_path):
        save_corpus(corpus, tmp_path)
        target = tmp_path / "requirements" / "modal-test.jsonl"
        lines = target.read_text().splitlines()
        broken = json.loads(lines[2])
        del broken["text"]
        lines[2] = json.dumps(broken)
        target.write_text("\n".join(lines) + "\n")
        with pytest.raises(MalformedRecordError) as err:
            load_corpus(tmp_path)
        assert err.value.line == 3
        assert "text" in str(err.value)

    def test_invalid_json_line(self, corpus, tmp_path):
        save_corpus(corpus, tmp_path)
        target = tmp_path / "recordings" / "translations.jsonl"
        target.write_text(target.read_text() + "{not json\n")
        with pytest.raises(MalformedRecordError):
            load_corpus(tmp_path)

    def test_duplicate_requirement_id(self):
        store = CorpusStore()
        store.add_requirement(set_id="s", requirement=Requirement(id="a", text="x MUST y"))
        with pytest.raises(DuplicateIdError):
            store.add_requirement(set_id="s", requirement=Requirement(id="a", text="z MUST w"))

    def test_duplicate_support_set_id(self, corpus):
        store = CorpusStore()
        store.add_support_set(corpus.support_sets["modal-1"])
        with pytest.raises(DuplicateIdError):
            store.add_support_set(corpus.support_sets["modal-1"])

    def test_nonconformant_support_pair_rejected_at_load(self, corpus, tmp_path):
        save_corpus(corpus, tmp_path)
        target = tmp_path / "support_sets" / "modal-1.pairs.jsonl"
        target.write_text(json.dumps({"input": "The lamp glows.", "dsl": "The lamp shall glow."}) + "\n")
        with pytest.raises(ValueError, match="does not conform"):
            load_corpus(tmp_path)

    def test_missing_index(self, tmp_path):
        from reqdsl.corpus import CorpusError

        with pytest.raises(CorpusError):
            load_corpus(tmp_path)


def test_replay_outputs_keyed_by_set_and_query(corpus):
    outputs = corpus.replay_outputs()
    key = ("modal-6", "Low beam illuminant shall be LED.")
    assert outputs[key] == "Low beam illuminant MUST be LED."


def test_bundled_corpus_loads_fresh_each_call():
    first = load_bundled_corpus()
    second = load_bundled_corpus()
    assert first == second
    assert first is not second
