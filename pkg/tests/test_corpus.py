# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""SpanGrid corpus tests."""

import numpy as np
import pytest

from spangrid.corpus.io import (
    load_corpus,
    load_documents,
    load_unlabelled,
    write_corpus,
)
from spangrid.corpus.preprocessing import (
    audit,
    candidate_boundaries,
    document_split,
    drop_multi_type,
    parse_ratios,
    preprocess_documents,
    split_sentences_entity_safe,
)
from spangrid.corpus.stats import split_stats
from spangrid.corpus.synth import nest_probability, synth_generate
from spangrid.corpus.targets import build_targets
from spangrid.corpus.types import Corpus, Entity, Sentence, spans_cross
from spangrid.errors import CorpusValidationError, GenerationError, SplitError


def _record(tokens, *entities, **extra):
    record = {
        "tokens": list(tokens),
        "entities": [{"start": s, "end": e, "type": t} for s, e, t in entities],
    }
    record.update(extra)
    return record


def test_load_empty_file(write_jsonl_file):
    """Test an empty file loads as an empty corpus."""
    corpus = load_corpus(write_jsonl_file("empty.jsonl", []))
    assert corpus.train == [] and corpus.types == []


def test_load_fixture(write_jsonl_file):
    """Test counts of a three-sentence file."""
    path = write_jsonl_file(
        "three.jsonl",
        [
            _record("a b c".split(), (0, 1, "X")),
            "",
            _record("d e".split(), (0, 0, "Y"), (0, 1, "X"), doc_id=4),
            _record(["f"]),
        ],
    )
    corpus = load_corpus(path)
    assert len(corpus.train) == 3
    assert sum(len(s.entities) for s in corpus.train) == 3
    assert corpus.types == ["X", "Y"]
    assert corpus.train[1].doc_id == "4"


@pytest.mark.parametrize(
    "line, message",
    [
        ("{not json", "malformed"),
        ('["a"]', "not an object"),
        ('{"entities": []}', "tokens"),
        ('{"tokens": ["a", "b"], "entities": [{"start": 1, "end": 2, "type": "X"}]}',
         "token count"),
        ('{"tokens": ["a", "b"], "entities": [{"start": 1, "end": 0, "type": "X"}]}',
         "starts after"),
    ],
)
def test_load_rejects_bad_records(write_jsonl_file, line, message):
    """Test malformed records are rejected with their line number."""
    path = write_jsonl_file("bad.jsonl", [_record(["ok"]), line])
    with pytest.raises(CorpusValidationError) as e:
        load_corpus(path)
    assert "line 2" in str(e.value)
    assert message in str(e.value)
    assert e.value.line_number == 2


def test_load_rejects_crossing_entities(write_jsonl_file):
    """Test crossing entities are rejected naming both."""
    path = write_jsonl_file(
        "cross.jsonl", [_record("a b c d".split(), (0, 2, "X"), (1, 3, "Y"))]
    )
    with pytest.raises(CorpusValidationError) as e:
        load_corpus(path)
    assert "(0, 2, 'X')" in str(e.value) and "(1, 3, 'Y')" in str(e.value)


def test_load_rejects_duplicates_unless_auditing(write_jsonl_file):
    """Test duplicated entities are only accepted for auditing."""
    record = _record("a b".split(), (0, 0, "X"), (0, 0, "X"))
    path = write_jsonl_file("dup.jsonl", [record])
    with pytest.raises(CorpusValidationError):
        load_corpus(path)
    corpus = load_corpus(path, allow_duplicates=True)
    assert len(corpus.train[0].entities) == 2


def test_load_rejects_long_sentences(write_jsonl_file):
    """Test the training length limit."""
    path = write_jsonl_file("long.jsonl", [_record(["a"] * 5)])
    with pytest.raises(CorpusValidationError):
        load_corpus(path, max_length=4)


def test_corpus_directory_roundtrip(tmp_path, tiny_corpus):
    """Test writing and reading a corpus directory."""
    counts = write_corpus(str(tmp_path), tiny_corpus)
    assert counts == {"train": 6, "dev": 2, "test": 2}
    corpus = load_corpus(str(tmp_path))
    assert corpus.train == tiny_corpus.train
    assert corpus.types == ["X", "Y"]


def test_load_unlabelled_ignores_entities(write_jsonl_file):
    """Test prediction input drops gold entities, even invalid ones."""
    path = write_jsonl_file(
        "raw.jsonl", [_record("a b".split(), (0, 5, "X"), doc_id="d"), _record([])]
    )
    sentences = load_unlabelled(path)
    assert sentences[0].entities == () and sentences[0].doc_id == "d"
    assert len(sentences[1]) == 0


def test_spans_cross():
    """Test the crossing predicate excludes nesting and identity."""
    assert spans_cross((1, 3), (2, 4))
    assert spans_cross((2, 4), (1, 3))
    assert not spans_cross((2, 4), (2, 3))
    assert not spans_cross((1, 1), (1, 1))
    assert not spans_cross((0, 1), (2, 3))


def test_build_targets_examples():
    """Test target grids for no entity, one entity and a multi-type span."""
    sentence = Sentence(tuple("abcde"))
    assert not build_targets(sentence, ["ORG"]).any()

    targets = build_targets(sentence.with_entities([Entity(2, 4, "ORG")]), ["ORG"])
    assert targets.sum() == 2 and targets[2, 4, 0] == targets[4, 2, 0] == 1

    diagonal = build_targets(sentence.with_entities([Entity(1, 1, "ORG")]), ["ORG"])
    assert diagonal.sum() == 1

    multi = build_targets(
        sentence.with_entities([Entity(0, 3, "A"), Entity(0, 3, "B")]), ["A", "B"]
    )
    assert multi.sum() == 4
    assert multi[0, 3].tolist() == multi[3, 0].tolist() == [1.0, 1.0]
    np.testing.assert_array_equal(multi, np.swapaxes(multi, 0, 1))


def test_candidate_boundaries():
    """Test boundaries follow sentence-final punctuation."""
    assert candidate_boundaries(["a", ".", "b", "!", "c", "?"]) == [2, 4]


def test_split_without_entities():
    """Test every boundary is used when no entity is in the way."""
    sentences = split_sentences_entity_safe(tuple("abcdef"), [], [2, 4])
    assert [s.tokens for s in sentences] == [("a", "b"), ("c", "d"), ("e", "f")]


def test_split_suppresses_boundary_inside_entity():
    """Test a boundary inside an entity is dropped and the entity kept."""
    sentences = split_sentences_entity_safe(
        tuple("abcdef"), [Entity(2, 4, "X"), Entity(5, 5, "Y")], [3, 5]
    )
    assert [len(s) for s in sentences] == [5, 1]
    assert sentences[0].entities == (Entity(2, 4, "X"),)
    assert sentences[1].entities == (Entity(0, 0, "Y"),)


def test_split_whole_document_entity():
    """Test an entity covering the document keeps it in one sentence."""
    sentences = split_sentences_entity_safe(
        tuple("abcd"), [Entity(0, 3, "X")], [1, 2, 3]
    )
    assert len(sentences) == 1


def test_split_keeps_entity_count(rng):
    """Test splitting never changes the number of entities."""
    tokens = tuple("t{}".format(i) for i in range(30))
    entities = [Entity(s, s + int(rng.integers(0, 4)), "X") for s in range(0, 28, 5)]
    sentences = split_sentences_entity_safe(tokens, entities, range(1, 30))
    assert sum(len(s.entities) for s in sentences) == len(entities)
    assert sum(len(s) for s in sentences) == len(tokens)


def test_audit_clean(tiny_corpus):
    """Test a clean corpus gives an empty report."""
    report, _ = audit(Corpus(splits={"train": tiny_corpus.train}))
    assert report.is_clean and report.rows() == []


def test_audit_conflict_and_duplicate():
    """Test conflicting annotations and duplicated entities are found and fixed."""
    tokens = ("New", "York", "is", "big")
    corpus = Corpus(
        splits={
            "train": [
                Sentence(tokens, (Entity(0, 1, "LOC"),), "d1"),
                Sentence(tokens, (Entity(0, 1, "ORG"),), "d2"),
                Sentence(("a", "b"), (Entity(0, 0, "X"), Entity(0, 0, "X")), "d3"),
            ]
        }
    )
    report, fixed = audit(corpus, fix=True)
    assert len(report.conflicts) == 1 and len(report.conflicts[0]) == 2
    assert len(report.duplicates) == 1 and report.duplicates[0]["count"] == 2
    assert [s.doc_id for s in fixed.train] == ["d1", "d3"]
    assert fixed.train[1].entities == (Entity(0, 0, "X"),)
    assert audit(fixed)[0].is_clean


def test_audit_multi_type_is_informational():
    """Test spans with several types are reported but not a problem."""
    corpus = Corpus(
        splits={"train": [Sentence(("a",), (Entity(0, 0, "X"), Entity(0, 0, "Y")))]}
    )
    report, _ = audit(corpus)
    assert report.is_clean and len(report.multi_type) == 1
    assert drop_multi_type(corpus).train[0].entities == (Entity(0, 0, "X"),)


def _documents(count, per_document=2):
    return [
        Sentence(("w", str(d), str(k)), (), "doc-{}".format(d))
        for d in range(count)
        for k in range(per_document)
    ]


def test_document_split_ratio():
    """Test ten documents split 8/1/1."""
    corpus = document_split(_documents(10), (8, 1, 1), seed=0)
    documents = [{s.doc_id for s in corpus.splits[n]} for n in ("train", "dev", "test")]
    assert [len(ids) for ids in documents] == [8, 1, 1]


def test_document_split_deterministic_and_disjoint():
    """Test the split depends on the seed only and keeps documents whole."""
    sentences = _documents(23, per_document=3)
    first = document_split(sentences, seed=5)
    assert first.splits == document_split(sentences, seed=5).splits
    owners = {}
    for name, split in first.splits.items():
        for sentence in split:
            assert owners.setdefault(sentence.doc_id, name) == name
    assert sum(len(s) for s in first.splits.values()) == len(sentences)


def test_document_split_needs_three_documents():
    """Test fewer than three documents can't be split."""
    with pytest.raises(SplitError):
        document_split(_documents(2))


@pytest.mark.parametrize("value", ["8:1", "a:b:c", "0:1:1", "8:-1:1"])
def test_parse_ratios_invalid(value):
    """Test malformed ratios are rejected."""
    with pytest.raises(SplitError):
        parse_ratios(value)


def test_preprocess_documents(write_jsonl_file):
    """Test the whole pipeline from documents to splits."""
    path = write_jsonl_file(
        "docs.jsonl",
        [
            _record(
                ["New", "York", ".", "Paris", "."],
                (0, 1, "LOC"),
                doc_id="doc-{}".format(d),
            )
            for d in range(5)
        ]
        + [_record(["New", "York", ".", "x"], (0, 1, "ORG"), doc_id="doc-5")],
    )
    corpus, report = preprocess_documents(load_documents(path), seed=1)
    assert len(report.conflicts) == 1
    assert sum(len(split) for split in corpus.splits.values()) == 11
    assert all(len(split) for split in corpus.splits.values())


def test_synth_is_deterministic():
    """Test a fixed seed gives a bitwise identical corpus."""
    first = synth_generate(50, 20, seed=3, dev_sentences=5)
    second = synth_generate(50, 20, seed=3, dev_sentences=5)
    assert first.splits == second.splits
    assert first.types == ["T0", "T1", "T2"]
    assert first.splits != synth_generate(50, 20, seed=4, dev_sentences=5).splits


def test_synth_without_nesting():
    """Test nesting rate 0 gives no overlapping mentions."""
    corpus = synth_generate(50, 200, nesting_rate=0.0, seed=1)
    assert split_stats(corpus.train).overlapping_mentions == 0


def test_synth_nesting_rate():
    """Test the overlapping-mention fraction follows the nesting rate."""
    stats = split_stats(synth_generate(50, 1000, nesting_rate=0.3, seed=0).train)
    assert abs(stats.overlapping_mentions / stats.mentions - 0.3) <= 0.05
    assert nest_probability(1.0) == 1.0


def test_synth_entities_are_valid():
    """Test generated entities lie inside their sentence and never cross."""
    corpus = synth_generate(30, 300, length_range=(2, 6), nesting_rate=0.8, seed=2)
    for sentence in corpus.train:
        assert 2 <= len(sentence) <= 6
        for entity in sentence.entities:
            assert 0 <= entity.start <= entity.end < len(sentence)
            for other in sentence.entities:
                assert not entity.crosses(other)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(vocab_size=4, num_types=3),
        dict(length_range=(0, 4)),
        dict(length_range=(6, 5)),
        dict(nesting_rate=1.5),
        dict(length_range=(1, 1), nesting_rate=0.5),
        dict(num_types=0),
    ],
)
def test_synth_impossible_constraints(kwargs):
    """Test impossible generation constraints raise."""
    values = dict(vocab_size=50, n_sentences=5)
    values.update(kwargs)
    with pytest.raises(GenerationError):
        synth_generate(**values)
