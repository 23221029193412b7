# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Entity-safe sentence splitting, annotation audit and document splits."""

import logging
from collections import Counter, OrderedDict
from dataclasses import dataclass, field
from typing import List

import numpy as np

from spangrid.config import DEFAULT_SPLIT_RATIOS, SENTENCE_FINAL_TOKENS, SPLIT_NAMES
from spangrid.corpus.types import Corpus, Entity, Sentence
from spangrid.errors import SplitError

MIN_DOCUMENTS = 3
"""Fewest documents a train/dev/test split accepts."""


def candidate_boundaries(tokens, final_tokens=SENTENCE_FINAL_TOKENS):
    """Token indices following sentence-final punctuation."""
    return [
        index + 1
        for index, token in enumerate(tokens[:-1])
        if token in final_tokens
    ]


def split_sentences_entity_safe(tokens, entities, boundaries, doc_id=None):
    """Cut a document at its boundaries without ever cutting an entity.

    A boundary ``b`` starts a new sentence at token ``b``. It is suppressed
    when some entity ``(s, e)`` has ``s < b <= e``. Entities are re-based to
    their sentence; none is dropped.

    :return: List of :class:`Sentence`.
    """
    tokens = tuple(tokens)
    entities = list(entities)
    cuts = [
        b
        for b in sorted(set(boundaries))
        if 0 < b < len(tokens) and not any(e.start < b <= e.end for e in entities)
    ]
    sentences = []
    for start, stop in zip([0] + cuts, cuts + [len(tokens)]):
        inside = tuple(
            Entity(e.start - start, e.end - start, e.type)
            for e in entities
            if start <= e.start and e.end < stop
        )
        sentences.append(Sentence(tokens[start:stop], inside, doc_id))
    suppressed = len(set(b for b in boundaries if 0 < b < len(tokens))) - len(cuts)
    if suppressed:
        logging.debug(
            "{0}: {1} boundaries suppressed inside entities".format(doc_id, suppressed)
        )
    return sentences


def split_document(document):
    """Split a :class:`~spangrid.corpus.types.Document` into sentences.

    Its own ``boundaries`` are used when present, sentence-final punctuation
    otherwise.
    """
    boundaries = document.boundaries
    if boundaries is None:
        boundaries = candidate_boundaries(document.tokens)
    return split_sentences_entity_safe(
        document.tokens, document.entities, boundaries, document.doc_id
    )


@dataclass
class Occurrence:
    """Position of a sentence in a corpus."""

    split: str
    index: int
    doc_id: str
    entities: tuple


@dataclass
class AuditReport:
    """Annotation problems found in a corpus."""

    conflicts: List[List[Occurrence]] = field(default_factory=list)
    duplicates: List[dict] = field(default_factory=list)
    multi_type: List[dict] = field(default_factory=list)

    @property
    def is_clean(self):
        """No conflicts and no duplicates (multi-type spans are informational)."""
        return not self.conflicts and not self.duplicates

    def rows(self):
        """``(kind, split, index, doc_id, detail)`` rows for tabular output."""
        rows = []
        for group_number, group in enumerate(self.conflicts):
            for occurrence in group:
                rows.append(
                    (
                        "conflict",
                        occurrence.split,
                        occurrence.index,
                        occurrence.doc_id,
                        "group {0}: {1}".format(
                            group_number, list(occurrence.entities)
                        ),
                    )
                )
        for finding in self.duplicates:
            rows.append(
                (
                    "duplicate",
                    finding["split"],
                    finding["index"],
                    finding["doc_id"],
                    "{0} x{1}".format(finding["entity"], finding["count"]),
                )
            )
        for finding in self.multi_type:
            rows.append(
                (
                    "multi-type",
                    finding["split"],
                    finding["index"],
                    finding["doc_id"],
                    "{0}: {1}".format(finding["span"], ", ".join(finding["types"])),
                )
            )
        return rows

    def to_dict(self):
        """Plain dictionary for JSON output."""
        return {
            "conflicts": [
                [
                    {
                        "split": o.split,
                        "index": o.index,
                        "doc_id": o.doc_id,
                        "entities": [list(e) for e in o.entities],
                    }
                    for o in group
                ]
                for group in self.conflicts
            ],
            "duplicates": self.duplicates,
            "multi_type": self.multi_type,
        }


def _positions(corpus):
    names = list(SPLIT_NAMES) + [n for n in corpus.splits if n not in SPLIT_NAMES]
    for name in names:
        for index, sentence in enumerate(corpus.splits[name]):
            yield name, index, sentence


def _unique_entities(sentence):
    return tuple(OrderedDict.fromkeys(sentence.entities))


def audit(corpus, fix=False):
    """Find conflicting annotations, duplicated entities and multi-type spans.

    A conflict group gathers every occurrence of one token sequence when not
    all occurrences carry the same entity set. Fix mode removes duplicates
    and keeps, per token sequence, only the occurrences annotated like the
    first one in corpus order.

    :return: ``(report, fixed corpus or None)``.
    """
    report = AuditReport()
    by_text = OrderedDict()
    for split, index, sentence in _positions(corpus):
        counts = Counter(sentence.entities)
        for entity, count in counts.items():
            if count > 1:
                report.duplicates.append(
                    {
                        "split": split,
                        "index": index,
                        "doc_id": sentence.doc_id,
                        "entity": list(entity.as_triple()),
                        "count": count,
                    }
                )
        span_types = OrderedDict()
        for entity in _unique_entities(sentence):
            span_types.setdefault((entity.start, entity.end), []).append(entity.type)
        for span, types in span_types.items():
            if len(types) > 1:
                report.multi_type.append(
                    {
                        "split": split,
                        "index": index,
                        "doc_id": sentence.doc_id,
                        "span": list(span),
                        "types": types,
                    }
                )
        by_text.setdefault(sentence.tokens, []).append(
            Occurrence(
                split,
                index,
                sentence.doc_id,
                tuple(sorted(e.as_triple() for e in set(sentence.entities))),
            )
        )
    for occurrences in by_text.values():
        if len({o.entities for o in occurrences}) > 1:
            report.conflicts.append(occurrences)
    logging.info(
        "Audit: {0} conflict groups, {1} duplicates, {2} multi-type spans".format(
            len(report.conflicts), len(report.duplicates), len(report.multi_type)
        )
    )
    if not fix:
        return report, None

    dropped = set()
    for occurrences in report.conflicts:
        kept = occurrences[0].entities
        dropped.update(
            (o.split, o.index) for o in occurrences[1:] if o.entities != kept
        )
    splits = {name: [] for name in corpus.splits}
    for split, index, sentence in _positions(corpus):
        if (split, index) not in dropped:
            splits[split].append(sentence.with_entities(_unique_entities(sentence)))
    logging.info("Audit fix dropped {} conflicting sentences".format(len(dropped)))
    return report, Corpus(splits=splits, types=list(corpus.types))


def drop_multi_type(corpus):
    """Keep only the first listed type of every multi-type span."""
    splits = {}
    for name, sentences in corpus.splits.items():
        splits[name] = []
        for sentence in sentences:
            seen = set()
            kept = []
            for entity in sentence.entities:
                if (entity.start, entity.end) not in seen:
                    seen.add((entity.start, entity.end))
                    kept.append(entity)
            splits[name].append(sentence.with_entities(kept))
    return Corpus(splits=splits)


def parse_ratios(value):
    """Parse ``"8:1:1"`` into a tuple of three non-negative numbers.

    :raises SplitError: the value is malformed.
    """
    try:
        ratios = tuple(float(part) for part in str(value).split(":"))
    except ValueError:
        raise SplitError("Ratios must look like 8:1:1, got {!r}".format(value))
    if len(ratios) != 3 or any(r < 0 for r in ratios) or not ratios[0] > 0:
        raise SplitError("Ratios must be three non-negative numbers with train > 0.")
    return ratios


def document_split(sentences, ratios=DEFAULT_SPLIT_RATIOS, seed=0):
    """Partition documents into train/dev/test.

    Documents (sentences grouped by ``doc_id`` in order of first appearance)
    are shuffled with ``seed``; dev and test receive ``floor(D * ratio / sum)``
    documents, at least one each when their ratio is positive, and train the
    rest. Every sentence of a document lands in one split.

    :raises SplitError: fewer than three documents, or nothing left for train.
    """
    documents = OrderedDict()
    for sentence in sentences:
        documents.setdefault(sentence.doc_id, []).append(sentence)
    count = len(documents)
    if count < MIN_DOCUMENTS:
        raise SplitError(
            "Need at least {0} documents to split, got {1}".format(MIN_DOCUMENTS, count)
        )
    total = float(sum(ratios))
    sizes = [
        max(1, int(np.floor(count * ratio / total))) if ratio > 0 else 0
        for ratio in ratios[1:]
    ]
    train_size = count - sum(sizes)
    if train_size < 1:
        raise SplitError("Ratios {} leave no training documents".format(ratios))
    order = np.random.default_rng(seed).permutation(count)
    bounds = np.cumsum([0, train_size] + sizes)
    doc_ids = list(documents)
    splits = {}
    for name, lower, upper in zip(SPLIT_NAMES, bounds[:-1], bounds[1:]):
        chosen = sorted(int(position) for position in order[lower:upper])
        splits[name] = [s for position in chosen for s in documents[doc_ids[position]]]
        logging.debug("{0}: {1} documents".format(name, upper - lower))
    return Corpus(splits=splits)


def preprocess_documents(
    documents,
    ratios=DEFAULT_SPLIT_RATIOS,
    seed=0,
    fix=True,
    drop_multi=False,
    split=True,
):
    """Full preprocessing pipeline.

    Documents are split into sentences entity-safely, audited (and fixed in
    document order when ``fix``), optionally reduced to one type per span,
    then split 8:1:1 by document.

    :return: ``(corpus, audit report)``.
    """
    sentences = [s for document in documents for s in split_document(document)]
    corpus = Corpus(splits={"train": sentences})
    report, fixed = audit(corpus, fix=fix)
    if fixed is not None:
        corpus = fixed
    if drop_multi:
        corpus = drop_multi_type(corpus)
    if split:
        corpus = document_split(corpus.train, ratios=ratios, seed=seed)
    return corpus, report
