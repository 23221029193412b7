# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Entity-level evaluation: micro P/R/F1 and the flat/nested breakdown.

Entities are ``(start, end, type)`` triples; a span with two types counts as
two triples everywhere.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, NamedTuple, Optional

from spangrid.errors import ConfigurationError

FLATNESS_MODES = ("own", "gold")
"""How predicted entities are classified as flat or nested.

``own`` judges every set by its own overlaps; ``gold`` judges predictions by
their overlaps with the gold entities.
"""


class PRF(NamedTuple):
    """Precision, recall and F1."""

    precision: float
    recall: float
    f1: float


class FlatNestedPartition(NamedTuple):
    """Entities overlapping no other entity, and the rest."""

    flat: FrozenSet[tuple]
    nested: FrozenSet[tuple]


class Breakdown(NamedTuple):
    """FEP, FER, NEP and NER; ``None`` when the denominator is empty."""

    fep: Optional[float]
    fer: Optional[float]
    nep: Optional[float]
    ner: Optional[float]


def ratio(numerator, denominator, absent=0.0):
    """``numerator / denominator``, or ``absent`` for an empty denominator."""
    return numerator / denominator if denominator else absent


def prf_from_counts(correct, predicted, gold):
    """Micro P/R/F1 out of match counts; empty denominators give 0."""
    precision = ratio(correct, predicted)
    recall = ratio(correct, gold)
    f1 = ratio(2 * precision * recall, precision + recall)
    return PRF(precision, recall, f1)


def micro_prf(pred, gold):
    """Exact-match micro P/R/F1 of two triple sets.

    Corpus-wide evaluation passes triples keyed by sentence, e.g.
    ``(sentence, start, end, type)``.
    """
    pred, gold = set(pred), set(gold)
    return prf_from_counts(len(pred & gold), len(pred), len(gold))


def _overlap(first, second):
    return first[-3] <= second[-2] and second[-3] <= first[-2]


def classify_flat_nested(entities, reference=None):
    """Split ``entities`` into flat and nested ones.

    An entity is nested iff it shares a token with another entity of
    ``reference`` (by default the set itself).
    """
    entities = frozenset(entities)
    reference = entities if reference is None else frozenset(reference)
    nested = frozenset(
        entity
        for entity in entities
        if any(other != entity and _overlap(entity, other) for other in reference)
    )
    return FlatNestedPartition(entities - nested, nested)


@dataclass
class BreakdownCounts:
    """Match counts behind FEP/FER/NEP/NER."""

    pred_flat: int = 0
    pred_flat_correct: int = 0
    gold_flat: int = 0
    gold_flat_found: int = 0
    pred_nested: int = 0
    pred_nested_correct: int = 0
    gold_nested: int = 0
    gold_nested_found: int = 0

    def __iadd__(self, other):
        """Add another sentence's counts."""
        for name in self.__dataclass_fields__:
            setattr(self, name, getattr(self, name) + getattr(other, name))
        return self

    def breakdown(self):
        """Ratios, absent where nothing was counted."""
        return Breakdown(
            ratio(self.pred_flat_correct, self.pred_flat, None),
            ratio(self.gold_flat_found, self.gold_flat, None),
            ratio(self.pred_nested_correct, self.pred_nested, None),
            ratio(self.gold_nested_found, self.gold_nested, None),
        )

    def supports(self):
        """Flat and nested entity counts of both sides."""
        return {
            "pred_flat": self.pred_flat,
            "pred_nested": self.pred_nested,
            "gold_flat": self.gold_flat,
            "gold_nested": self.gold_nested,
        }


def breakdown_counts(pred, gold, mode="own"):
    """Count flat/nested matches of one sentence.

    :param mode: One of :data:`FLATNESS_MODES`.
    """
    if mode not in FLATNESS_MODES:
        raise ConfigurationError("Unknown flatness mode {!r}".format(mode))
    pred, gold = frozenset(pred), frozenset(gold)
    pred_parts = classify_flat_nested(pred, None if mode == "own" else gold)
    gold_parts = classify_flat_nested(gold)
    return BreakdownCounts(
        pred_flat=len(pred_parts.flat),
        pred_flat_correct=len(pred_parts.flat & gold),
        gold_flat=len(gold_parts.flat),
        gold_flat_found=len(gold_parts.flat & pred),
        pred_nested=len(pred_parts.nested),
        pred_nested_correct=len(pred_parts.nested & gold),
        gold_nested=len(gold_parts.nested),
        gold_nested_found=len(gold_parts.nested & pred),
    )


def fep_fer_nep_ner(pred, gold, mode="own"):
    """Flat and nested precision and recall of one sentence's triple sets."""
    return breakdown_counts(pred, gold, mode).breakdown()


@dataclass
class MetricsReport:
    """Corpus-level evaluation results."""

    precision: float
    recall: float
    f1: float
    fep: Optional[float]
    fer: Optional[float]
    nep: Optional[float]
    ner: Optional[float]
    supports: Dict[str, int] = field(default_factory=dict)
    per_type: Dict[str, Dict[str, float]] = field(default_factory=dict)

    def to_dict(self):
        """Plain dictionary; absent metrics stay ``None``."""
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "fep": self.fep,
            "fer": self.fer,
            "nep": self.nep,
            "ner": self.ner,
            "supports": dict(self.supports),
            "per_type": {t: dict(v) for t, v in sorted(self.per_type.items())},
        }


class EvaluationAccumulator(object):
    """Collect per-sentence matches and merge them into a report."""

    def __init__(self, mode="own"):
        """Start with empty counts."""
        if mode not in FLATNESS_MODES:
            raise ConfigurationError("Unknown flatness mode {!r}".format(mode))
        self.mode = mode
        self.correct = 0
        self.predicted = 0
        self.gold = 0
        self.type_counts = Counter()
        self.breakdown = BreakdownCounts()
        self.sentences = 0

    def add(self, pred, gold):
        """Add one sentence's predicted and gold ``(start, end, type)`` triples."""
        pred, gold = set(pred), set(gold)
        matched = pred & gold
        self.correct += len(matched)
        self.predicted += len(pred)
        self.gold += len(gold)
        for kind, triples in (("correct", matched), ("pred", pred), ("gold", gold)):
            for triple in triples:
                self.type_counts[(triple[-1], kind)] += 1
        self.breakdown += breakdown_counts(pred, gold, self.mode)
        self.sentences += 1

    def merge(self, other):
        """Fold in the counts of another accumulator."""
        self.correct += other.correct
        self.predicted += other.predicted
        self.gold += other.gold
        self.type_counts.update(other.type_counts)
        self.breakdown += other.breakdown
        self.sentences += other.sentences
        return self

    def report(self):
        """Return the :class:`MetricsReport` of everything added so far."""
        prf = prf_from_counts(self.correct, self.predicted, self.gold)
        types = sorted({name for name, _ in self.type_counts})
        per_type = {}
        for name in types:
            correct, pred, gold = (
                self.type_counts[(name, k)] for k in ("correct", "pred", "gold")
            )
            type_prf = prf_from_counts(correct, pred, gold)
            per_type[name] = dict(type_prf._asdict(), support=gold)
        supports = {
            "sentences": self.sentences,
            "gold": self.gold,
            "pred": self.predicted,
            "correct": self.correct,
        }
        supports.update(self.breakdown.supports())
        return MetricsReport(
            *prf, *self.breakdown.breakdown(), supports=supports, per_type=per_type
        )


def evaluate_sets(pairs, mode="own"):
    """Report over ``(pred, gold)`` triple sets, one pair per sentence."""
    accumulator = EvaluationAccumulator(mode)
    for pred, gold in pairs:
        accumulator.add(pred, gold)
    return accumulator.report()
