# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Corpus statistics per split."""

from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Dict

from spangrid.config import SPLIT_NAMES
from spangrid.metrics import classify_flat_nested

STATS_FIELDS = (
    "sentences",
    "mentions",
    "avg_sentence_length",
    "avg_mention_length",
    "overlapping_mentions",
    "flat_mentions",
    "nested_mentions",
    "multi_type_spans",
    "max_sentence_length",
)
"""Report keys of every split, in display order."""


@dataclass
class SplitStats:
    """Counts and averages of one split."""

    sentences: int = 0
    mentions: int = 0
    avg_sentence_length: float = 0.0
    avg_mention_length: float = 0.0
    overlapping_mentions: int = 0
    flat_mentions: int = 0
    nested_mentions: int = 0
    multi_type_spans: int = 0
    max_sentence_length: int = 0
    type_counts: Dict[str, int] = field(default_factory=dict)


@dataclass
class StatsReport:
    """Per-split statistics of a corpus."""

    splits: Dict[str, SplitStats] = field(default_factory=dict)

    def to_dict(self):
        """Nested dictionary with fixed key names."""
        return {name: asdict(stats) for name, stats in self.splits.items()}

    def rows(self):
        """One ``(split, *STATS_FIELDS)`` row per split."""
        return [
            (name,) + tuple(getattr(stats, key) for key in STATS_FIELDS)
            for name, stats in self.splits.items()
        ]


def split_stats(sentences):
    """Statistics of a list of sentences.

    A mention is overlapping when it shares a token with another mention of
    its sentence; each such mention is counted once.
    """
    stats = SplitStats(sentences=len(sentences))
    token_total = 0
    mention_length_total = 0
    types = Counter()
    for sentence in sentences:
        token_total += len(sentence)
        stats.max_sentence_length = max(stats.max_sentence_length, len(sentence))
        triples = sentence.triples()
        parts = classify_flat_nested(triples)
        stats.mentions += len(triples)
        stats.flat_mentions += len(parts.flat)
        stats.nested_mentions += len(parts.nested)
        mention_length_total += sum(end - start + 1 for start, end, _ in triples)
        spans = Counter((start, end) for start, end, _ in triples)
        stats.multi_type_spans += sum(1 for count in spans.values() if count > 1)
        types.update(t for _, _, t in triples)
    stats.overlapping_mentions = stats.nested_mentions
    if sentences:
        stats.avg_sentence_length = token_total / len(sentences)
    if stats.mentions:
        stats.avg_mention_length = mention_length_total / stats.mentions
    stats.type_counts = dict(sorted(types.items()))
    return stats


def corpus_stats(corpus):
    """Return the :class:`StatsReport` of every split of ``corpus``."""
    names = list(SPLIT_NAMES) + [n for n in corpus.splits if n not in SPLIT_NAMES]
    return StatsReport({name: split_stats(corpus.splits[name]) for name in names})
