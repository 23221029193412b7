# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Greedy non-crossing decoding of span probability grids."""

from typing import NamedTuple, Tuple

import numpy as np

from spangrid.config import DEFAULT_THRESHOLD
from spangrid.corpus.types import spans_cross
from spangrid.errors import ConfigurationError


class CandidateSpan(NamedTuple):
    """Span surviving the threshold, with its averaged per-type scores."""

    start: int
    end: int
    scores: Tuple[float, ...]
    max_score: float


class DecodedEntity(NamedTuple):
    """Selected span and the ``(type id, score)`` pairs above threshold."""

    start: int
    end: int
    types: Tuple[Tuple[int, float], ...]

    def triples(self, type_names=None):
        """``(start, end, type)`` per retained type."""
        return [
            (self.start, self.end, type_names[t] if type_names else t)
            for t, _ in self.types
        ]


def check_threshold(threshold):
    """Raise :class:`ConfigurationError` unless ``0 < threshold < 1``."""
    if not 0.0 < threshold < 1.0:
        raise ConfigurationError(
            "Threshold must lie strictly between 0 and 1, got {}".format(threshold)
        )


def symmetrize(probs):
    """Average mirrored cells into the upper triangle.

    ``out[i, j, t] = (P[i, j, t] + P[j, i, t]) / 2`` for ``i <= j``; the
    strict lower triangle is zero.
    """
    probs = np.asarray(probs, dtype=np.float64)
    length = probs.shape[0]
    upper = np.triu(np.ones((length, length), dtype=bool))[..., None]
    return np.where(upper, (probs + np.swapaxes(probs, 0, 1)) / 2.0, 0.0)


def prune_and_rank(scores, threshold=DEFAULT_THRESHOLD):
    """Keep spans whose best type beats ``threshold`` and rank them.

    Ordering is by best score descending, then start and end ascending.
    """
    check_threshold(threshold)
    scores = np.asarray(scores)
    best = scores.max(axis=-1) if scores.size else np.zeros(scores.shape[:2])
    starts, ends = np.nonzero(np.triu(best > threshold))
    candidates = [
        CandidateSpan(
            int(start),
            int(end),
            tuple(float(s) for s in scores[start, end]),
            float(best[start, end]),
        )
        for start, end in zip(starts, ends)
    ]
    return sorted(candidates, key=lambda c: (-c.max_score, c.start, c.end))


def greedy_select(ranked, threshold=DEFAULT_THRESHOLD, argmax_only=False):
    """Accept ranked spans that cross no previously accepted span.

    Nesting is allowed; a span identical to an accepted one is skipped.

    :param ranked: Output of :func:`prune_and_rank`.
    :param threshold: Per-type score a retained type must exceed.
    :param argmax_only: Report only the best type of each span.
    """
    accepted = []
    seen = set()
    for candidate in ranked:
        span = (candidate.start, candidate.end)
        if span in seen:
            continue
        if any(spans_cross(span, (other.start, other.end)) for other in accepted):
            continue
        if argmax_only:
            best = int(np.argmax(candidate.scores))
            types = ((best, candidate.scores[best]),)
        else:
            types = tuple(
                (t, score)
                for t, score in enumerate(candidate.scores)
                if score > threshold
            )
        seen.add(span)
        accepted.append(DecodedEntity(candidate.start, candidate.end, types))
    return accepted


def decode(probs, threshold=DEFAULT_THRESHOLD, argmax_only=False):
    """Symmetrize, prune, rank and greedily select entities of one sentence."""
    ranked = prune_and_rank(symmetrize(probs), threshold)
    return greedy_select(ranked, threshold, argmax_only=argmax_only)


def prediction_record(sentence, decoded, type_names):
    """Serialisable prediction of one sentence, entities in span order."""
    entities = [
        {
            "start": entity.start,
            "end": entity.end,
            "type": type_names[t],
            "score": score,
        }
        for entity in decoded
        for t, score in entity.types
    ]
    entities.sort(key=lambda e: (e["start"], e["end"], e["type"]))
    record = {"tokens": list(sentence.tokens), "entities": entities}
    if sentence.doc_id is not None:
        record["doc_id"] = sentence.doc_id
    return record
