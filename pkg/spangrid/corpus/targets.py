# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Span enumeration and symmetric target grids."""

import numpy as np


def enumerate_spans(length):
    """Return every valid ``(start, end)`` of a sentence, ``n(n+1)/2`` in total."""
    return [(start, end) for start in range(length) for end in range(start, length)]


def build_targets(sentence, types):
    """Binary ``n x n x |T|`` target grid of a sentence.

    Both ``Y[s, e, t]`` and ``Y[e, s, t]`` are set for every gold entity, so
    the grid is symmetric in its first two axes.

    :param sentence: Validated :class:`~spangrid.corpus.types.Sentence`.
    :param types: Type inventory (sequence of names, or ``name -> channel``).
    """
    index = types if isinstance(types, dict) else {t: i for i, t in enumerate(types)}
    length = len(sentence)
    targets = np.zeros((length, length, len(index)), dtype=np.float64)
    for entity in sentence.entities:
        channel = index[entity.type]
        targets[entity.start, entity.end, channel] = 1.0
        targets[entity.end, entity.start, channel] = 1.0
    return targets
