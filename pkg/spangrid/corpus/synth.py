# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Seeded synthetic nested-NER corpora.

Every type owns a lexicon of tokens; the remaining vocabulary is filler.
A flat entity is a run of its type's lexicon tokens. A nesting entity wraps
an inner entity of another type between an optional prefix token and one
suffix token of its own lexicon. Top-level entities are separated by at
least one filler token, so no two of them ever overlap and crossing is
impossible.
"""

import logging

import numpy as np

from spangrid.config import SPLIT_NAMES
from spangrid.corpus.types import Corpus, Entity, Sentence
from spangrid.errors import GenerationError

ENTITY_START_PROBABILITY = 0.35
"""Chance of opening an entity at a free position."""

FLAT_LENGTHS = (1, 3)
"""Inclusive length range of flat entities."""

INNER_LENGTHS = (1, 2)
"""Inclusive length range of entities nested inside another."""


def type_names(count):
    """Generated type names ``T0``, ``T1``, ..."""
    return ["T{}".format(index) for index in range(count)]


def nest_probability(nesting_rate):
    """Per-entity nesting probability giving ``nesting_rate`` overlapping mentions.

    A nesting entity contributes two overlapping mentions and a flat one a
    single non-overlapping mention, so ``2q / (1 + q) = rate``.
    """
    return nesting_rate / (2.0 - nesting_rate)


class _Lexicon(object):
    def __init__(self, vocab_size, num_types):
        tokens = ["w{}".format(index) for index in range(vocab_size)]
        size = max(2, (vocab_size // 2) // num_types)
        if size * num_types >= vocab_size:
            raise GenerationError(
                "Vocabulary of {0} leaves no filler tokens for {1} types".format(
                    vocab_size, num_types
                )
            )
        self.types = [tokens[t * size : (t + 1) * size] for t in range(num_types)]
        self.filler = tokens[num_types * size :]

    def draw(self, rng, pool, count):
        return [pool[i] for i in rng.integers(0, len(pool), size=count)]


def _validate(vocab_size, length_range, nesting_rate, num_types):
    low, high = length_range
    if num_types < 1:
        raise GenerationError("Need at least one entity type.")
    if vocab_size < 2 * num_types + 1:
        raise GenerationError(
            "Vocabulary of {0} is too small for {1} types".format(vocab_size, num_types)
        )
    if low < 1 or low > high:
        raise GenerationError("Invalid length range {}".format(tuple(length_range)))
    if not 0.0 <= nesting_rate <= 1.0:
        raise GenerationError(
            "Nesting rate must lie in [0, 1], got {}".format(nesting_rate)
        )
    if nesting_rate > 0 and high < 2:
        raise GenerationError("Nested entities need sentences of at least 2 tokens.")


def _entity(rng, lexicon, num_types, nest, room):
    """Return ``(tokens, entities relative to 0)`` or ``None`` if nothing fits."""
    outer = int(rng.integers(0, num_types))
    if nest:
        inner_type = outer
        if num_types > 1:
            inner_type = (outer + 1 + int(rng.integers(0, num_types - 1))) % num_types
        inner_length = int(rng.integers(INNER_LENGTHS[0], INNER_LENGTHS[1] + 1))
        prefix = int(rng.integers(0, 2))
        while prefix + inner_length + 1 > room and (prefix or inner_length > 1):
            if prefix:
                prefix = 0
            else:
                inner_length -= 1
        if prefix + inner_length + 1 > room:
            return None
        tokens = (
            lexicon.draw(rng, lexicon.types[outer], prefix)
            + lexicon.draw(rng, lexicon.types[inner_type], inner_length)
            + lexicon.draw(rng, lexicon.types[outer], 1)
        )
        total = len(tokens)
        entities = [
            Entity(0, total - 1, "T{}".format(outer)),
            Entity(prefix, prefix + inner_length - 1, "T{}".format(inner_type)),
        ]
        return tokens, entities
    length = min(int(rng.integers(FLAT_LENGTHS[0], FLAT_LENGTHS[1] + 1)), room)
    if length < 1:
        return None
    tokens = lexicon.draw(rng, lexicon.types[outer], length)
    return tokens, [Entity(0, length - 1, "T{}".format(outer))]


def synth_sentence(rng, lexicon, length, num_types, nest_prob, doc_id):
    """Generate one sentence of exactly ``length`` tokens."""
    tokens = []
    entities = []
    while len(tokens) < length:
        room = length - len(tokens)
        if rng.random() < ENTITY_START_PROBABILITY:
            nest = bool(rng.random() < nest_prob)
            drawn = _entity(rng, lexicon, num_types, nest, room)
            if drawn is None:
                tokens.extend(lexicon.draw(rng, lexicon.filler, 1))
                continue
            offset = len(tokens)
            tokens.extend(drawn[0])
            entities.extend(
                Entity(e.start + offset, e.end + offset, e.type) for e in drawn[1]
            )
            if len(tokens) < length:
                tokens.extend(lexicon.draw(rng, lexicon.filler, 1))
        else:
            tokens.extend(lexicon.draw(rng, lexicon.filler, 1))
    tokens.extend(lexicon.draw(rng, lexicon.filler, length - len(tokens)))
    return Sentence(tuple(tokens), tuple(sorted(entities)), doc_id)


def synth_generate(
    vocab_size,
    n_sentences,
    length_range=(5, 15),
    nesting_rate=0.3,
    num_types=3,
    seed=0,
    dev_sentences=0,
    test_sentences=0,
):
    """Generate a synthetic corpus, bitwise reproducible from ``seed``.

    :param n_sentences: Training sentences; ``dev_sentences`` and
        ``test_sentences`` follow from the same generator.
    :param nesting_rate: Target fraction of overlapping mentions.
    :raises GenerationError: the constraints can't be satisfied.
    """
    _validate(vocab_size, length_range, nesting_rate, num_types)
    lexicon = _Lexicon(vocab_size, num_types)
    rng = np.random.default_rng(seed)
    nest_prob = nest_probability(nesting_rate)
    sizes = (n_sentences, dev_sentences, test_sentences)
    splits = {}
    index = 0
    for name, size in zip(SPLIT_NAMES, sizes):
        splits[name] = []
        for _ in range(size):
            length = int(rng.integers(length_range[0], length_range[1] + 1))
            doc_id = "synth-{}".format(index)
            splits[name].append(
                synth_sentence(rng, lexicon, length, num_types, nest_prob, doc_id)
            )
            index += 1
    logging.info(
        "Generated {0} synthetic sentences (seed {1}, nesting rate {2})".format(
            index, seed, nesting_rate
        )
    )
    return Corpus(splits=splits, types=type_names(num_types))
