# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Padded sentence batches with token and grid masks."""

from dataclasses import dataclass
from typing import List, NamedTuple, Optional

import numpy as np

from spangrid.corpus.targets import build_targets
from spangrid.errors import GroupValidationError
from spangrid.model.vocab import PAD_ID


class PieceInput(NamedTuple):
    """Precomputed word-piece embeddings (``p x d``) and per-word piece ranges."""

    embeddings: np.ndarray
    groups: List[tuple]


@dataclass
class Batch:
    """Sentences padded to a common length."""

    lengths: np.ndarray
    sentences: list
    token_ids: Optional[np.ndarray] = None
    pieces: Optional[List[PieceInput]] = None
    targets: Optional[np.ndarray] = None

    def __len__(self):
        """Number of sentences."""
        return len(self.lengths)

    @property
    def max_length(self):
        """Padded length ``n``."""
        return int(self.lengths.max()) if len(self.lengths) else 0

    @property
    def token_mask(self):
        """``B x n`` mask of real tokens."""
        positions = np.arange(self.max_length)
        return positions[None, :] < self.lengths[:, None]

    @property
    def grid_mask(self):
        """``B x n x n`` mask, true iff both indices are real tokens."""
        tokens = self.token_mask
        return tokens[:, :, None] & tokens[:, None, :]


def build_batch(sentences, vocab=None, types=None, pieces=None):
    """Pad ``sentences`` into a :class:`Batch`.

    :param sentences: Non-empty :class:`~spangrid.corpus.types.Sentence` list.
    :param vocab: Vocabulary of the toy encoder (ignored in pieces mode).
    :param types: Type inventory; targets are built when given.
    :param pieces: One :class:`PieceInput` per sentence for the pieces encoder.
    :raises GroupValidationError: piece input is missing for a sentence.
    """
    lengths = np.array([len(sentence) for sentence in sentences], dtype=np.int64)
    length = int(lengths.max()) if len(lengths) else 0
    batch = Batch(lengths=lengths, sentences=list(sentences))
    if pieces is not None:
        if len(pieces) != len(sentences) or any(p is None for p in pieces):
            raise GroupValidationError(
                "Every sentence needs piece embeddings and groups."
            )
        batch.pieces = list(pieces)
    elif vocab is not None:
        token_ids = np.full((len(sentences), length), PAD_ID, dtype=np.int64)
        for row, sentence in enumerate(sentences):
            token_ids[row, : len(sentence)] = vocab.encode(sentence.tokens)
        batch.token_ids = token_ids
    if types is not None:
        targets = np.zeros((len(sentences), length, length, len(types)))
        for row, sentence in enumerate(sentences):
            size = len(sentence)
            targets[row, :size, :size] = build_targets(sentence, types)
        batch.targets = targets
    return batch
