# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Token vocabulary of the toy encoder."""

from collections import Counter

import numpy as np

from spangrid.config import PAD_TOKEN, UNK_TOKEN

PAD_ID = 0
UNK_ID = 1


class Vocabulary(object):
    """Token to row mapping with reserved PAD and UNK rows."""

    def __init__(self, tokens=()):
        """Build from the non-reserved tokens in row order."""
        self.tokens = [PAD_TOKEN, UNK_TOKEN] + [
            token for token in tokens if token not in (PAD_TOKEN, UNK_TOKEN)
        ]
        self.index = {token: row for row, token in enumerate(self.tokens)}

    @classmethod
    def from_sentences(cls, sentences, min_count=1):
        """Collect tokens by descending frequency, ties in string order."""
        counts = Counter(token for sentence in sentences for token in sentence.tokens)
        ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
        return cls(token for token, count in ordered if count >= min_count)

    def __len__(self):
        """Number of rows, reserved ones included."""
        return len(self.tokens)

    def encode(self, tokens):
        """Return row ids; unknown tokens map to UNK."""
        return np.array([self.index.get(token, UNK_ID) for token in tokens], np.int64)

    def to_list(self):
        """Serialisable form (non-reserved tokens only)."""
        return self.tokens[2:]
