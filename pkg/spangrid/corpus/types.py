# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Corpus data model."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from spangrid.config import SPLIT_NAMES


@dataclass(frozen=True, order=True)
class Entity:
    """Typed span with inclusive token bounds."""

    start: int
    end: int
    type: str

    def as_triple(self):
        """Return ``(start, end, type)``."""
        return (self.start, self.end, self.type)

    def overlaps(self, other):
        """Whether both spans share at least one token."""
        return self.start <= other.end and other.start <= self.end

    def crosses(self, other):
        """Whether the spans partially overlap (neither nests in the other)."""
        return spans_cross((self.start, self.end), (other.start, other.end))

    def to_dict(self):
        """Record form used by the corpus file format."""
        return {"start": self.start, "end": self.end, "type": self.type}


def spans_cross(first, second):
    """Crossing predicate on ``(start, end)`` pairs.

    Spans cross iff ``s1 < s2 <= e1 < e2`` or ``s2 < s1 <= e2 < e1``; nesting
    and identity are not crossings.
    """
    (s1, e1), (s2, e2) = first, second
    return (s1 < s2 <= e1 < e2) or (s2 < s1 <= e2 < e1)


@dataclass(frozen=True)
class Sentence:
    """Tokens with their gold entities."""

    tokens: Tuple[str, ...]
    entities: Tuple[Entity, ...] = ()
    doc_id: Optional[str] = None

    def __len__(self):
        """Number of tokens."""
        return len(self.tokens)

    def triples(self):
        """Set of ``(start, end, type)`` gold triples."""
        return {entity.as_triple() for entity in self.entities}

    def with_entities(self, entities):
        """Copy with another entity list."""
        return Sentence(self.tokens, tuple(entities), self.doc_id)

    def to_dict(self):
        """Record form used by the corpus file format."""
        record = {
            "tokens": list(self.tokens),
            "entities": [entity.to_dict() for entity in self.entities],
        }
        if self.doc_id is not None:
            record["doc_id"] = self.doc_id
        return record


@dataclass(frozen=True)
class Document:
    """Unsplit document with candidate sentence boundaries."""

    doc_id: str
    tokens: Tuple[str, ...]
    entities: Tuple[Entity, ...] = ()
    boundaries: Optional[Tuple[int, ...]] = None


@dataclass
class Corpus:
    """Train/dev/test splits and the entity type inventory."""

    splits: Dict[str, List[Sentence]] = field(default_factory=dict)
    types: List[str] = field(default_factory=list)

    def __post_init__(self):
        """Make sure every split exists and the inventory covers all types."""
        for name in SPLIT_NAMES:
            self.splits.setdefault(name, [])
        seen = set(self.types)
        for sentences in self.splits.values():
            for sentence in sentences:
                seen.update(entity.type for entity in sentence.entities)
        self.types = sorted(seen)

    @property
    def train(self):
        """Training sentences."""
        return self.splits["train"]

    @property
    def dev(self):
        """Development sentences."""
        return self.splits["dev"]

    @property
    def test(self):
        """Test sentences."""
        return self.splits["test"]

    def sentences(self):
        """Every sentence across the splits, in split order."""
        names = list(SPLIT_NAMES) + [n for n in self.splits if n not in SPLIT_NAMES]
        return [s for name in names for s in self.splits[name]]

    def type_index(self):
        """``type -> channel`` mapping."""
        return {name: index for index, name in enumerate(self.types)}
