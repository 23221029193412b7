# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Corpus data model, files, preprocessing, statistics and synthetic data."""

from spangrid.corpus.types import Corpus, Document, Entity, Sentence, spans_cross
from spangrid.corpus.targets import build_targets, enumerate_spans

__all__ = (
    "Corpus",
    "Document",
    "Entity",
    "Sentence",
    "build_targets",
    "enumerate_spans",
    "spans_cross",
)
