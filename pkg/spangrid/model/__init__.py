# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Span scorer: configuration, parameters, forward pass and persistence."""

from spangrid.model.batch import Batch, PieceInput, build_batch
from spangrid.model.config import ModelConfig
from spangrid.model.network import SpanScorer
from spangrid.model.params import ModelParams, parameter_shapes
from spangrid.model.vocab import Vocabulary

__all__ = (
    "Batch",
    "ModelConfig",
    "ModelParams",
    "PieceInput",
    "SpanScorer",
    "Vocabulary",
    "build_batch",
    "parameter_shapes",
)
