# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Minimal dense tensors with reverse-mode differentiation."""

from spangrid.tensor.core import (
    Graph,
    Tensor,
    backward,
    current_graph,
    numerical_gradient,
    relative_error,
    resolve_dtype,
)

__all__ = (
    "Graph",
    "Tensor",
    "backward",
    "current_graph",
    "numerical_gradient",
    "relative_error",
    "resolve_dtype",
)
