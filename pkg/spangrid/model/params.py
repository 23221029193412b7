# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Learnable arrays of the span scorer."""

import logging
from collections import OrderedDict

import numpy as np

from spangrid.errors import DimensionError
from spangrid.tensor import Tensor

EMBEDDING_STD = 0.02
"""Standard deviation of embedding table initialisation."""

ZERO_INIT = ("output.b",)
"""Parameters starting at zero."""


def parameter_shapes(config):
    """Return the ordered ``name -> shape`` layout implied by ``config``."""
    d = config.encoder_dim
    h = config.hidden_size
    r = config.biaffine_feature_size
    c = config.length_embed_dim
    k = config.kernel_size
    shapes = OrderedDict()
    if config.encoder_mode == "toy":
        shapes["encoder.embeddings"] = (config.vocab_size, d)
    for layer in range(config.mixer_layers):
        shapes["encoder.mixer.{}.kernel".format(layer)] = (
            config.mixer_kernel_size,
            d,
            d,
        )
    shapes["projection.start"] = (d, h)
    shapes["projection.end"] = (d, h)
    shapes["biaffine.length_embeddings"] = (2 * config.max_offset + 1, c)
    shapes["biaffine.W"] = (2 * h + c, r)
    for head in range(config.num_heads):
        shapes["biaffine.U.{}".format(head)] = (
            config.head_hidden_size,
            config.head_feature_size,
            config.head_hidden_size,
        )
    for block in range(config.cnn_blocks):
        shapes["cnn.{}.kernel".format(block)] = (k, k, r, r)
        shapes["cnn.{}.gamma".format(block)] = (r,)
        shapes["cnn.{}.beta".format(block)] = (r,)
    if config.cnn_blocks:
        shapes["cnn.final.kernel"] = (k, k, r, r)
    shapes["output.W"] = (config.num_types, r)
    shapes["output.b"] = (config.num_types,)
    return shapes


def _fans(name, shape):
    if len(shape) == 2:
        return shape[0], shape[1]
    if name.startswith("biaffine.U"):
        return shape[0] * shape[2], shape[1]
    receptive = int(np.prod(shape[:-2]))
    return receptive * shape[-2], receptive * shape[-1]


def _initial_values(name, shape, rng):
    if name.endswith(".gamma"):
        return np.ones(shape)
    if name.endswith(".beta") or name in ZERO_INIT:
        return np.zeros(shape)
    if name in ("encoder.embeddings", "biaffine.length_embeddings"):
        return rng.normal(0.0, EMBEDDING_STD, size=shape)
    fan_in, fan_out = _fans(name, shape)
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


class ModelParams(object):
    """Ordered collection of named parameter tensors."""

    def __init__(self, tensors):
        """Wrap an ordered ``name -> Tensor`` mapping."""
        self.tensors = OrderedDict(tensors)

    @classmethod
    def initialize(cls, config, rng, zero_head=False):
        """Draw fresh parameters.

        Matrices and kernels are Glorot-uniform, embedding tables are
        ``N(0, 0.02)``, LayerNorm starts at identity and biases at zero.

        :param config: :class:`~spangrid.model.config.ModelConfig`.
        :param rng: ``numpy.random.Generator`` consumed in parameter order.
        :param zero_head: Start ``output.W`` at zero as well, so every
            probability starts at exactly one half.
        """
        tensors = OrderedDict()
        for name, shape in parameter_shapes(config).items():
            values = _initial_values(name, shape, rng)
            if zero_head and name.startswith("output."):
                values = np.zeros(shape)
            tensors[name] = Tensor(
                values, requires_grad=True, name=name, dtype=config.dtype
            )
        logging.debug(
            "Initialised {0} parameter arrays, {1} values".format(
                len(tensors), sum(t.size for t in tensors.values())
            )
        )
        return cls(tensors)

    @classmethod
    def zeros(cls, config):
        """All-zero parameters (LayerNorm gains included)."""
        return cls.from_arrays(
            config,
            {name: np.zeros(shape) for name, shape in parameter_shapes(config).items()},
        )

    @classmethod
    def from_arrays(cls, config, arrays):
        """Build from plain arrays, checking every shape against ``config``.

        :raises DimensionError: an array is missing or has the wrong shape.
        """
        tensors = OrderedDict()
        for name, shape in parameter_shapes(config).items():
            if name not in arrays:
                raise DimensionError("Parameter {} is missing".format(name), shape)
            values = np.asarray(arrays[name])
            if values.shape != tuple(shape):
                raise DimensionError(
                    "Parameter {} has the wrong shape".format(name), values.shape, shape
                )
            tensors[name] = Tensor(
                values.copy(), requires_grad=True, name=name, dtype=config.dtype
            )
        return cls(tensors)

    def __getitem__(self, name):
        """Return the tensor called ``name``."""
        return self.tensors[name]

    def __contains__(self, name):
        """Whether a parameter called ``name`` exists."""
        return name in self.tensors

    def __iter__(self):
        """Iterate over parameter names in layout order."""
        return iter(self.tensors)

    def __len__(self):
        """Number of parameter arrays."""
        return len(self.tensors)

    def items(self):
        """``(name, tensor)`` pairs in layout order."""
        return self.tensors.items()

    def arrays(self):
        """Ordered ``name -> ndarray`` copy of the current values."""
        return OrderedDict((name, t.values.copy()) for name, t in self.tensors.items())

    def zero_grad(self):
        """Forget every accumulated gradient."""
        for tensor in self.tensors.values():
            tensor.zero_grad()
