# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Finite difference check of the full scorer gradients."""

import logging
from collections import OrderedDict

import numpy as np

from spangrid.config import GRADCHECK_STEP
from spangrid.corpus.types import Entity, Sentence
from spangrid.model.config import ModelConfig
from spangrid.model.network import SpanScorer
from spangrid.model.vocab import Vocabulary
from spangrid.tensor import Graph, backward, numerical_gradient, relative_error

GRADCHECK_TYPES = ("A", "B", "C")
"""Entity types of the checked sentence."""

UNIT_SCALE_TABLES = ("encoder.embeddings", "biaffine.length_embeddings")
"""Tables redrawn from ``N(0, 1)`` before checking.

At their training scale of ``N(0, 0.02)`` a finite difference step of
``1e-3`` is no longer small against the activations it moves.
"""


def gradcheck_config(**overrides):
    """Small 64-bit configuration: ``h=16``, ``r=8``, two heads, one CNN block."""
    values = dict(
        hidden_size=16,
        biaffine_feature_size=8,
        num_heads=2,
        length_embed_dim=4,
        max_offset=8,
        cnn_blocks=1,
        kernel_size=3,
        num_types=len(GRADCHECK_TYPES),
        encoder_dim=8,
        vocab_size=12,
        precision="64",
    )
    values.update(overrides)
    return ModelConfig(**values)


def gradcheck_sentence(length, rng, vocab_size=10):
    """Random sentence with a nested pair and one flat entity."""
    tokens = tuple("t{}".format(i) for i in rng.integers(0, vocab_size, size=length))
    entities = []
    if length >= 3:
        entities += [Entity(0, 2, "A"), Entity(1, 1, "B")]
    if length >= 6:
        entities.append(Entity(3, length - 1, "C"))
    return Sentence(tokens=tokens, entities=tuple(entities), doc_id="gradcheck")


def gradcheck(config=None, seed=0, length=6, step=GRADCHECK_STEP):
    """Compare analytic and central difference gradients of every parameter.

    Embedding tables are redrawn at unit scale, see
    :data:`UNIT_SCALE_TABLES`.

    :param config: Scorer configuration, 64-bit precision expected.
    :param seed: Seed of parameters and checked sentence.
    :param length: Token count of the checked sentence.
    :param step: Finite difference step.
    :return: Ordered ``name -> relative error`` mapping.
    """
    config = config or gradcheck_config()
    if config.precision != "64":
        logging.warning("Gradient check in {}-bit precision".format(config.precision))
    rng = np.random.default_rng(seed)
    sentence = gradcheck_sentence(length, rng)
    vocab = Vocabulary("t{}".format(i) for i in range(10))
    model = SpanScorer.create(config, vocab, GRADCHECK_TYPES, rng)
    for name in UNIT_SCALE_TABLES:
        table = model.params[name]
        table.values[...] = rng.normal(0.0, 1.0, size=table.shape)
    batch = model.batch([sentence], with_targets=True)

    with Graph():
        loss, _ = model.loss(batch)
        backward(loss)

    def objective():
        return model.loss(batch)[0].item()

    errors = OrderedDict()
    for name, tensor in model.params.items():
        analytic = tensor.grad if tensor.grad is not None else np.zeros(tensor.shape)
        numeric = numerical_gradient(objective, tensor, step)
        errors[name] = relative_error(analytic, numeric)
        logging.debug("{0}: relative error {1:.3e}".format(name, errors[name]))
    return errors
