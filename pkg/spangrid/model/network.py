# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Span scorer bundled with its vocabulary and type inventory."""

import logging

import numpy as np

from spangrid.errors import CheckpointError, CheckpointVersionError
from spangrid.model.batch import build_batch
from spangrid.model.checkpoint import load_checkpoint, save_checkpoint
from spangrid.model.config import ModelConfig
from spangrid.model.params import ModelParams, parameter_shapes
from spangrid.model.scorer import bce_loss, forward_batch
from spangrid.model.vocab import Vocabulary

PARAMETER_PREFIX = "param."
"""Checkpoint record prefix of model parameters."""


class SpanScorer(object):
    """Scorer configuration, parameters, vocabulary and entity types."""

    def __init__(self, config, params, vocab, types):
        """Bundle an initialised model.

        :param config: :class:`~spangrid.model.config.ModelConfig`.
        :param params: :class:`~spangrid.model.params.ModelParams`.
        :param vocab: :class:`~spangrid.model.vocab.Vocabulary`.
        :param types: Ordered entity type names, one output channel each.
        """
        self.config = config
        self.params = params
        self.vocab = vocab
        self.types = list(types)

    @classmethod
    def create(cls, config, vocab, types, rng, zero_head=False):
        """Initialise a fresh model; vocabulary and type count fix the config."""
        config = config.replace(vocab_size=len(vocab), num_types=len(types))
        params = ModelParams.initialize(config, rng, zero_head=zero_head)
        return cls(config, params, vocab, types)

    def batch(self, sentences, with_targets=False, pieces=None):
        """Pad ``sentences`` for this model."""
        return build_batch(
            sentences,
            vocab=self.vocab,
            types=self.types if with_targets else None,
            pieces=pieces,
        )

    def forward(self, batch, rng=None, dropout=0.0):
        """Run the forward pass; see :func:`~spangrid.model.scorer.forward_batch`."""
        return forward_batch(self.params, self.config, batch, rng=rng, dropout=dropout)

    def loss(self, batch, rng=None, dropout=0.0):
        """Mean BCE of a batch built with targets."""
        output = self.forward(batch, rng=rng, dropout=dropout)
        return bce_loss(output.probs, batch.targets, batch.grid_mask), output

    def probabilities(self, sentences, pieces=None):
        """Per-sentence ``n x n x |T|`` probability grids, padding removed."""
        sentences = list(sentences)
        if not sentences:
            return []
        batch = self.batch(sentences, pieces=pieces)
        probs = self.forward(batch).probs.values
        return [
            probs[row, :length, :length] for row, length in enumerate(batch.lengths)
        ]

    def header(self):
        """Checkpoint header describing this model."""
        return {
            "model_config": self.config.to_dict(),
            "vocabulary": self.vocab.to_list(),
            "types": list(self.types),
        }

    def save(self, path, extra_header=None, extra_arrays=None):
        """Write the model, plus optional training state, to ``path``."""
        header = self.header()
        header.update(extra_header or {})
        arrays = {
            PARAMETER_PREFIX + name: values
            for name, values in self.params.arrays().items()
        }
        arrays.update(extra_arrays or {})
        save_checkpoint(path, header, arrays)

    @classmethod
    def from_checkpoint(cls, header, arrays, expected_config=None):
        """Rebuild a model from decoded checkpoint contents.

        :param expected_config: When given, every field of this config must
            match the checkpoint's echo.
        :raises CheckpointVersionError: the configurations disagree.
        :raises CheckpointError: the header or a parameter is missing.
        """
        try:
            config = ModelConfig.from_dict(header["model_config"])
            vocab = Vocabulary(header["vocabulary"])
            types = header["types"]
        except KeyError as e:
            raise CheckpointError("Checkpoint header lacks {}".format(e))
        if expected_config is not None and expected_config != config:
            mismatched = sorted(
                key
                for key, value in expected_config.to_dict().items()
                if config.to_dict().get(key) != value
            )
            raise CheckpointVersionError(
                "Checkpoint configuration differs in: {}".format(", ".join(mismatched))
            )
        params = {}
        for name in parameter_shapes(config):
            if PARAMETER_PREFIX + name not in arrays:
                raise CheckpointError("Checkpoint lacks parameter {}".format(name))
            params[name] = arrays[PARAMETER_PREFIX + name]
        model = cls(config, ModelParams.from_arrays(config, params), vocab, types)
        logging.debug(
            "Loaded model with {0} types and {1} vocabulary rows".format(
                len(types), len(vocab)
            )
        )
        return model

    @classmethod
    def load(cls, path, expected_config=None):
        """Read a model from a checkpoint file."""
        header, arrays = load_checkpoint(path)
        return cls.from_checkpoint(header, arrays, expected_config=expected_config)

    def parameter_count(self):
        """Total number of learnable values."""
        return int(sum(np.prod(t.shape) for _, t in self.params.items()))
