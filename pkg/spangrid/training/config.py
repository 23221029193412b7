# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Training configuration."""

from dataclasses import asdict, dataclass, fields

from spangrid.config import DEFAULT_MAX_SENTENCE_LENGTH, DEFAULT_THRESHOLD
from spangrid.errors import ConfigurationError
from spangrid.model.config import ModelConfig
from spangrid.tensor import resolve_dtype

POSITIVE_KEYS = (
    "epochs",
    "learning_rate",
    "batch_size",
    "kernel_size",
    "cnn_channels",
    "heads",
    "hidden_size",
    "length_embed_dim",
    "max_offset",
    "encoder_dim",
    "ln_eps",
    "adam_eps",
    "max_sentence_length",
)
"""Keys that must be strictly positive."""


@dataclass(frozen=True)
class TrainConfig:
    """Hyper-parameters of one training run.

    ``cnn_channels`` is the biaffine feature size ``r`` as well as the CNN
    width. ``dropout`` and ``grad_clip`` are off at 0.
    """

    epochs: int = 30
    learning_rate: float = 2e-3
    batch_size: int = 32
    cnn_blocks: int = 2
    kernel_size: int = 3
    cnn_channels: int = 32
    heads: int = 2
    hidden_size: int = 64
    warmup_factor: float = 0.1
    length_embed_dim: int = 16
    max_offset: int = 64
    seed: int = 0
    precision: str = "32"
    threshold: float = DEFAULT_THRESHOLD
    encoder_dim: int = 64
    mixer_layers: int = 2
    leaky_slope: float = 0.01
    ln_eps: float = 1e-5
    weight_decay: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    dropout: float = 0.0
    grad_clip: float = 0.0
    max_sentence_length: int = DEFAULT_MAX_SENTENCE_LENGTH

    def __post_init__(self):
        """Check ranges.

        :raises ConfigurationError: a value is out of range.
        """
        for key in POSITIVE_KEYS:
            if not getattr(self, key) > 0:
                raise ConfigurationError(
                    "{0} must be positive, got {1}".format(key, getattr(self, key))
                )
        if not 0.0 <= self.warmup_factor < 1.0:
            raise ConfigurationError(
                "warmup_factor must lie in [0, 1), got {}".format(self.warmup_factor)
            )
        if not 0.0 < self.threshold < 1.0:
            raise ConfigurationError(
                "threshold must lie in (0, 1), got {}".format(self.threshold)
            )
        if not 0.0 <= self.dropout < 1.0:
            raise ConfigurationError("dropout must lie in [0, 1)")
        for key in ("cnn_blocks", "mixer_layers", "seed", "weight_decay", "grad_clip"):
            if getattr(self, key) < 0:
                raise ConfigurationError("{} can't be negative".format(key))
        for key in ("beta1", "beta2"):
            if not 0.0 <= getattr(self, key) < 1.0:
                raise ConfigurationError("{} must lie in [0, 1)".format(key))
        resolve_dtype(self.precision)

    def replace(self, **changes):
        """Copy with some values changed."""
        values = self.to_dict()
        values.update(changes)
        return TrainConfig(**values)

    def to_dict(self):
        """Plain dictionary with every key."""
        return asdict(self)

    @classmethod
    def from_dict(cls, values):
        """Build from a flat mapping.

        :raises ConfigurationError: a key is unknown.
        """
        known = {field.name for field in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigurationError("Unknown configuration keys: {}".format(unknown))
        values = dict(values)
        if "precision" in values:
            values["precision"] = str(values["precision"])
        return cls(**values)

    def model_config(self, num_types, vocab_size, encoder_mode="toy"):
        """Scorer configuration implied by these hyper-parameters."""
        return ModelConfig(
            hidden_size=self.hidden_size,
            biaffine_feature_size=self.cnn_channels,
            num_heads=self.heads,
            length_embed_dim=self.length_embed_dim,
            max_offset=self.max_offset,
            cnn_blocks=self.cnn_blocks,
            kernel_size=self.kernel_size,
            num_types=num_types,
            encoder_dim=self.encoder_dim,
            leaky_slope=self.leaky_slope,
            ln_eps=self.ln_eps,
            vocab_size=vocab_size,
            mixer_layers=self.mixer_layers,
            encoder_mode=encoder_mode,
            precision=self.precision,
        )
