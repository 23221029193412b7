# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Span scorer configuration."""

from dataclasses import asdict, dataclass, fields

from spangrid.errors import ConfigurationError
from spangrid.tensor import resolve_dtype

ENCODER_MODES = ("toy", "pieces")
"""Token encoders: trainable embeddings, or precomputed word-piece embeddings."""


@dataclass(frozen=True)
class ModelConfig:
    """Extents and constants of the span scorer.

    ``biaffine_feature_size`` is both the width of the biaffine grid and the
    channel count of every CNN block, so residual additions line up.
    ``cnn_blocks`` may be zero, which removes the CNN refiner altogether.
    """

    hidden_size: int
    biaffine_feature_size: int
    num_heads: int
    length_embed_dim: int
    max_offset: int
    cnn_blocks: int
    kernel_size: int
    num_types: int
    encoder_dim: int
    leaky_slope: float = 0.01
    ln_eps: float = 1e-5
    vocab_size: int = 2
    mixer_layers: int = 2
    mixer_kernel_size: int = 3
    encoder_mode: str = "toy"
    precision: str = "32"

    def __post_init__(self):
        """Validate extents.

        :raises ConfigurationError: an invariant doesn't hold.
        """
        for name in (
            "hidden_size",
            "biaffine_feature_size",
            "num_heads",
            "length_embed_dim",
            "max_offset",
            "kernel_size",
            "num_types",
            "encoder_dim",
            "mixer_kernel_size",
        ):
            if getattr(self, name) < 1:
                raise ConfigurationError(
                    "{0} must be at least 1, got {1}".format(name, getattr(self, name))
                )
        if self.cnn_blocks < 0 or self.mixer_layers < 0:
            raise ConfigurationError("Block and layer counts can't be negative.")
        if self.hidden_size % self.num_heads:
            raise ConfigurationError(
                "hidden_size {0} is not divisible by {1} heads".format(
                    self.hidden_size, self.num_heads
                )
            )
        if self.biaffine_feature_size % self.num_heads:
            raise ConfigurationError(
                "biaffine_feature_size {0} is not divisible by {1} heads".format(
                    self.biaffine_feature_size, self.num_heads
                )
            )
        for name in ("kernel_size", "mixer_kernel_size"):
            if getattr(self, name) % 2 == 0:
                raise ConfigurationError(
                    "{0} must be odd, got {1}".format(name, getattr(self, name))
                )
        if self.encoder_mode not in ENCODER_MODES:
            raise ConfigurationError(
                "Unknown encoder mode {!r}".format(self.encoder_mode)
            )
        if self.encoder_mode == "toy" and self.vocab_size < 2:
            raise ConfigurationError("Toy encoder needs PAD and UNK vocabulary rows.")
        if self.leaky_slope < 0 or self.ln_eps <= 0:
            raise ConfigurationError("leaky_slope must be >= 0 and ln_eps > 0.")
        resolve_dtype(self.precision)

    @property
    def head_hidden_size(self):
        """Hidden size of one head, ``h_k``."""
        return self.hidden_size // self.num_heads

    @property
    def head_feature_size(self):
        """Biaffine features of one head, ``r_k``."""
        return self.biaffine_feature_size // self.num_heads

    @property
    def dtype(self):
        """Numpy dtype of the precision mode."""
        return resolve_dtype(self.precision)

    def replace(self, **changes):
        """Return a copy with some fields changed."""
        values = self.to_dict()
        values.update(changes)
        return ModelConfig(**values)

    def to_dict(self):
        """Plain dictionary, as echoed in checkpoint headers."""
        return asdict(self)

    @classmethod
    def from_dict(cls, values):
        """Build from a dictionary, ignoring unknown keys."""
        known = {field.name for field in fields(cls)}
        return cls(**{key: value for key, value in values.items() if key in known})
