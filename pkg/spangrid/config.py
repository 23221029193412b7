# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""SpanGrid configuration."""


import pkg_resources

train_config_schema_file_path = pkg_resources.resource_filename(
    __name__, "schemas/train_config_schema.json"
)
"""Training configuration schema location."""

corpus_record_schema_file_path = pkg_resources.resource_filename(
    __name__, "schemas/corpus_record_schema.json"
)
"""Corpus record schema location."""

JSON = "json"
"""Json output format."""

DEFAULT_THRESHOLD = 0.5
"""Probability a span type has to exceed to be decoded as an entity."""

DEFAULT_MAX_SENTENCE_LENGTH = 128
"""Longest sentence accepted in training mode."""

DEFAULT_SPLIT_RATIOS = (8, 1, 1)
"""Train/dev/test document ratio."""

SENTENCE_FINAL_TOKENS = (".", "!", "?")
"""Tokens after which a new sentence may start."""

PAD_TOKEN = "<pad>"
"""Vocabulary entry of padding positions."""

UNK_TOKEN = "<unk>"
"""Vocabulary entry of unknown tokens."""

PRECISIONS = {"32": "float32", "64": "float64"}
"""Available precision modes and their numpy dtypes."""

BCE_CLIP = 1e-7
"""Probabilities are clipped to [BCE_CLIP, 1 - BCE_CLIP] inside the loss."""

GRADCHECK_STEP = 1e-3
"""Central finite difference step."""

GRADCHECK_TOLERANCE = 1e-4
"""Largest accepted relative gradient error."""

CHECKPOINT_MAGIC = b"SPANGRID"
"""First bytes of every checkpoint file."""

CHECKPOINT_FORMAT_VERSION = 2
"""Checkpoint format version written by this release."""

TRAIN_LOG_FILE_NAME = "train_log.jsonl"
"""Per-epoch training log written to the output directory."""

BEST_CHECKPOINT_FILE_NAME = "best.ckpt"
"""Checkpoint of the epoch with the best dev F1."""

LAST_CHECKPOINT_FILE_NAME = "last.ckpt"
"""Checkpoint of the last epoch, with optimizer state."""

SPLIT_NAMES = ("train", "dev", "test")
"""Corpus split names."""

DEFAULT_TRAIN_CONFIG = {
    "epochs": 30,
    "learning_rate": 2e-3,
    "batch_size": 32,
    "cnn_blocks": 2,
    "kernel_size": 3,
    "cnn_channels": 32,
    "heads": 2,
    "hidden_size": 64,
    "warmup_factor": 0.1,
    "length_embed_dim": 16,
    "max_offset": 64,
    "seed": 0,
    "precision": "32",
    "threshold": DEFAULT_THRESHOLD,
    "encoder_dim": 64,
    "mixer_layers": 2,
    "leaky_slope": 0.01,
    "ln_eps": 1e-5,
    "weight_decay": 0.01,
    "beta1": 0.9,
    "beta2": 0.999,
    "adam_eps": 1e-8,
    "dropout": 0.0,
    "grad_clip": 0.0,
    "max_sentence_length": DEFAULT_MAX_SENTENCE_LENGTH,
}
"""Training configuration used when no preset or file is given."""

TRAIN_CONFIG_PRESETS = {
    "ace2004": {
        "epochs": 50,
        "learning_rate": 2e-5,
        "batch_size": 48,
        "cnn_blocks": 3,
        "kernel_size": 3,
        "cnn_channels": 200,
        "heads": 5,
        "hidden_size": 200,
        "warmup_factor": 0.1,
    },
    "ace2005": {
        "epochs": 50,
        "learning_rate": 2e-5,
        "batch_size": 48,
        "cnn_blocks": 3,
        "kernel_size": 3,
        "cnn_channels": 200,
        "heads": 5,
        "hidden_size": 200,
        "warmup_factor": 0.1,
    },
    "genia": {
        "epochs": 5,
        "learning_rate": 7e-6,
        "batch_size": 8,
        "cnn_blocks": 3,
        "kernel_size": 3,
        "cnn_channels": 200,
        "heads": 4,
        "hidden_size": 400,
        "warmup_factor": 0.1,
    },
}
"""Published hyper-parameter settings, selectable with ``--preset``."""

PRINTER_COLOUR_SUCCESS = "green"
"""Default colour for success messages on terminal."""

PRINTER_COLOUR_WARNING = "yellow"
"""Default colour for warning messages on terminal."""

PRINTER_COLOUR_ERROR = "red"
"""Default colour for error messages on terminal."""

PRINTER_COLOUR_INFO = "cyan"
"""Default colour for info messages on terminal."""

EXIT_VALIDATION_ERROR = 1
"""Exit code of commands failing on invalid input."""

EXIT_IO_ERROR = 2
"""Exit code of commands failing to read or write files."""
