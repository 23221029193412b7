# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Pytest configuration for SpanGrid."""

from __future__ import absolute_import, print_function

import json
import os

import numpy as np
import pytest

from spangrid.corpus.types import Corpus, Entity, Sentence
from spangrid.training.config import TrainConfig

DATA_DIRECTORY = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture()
def data_path():
    """Return a function locating a bundled test data file."""

    def _path(name):
        return os.path.join(DATA_DIRECTORY, name)

    return _path


@pytest.fixture()
def rng():
    """Return a seeded random generator."""
    return np.random.default_rng(1234)


@pytest.fixture()
def nested_sentence():
    """Return the "New York University" sentence with a nested pair."""
    return Sentence(
        tokens=("He", "studied", "at", "New", "York", "University", "."),
        entities=(Entity(3, 5, "ORG"), Entity(3, 4, "LOC")),
        doc_id="doc-1",
    )


@pytest.fixture()
def tiny_corpus():
    """Return a small corpus with repeated patterns, nesting and a dev split."""
    train = [
        Sentence(("a", "b", "c", "d"), (Entity(0, 1, "X"),), "d0"),
        Sentence(("e", "a", "b", "f"), (Entity(1, 2, "X"),), "d0"),
        Sentence(("g", "h", "i"), (Entity(0, 2, "Y"), Entity(1, 1, "X")), "d1"),
        Sentence(
            ("c", "g", "h", "i", "d"), (Entity(1, 3, "Y"), Entity(2, 2, "X")), "d1"
        ),
        Sentence(("d", "d", "e"), (), "d2"),
        Sentence(("a", "b"), (Entity(0, 1, "X"),), "d2"),
    ]
    dev = [
        Sentence(("a", "b", "e"), (Entity(0, 1, "X"),), "d3"),
        Sentence(("g", "h", "i", "c"), (Entity(0, 2, "Y"), Entity(1, 1, "X")), "d3"),
    ]
    return Corpus(splits={"train": train, "dev": dev, "test": list(dev)})


@pytest.fixture()
def small_train_config():
    """Return a fast 64-bit training configuration."""
    return TrainConfig(
        epochs=2,
        learning_rate=1e-2,
        batch_size=2,
        cnn_blocks=1,
        kernel_size=3,
        cnn_channels=8,
        heads=2,
        hidden_size=8,
        length_embed_dim=4,
        max_offset=4,
        encoder_dim=8,
        mixer_layers=1,
        precision="64",
        seed=7,
    )


@pytest.fixture()
def write_jsonl_file(tmp_path):
    """Return a function writing records (or raw lines) to a JSONL file."""

    def _write(name, records):
        path = tmp_path / name
        with open(str(path), "w") as f:
            for record in records:
                line = record if isinstance(record, str) else json.dumps(record)
                f.write(line + "\n")
        return str(path)

    return _write
