# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""SpanGrid training configuration tests."""

import pytest

from spangrid.config import DEFAULT_TRAIN_CONFIG
from spangrid.errors import ConfigurationError
from spangrid.training.config import TrainConfig
from spangrid.validation.config import load_train_config, validate_train_config


@pytest.fixture()
def config_file(tmp_path):
    """Return a function writing a YAML configuration file."""

    def _write(text):
        path = tmp_path / "config.yaml"
        path.write_text(text)
        return str(path)

    return _write


def test_defaults_match_dataclass():
    """Test the default mapping and the dataclass agree."""
    assert load_train_config().to_dict() == TrainConfig().to_dict()
    assert TrainConfig().to_dict() == DEFAULT_TRAIN_CONFIG


def test_preset():
    """Test a preset replaces the defaults it names."""
    config = load_train_config(preset="genia")
    assert (config.epochs, config.hidden_size, config.heads) == (5, 400, 4)
    assert config.learning_rate == 7e-6
    assert config.kernel_size == 3
    with pytest.raises(ConfigurationError):
        load_train_config(preset="conll")


def test_file_and_overrides(config_file):
    """Test the file beats the preset and flags beat the file."""
    path = config_file("epochs: 3\nlearning_rate: 2e-5\nprecision: 64\nseed: 4\n")
    config = load_train_config(
        path, preset="ace2004", overrides={"seed": 9, "threshold": None}
    )
    assert config.epochs == 3
    assert config.learning_rate == 2e-5
    assert config.precision == "64"
    assert config.seed == 9
    assert config.threshold == 0.5
    assert config.batch_size == 48


@pytest.mark.parametrize(
    "text",
    [
        "epochs: 0\n",
        "warmup_factor: 1.0\n",
        "threshold: 1.5\n",
        "precision: '16'\n",
        "unknown_key: 1\n",
        "- a list\n",
        "epochs: [1\n",
    ],
)
def test_invalid_files(config_file, text):
    """Test out-of-range values, unknown keys and malformed YAML."""
    with pytest.raises(ConfigurationError):
        load_train_config(config_file(text))


def test_empty_file(config_file):
    """Test an empty file keeps the defaults."""
    assert load_train_config(config_file("")) == TrainConfig()


def test_schema_rejects_wrong_types():
    """Test the JSON schema checks value types."""
    with pytest.raises(ConfigurationError):
        validate_train_config(dict(DEFAULT_TRAIN_CONFIG, batch_size="many"))


def test_dataclass_validation():
    """Test the dataclass enforces ranges on its own."""
    with pytest.raises(ConfigurationError):
        TrainConfig(dropout=1.0)
    with pytest.raises(ConfigurationError):
        TrainConfig.from_dict({"epochs": 2, "layers": 3})
    assert TrainConfig().replace(cnn_blocks=0).cnn_blocks == 0


def test_model_config_mapping():
    """Test hyper-parameter names map onto the scorer configuration."""
    model_config = TrainConfig(cnn_channels=16, heads=4, hidden_size=32).model_config(
        num_types=3, vocab_size=20
    )
    assert model_config.biaffine_feature_size == 16
    assert model_config.num_heads == 4
    assert model_config.num_types == 3
    assert model_config.vocab_size == 20
