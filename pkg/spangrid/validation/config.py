# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""SpanGrid training configuration loading and validation."""

import json
import logging

import yaml
from jsonschema import ValidationError, validate

from spangrid.config import (
    DEFAULT_TRAIN_CONFIG,
    TRAIN_CONFIG_PRESETS,
    train_config_schema_file_path,
)
from spangrid.errors import ConfigurationError
from spangrid.training.config import TrainConfig


def _normalise(values):
    values = dict(values)
    if "precision" in values and isinstance(values["precision"], int):
        values["precision"] = str(values["precision"])
    for key, value in values.items():
        # YAML 1.1 reads exponent floats without a dot ("2e-5") as strings.
        if isinstance(DEFAULT_TRAIN_CONFIG.get(key), float) and isinstance(value, str):
            try:
                values[key] = float(value)
            except ValueError:
                pass
    return values


def validate_train_config(values):
    """Validate a flat configuration mapping against the JSON schema.

    :raises ConfigurationError: the mapping doesn't validate.
    """
    try:
        with open(train_config_schema_file_path, "r") as f:
            schema = json.loads(f.read())
        validate(values, schema)
    except IOError as e:
        logging.info(
            "Something went wrong when reading configuration schema from "
            "{filepath}:\n{error}".format(
                filepath=train_config_schema_file_path, error=e.strerror
            )
        )
        raise e
    except ValidationError as e:
        logging.info("Invalid training configuration: {error}".format(error=e.message))
        raise ConfigurationError("Invalid training configuration: {}".format(e.message))


def read_config_file(path):
    """Read a flat YAML configuration document.

    :raises IOError: the file can't be read.
    :raises ConfigurationError: the document is not a valid flat mapping.
    """
    with open(path) as f:
        try:
            values = yaml.safe_load(f.read())
        except yaml.YAMLError as e:
            raise ConfigurationError("{0} is not valid YAML: {1}".format(path, e))
    if values is None:
        return {}
    if not isinstance(values, dict):
        raise ConfigurationError("{} must hold a key-value mapping".format(path))
    values = _normalise(values)
    validate_train_config(values)
    return values


def config_layers(path=None, preset=None, overrides=None):
    """Values set by ``preset``, the file at ``path`` and ``overrides``.

    Later sources win; ``None`` overrides are dropped. Defaults are not
    included, so the result can be laid over a stored configuration.

    :raises ConfigurationError: unknown preset or invalid file.
    """
    values = {}
    if preset:
        if preset not in TRAIN_CONFIG_PRESETS:
            raise ConfigurationError(
                "Unknown preset {0!r}, expected one of {1}".format(
                    preset, ", ".join(sorted(TRAIN_CONFIG_PRESETS))
                )
            )
        values.update(TRAIN_CONFIG_PRESETS[preset])
    if path:
        values.update(read_config_file(path))
    if overrides:
        values.update(
            _normalise({k: v for k, v in overrides.items() if v is not None})
        )
    return values


def load_train_config(path=None, preset=None, overrides=None):
    """Merge defaults, a preset, a configuration file and overrides.

    Later sources win: defaults, then ``preset``, then the file at ``path``,
    then non-``None`` ``overrides`` (command line flags).

    :raises ConfigurationError: unknown preset or invalid values.
    """
    values = dict(DEFAULT_TRAIN_CONFIG)
    values.update(config_layers(path, preset=preset, overrides=overrides))
    validate_train_config(values)
    config = TrainConfig.from_dict(values)
    logging.debug("Training configuration: {}".format(config.to_dict()))
    return config
