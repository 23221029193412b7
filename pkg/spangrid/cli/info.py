# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""SpanGrid information commands."""

import click

from spangrid.cli.utils import add_json_option, fail, log_command
from spangrid.printer import display_message, display_report
from spangrid.version import __version__


@click.group(help="Information commands")
def info_group():
    """Information commands."""
    pass


@info_group.command("version")
@click.pass_context
def version(ctx):  # noqa: D301
    """Show version.

    The `version` command shows the SpanGrid version.

    Examples: \n
    \t $ spangrid version
    """
    display_message(__version__)


@info_group.command("config")
@click.option("--preset", help="Start from a published hyper-parameter setting.")
@add_json_option
@click.pass_obj
@click.pass_context
def show_config(ctx, obj, preset, output_format):  # noqa: D301
    """Show the effective training configuration.

    The `config` command merges the defaults, `--preset`, the `--config`
    file and the global flags and prints the result.

    Examples: \n
    \t $ spangrid --config small.yaml --seed 3 config \n
    \t $ spangrid config --preset genia --json
    """
    log_command(ctx)
    try:
        from spangrid.validation.config import load_train_config

        config = load_train_config(
            obj.config_path, preset=preset, overrides=obj.overrides()
        )
        display_report(config.to_dict(), output_format)
    except Exception as e:
        fail(ctx, e, "Invalid configuration")
