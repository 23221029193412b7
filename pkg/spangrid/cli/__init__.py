# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""SpanGrid command line interface."""
import logging
import sys

import click

from spangrid.cli import corpus, info, model
from spangrid.config import PRECISIONS

DEBUG_LOG_FORMAT = (
    "[%(asctime)s] p%(process)s "
    "{%(pathname)s:%(lineno)d} "
    "%(levelname)s - %(message)s"
)

LOG_FORMAT = "[%(levelname)s] %(message)s"


class Config(object):
    """Global flags shared across commands."""

    def __init__(
        self,
        config_path=None,
        seed=None,
        data=None,
        out=None,
        threshold=None,
        precision=None,
    ):
        """Store the global flags; ``None`` means not given."""
        self.config_path = config_path
        self.seed = seed
        self.data = data
        self.out = out
        self.threshold = threshold
        self.precision = precision

    def overrides(self):
        """Training configuration values set on the command line."""
        return {
            "seed": self.seed,
            "threshold": self.threshold,
            "precision": self.precision,
        }


class SpanGridCLI(click.Group):
    """SpanGrid command line interface."""

    cmd_groups = [
        corpus.corpus_group,
        model.model_group,
        info.info_group,
    ]

    def __init__(self, name=None, commands=None, **attrs):
        """Initialize SpanGrid commands."""
        click.Group.__init__(self, name, **attrs)
        for group in SpanGridCLI.cmd_groups:
            for cmd in group.commands.items():
                self.add_command(cmd=cmd[1], name=cmd[0])

    def format_commands(self, ctx, formatter):
        """Overides default click cmd display."""
        if SpanGridCLI.cmd_groups:
            limit = formatter.width - 6 - max(len(n) for n in self.list_commands(ctx))
            for group in SpanGridCLI.cmd_groups:
                rows = [
                    (name, command.get_short_help_str(limit))
                    for name, command in sorted(group.commands.items())
                    if command is not None and not command.hidden
                ]
                with formatter.section(group.get_short_help_str(limit)):
                    formatter.write_dl(rows)


@click.command(cls=SpanGridCLI)
@click.option(
    "--loglevel",
    "-l",
    help="Sets log level",
    type=click.Choice(["DEBUG", "INFO", "WARNING"]),
    default="WARNING",
)
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    help="Training configuration file (flat YAML mapping).",
)
@click.option("--seed", type=int, help="Random seed.")
@click.option("--data", type=click.Path(), help="Corpus file or directory.")
@click.option("--out", type=click.Path(), help="Output file or directory.")
@click.option(
    "--threshold", type=float, help="Decoding threshold, strictly between 0 and 1."
)
@click.option(
    "--precision",
    type=click.Choice(sorted(PRECISIONS)),
    help="Floating point precision in bits.",
)
@click.pass_context
@click.pass_obj
def cli(obj, ctx, loglevel, config_path, seed, data, out, threshold, precision):
    """SpanGrid: nested named entity recognition on span score grids."""
    logging.basicConfig(
        format=DEBUG_LOG_FORMAT if loglevel == "DEBUG" else LOG_FORMAT,
        stream=sys.stderr,
        level=loglevel,
    )
    ctx.obj = obj or Config(
        config_path=config_path,
        seed=seed,
        data=data,
        out=out,
        threshold=threshold,
        precision=precision,
    )
