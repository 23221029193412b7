# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Common click options and helpers."""

import functools
import logging
import traceback

import click

from spangrid.config import EXIT_IO_ERROR, EXIT_VALIDATION_ERROR, JSON
from spangrid.errors import CheckpointError, CheckpointVersionError
from spangrid.printer import display_message


def add_json_option(func):
    """Add JSON output option to click commands."""

    @click.option(
        "--json",
        "output_format",
        flag_value=JSON,
        default=None,
        help="Get output in JSON format.",
    )
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)

    return wrapper


def log_command(ctx):
    """Log the command path and its parameters at debug level."""
    logging.debug("command: {}".format(ctx.command_path.replace(" ", ".")))
    for p in ctx.params:
        logging.debug("{param}: {value}".format(param=p, value=ctx.params[p]))


def exit_code(error):
    """Exit code of a failed command: 2 for I/O failures, 1 otherwise."""
    if isinstance(error, CheckpointVersionError):
        return EXIT_VALIDATION_ERROR
    if isinstance(error, (OSError, CheckpointError)):
        return EXIT_IO_ERROR
    return EXIT_VALIDATION_ERROR


def fail(ctx, error, message=None):
    """Log the traceback, print the error and exit with its code."""
    logging.debug(traceback.format_exc())
    logging.debug(str(error))
    display_message(
        "{0}{1}".format(message + ":\n" if message else "", error), msg_type="error"
    )
    ctx.exit(exit_code(error))


def require_option(ctx, value, flag):
    """Exit with a validation error when a global flag is missing."""
    if value is None:
        display_message(
            "Missing {0}. Pass it before the command, e.g. "
            "`spangrid {0} PATH {1}`.".format(flag, ctx.info_name),
            msg_type="error",
        )
        ctx.exit(EXIT_VALIDATION_ERROR)
    return value


def parse_length_range(ctx, param, value):
    """Parse ``MIN-MAX`` into a pair of integers."""
    try:
        low, high = (int(part) for part in value.split("-"))
    except ValueError:
        raise click.BadParameter("expected MIN-MAX, e.g. 5-15")
    return low, high
