# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""SpanGrid terminal output."""

import json

import click
import tablib

from spangrid.config import (
    JSON,
    PRINTER_COLOUR_ERROR,
    PRINTER_COLOUR_INFO,
    PRINTER_COLOUR_SUCCESS,
    PRINTER_COLOUR_WARNING,
)

MSG_COLOUR_MAP = {
    "success": PRINTER_COLOUR_SUCCESS,
    "warning": PRINTER_COLOUR_WARNING,
    "error": PRINTER_COLOUR_ERROR,
    "info": PRINTER_COLOUR_INFO,
}


def display_message(msg, msg_type=None, indented=False):
    """Display messages in console.

    :param msg: Message to display
    :param msg_type: Type of message (info/success/warning/error)
    :param indented: Message indented or not
    :type msg: str
    :type msg_type: str
    :type indented: bool
    """
    msg_color = MSG_COLOUR_MAP.get(msg_type, "")
    to_stderr = msg_type == "error"

    if msg_type == "info":
        if indented:
            click.secho("  -> INFO: ", bold=True, nl=False, fg=msg_color)
            click.secho(str(msg), nl=True)
        else:
            click.secho("==> ", bold=True, nl=False)
            click.secho(str(msg), bold=True, nl=True)
    elif msg_type in MSG_COLOUR_MAP:
        prefix = "  -> {}: " if indented else "==> {}: "
        click.secho(
            prefix.format(msg_type.upper()),
            bold=True,
            nl=False,
            err=to_stderr,
            fg=msg_color,
        )
        click.secho(str(msg), err=to_stderr, nl=True)
    else:
        click.secho(str(msg), nl=True)


def build_dataset(headers, rows, title=None):
    """Build a tablib dataset out of header names and row tuples."""
    dataset = tablib.Dataset(title=title)
    dataset.headers = list(headers)
    for row in rows:
        dataset.append(list(row))
    return dataset


def display_dataset(dataset, output_format=None):
    """Print a dataset as a terminal table or as JSON."""
    if output_format == JSON:
        click.echo(dataset.export("json"))
    elif dataset.height:
        table = tablib.Dataset(
            *[[_format_cell(value) for value in row] for row in dataset],
            headers=dataset.headers,
        )
        click.echo(table.export("cli", tablefmt="simple"))


def display_report(report, output_format=None):
    """Print a nested report dictionary."""
    if output_format == JSON:
        click.echo(json.dumps(report, sort_keys=True))
        return
    for key, value in report.items():
        if isinstance(value, dict):
            click.secho("{}:".format(key), bold=True)
            for inner_key, inner_value in value.items():
                click.echo("  {}: {}".format(inner_key, _format_cell(inner_value)))
        else:
            click.echo("{}: {}".format(key, _format_cell(value)))


def _format_cell(value):
    if value is None:
        return "-"
    if isinstance(value, float):
        return round(value, 4)
    return value
