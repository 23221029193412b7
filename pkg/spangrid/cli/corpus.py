# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""SpanGrid corpus commands."""

import logging

import click

from spangrid.cli.utils import (
    add_json_option,
    fail,
    log_command,
    parse_length_range,
    require_option,
)
from spangrid.config import DEFAULT_SPLIT_RATIOS, JSON
from spangrid.corpus.stats import STATS_FIELDS, corpus_stats
from spangrid.printer import (
    build_dataset,
    display_dataset,
    display_message,
    display_report,
)

DEFAULT_OUT_DIRECTORY = "corpus"
"""Output directory of corpus commands when ``--out`` is not given."""


@click.group(help="Corpus commands")
@click.pass_context
def corpus_group(ctx):
    """Top level wrapper for corpus related commands."""
    logging.debug(ctx.info_name)


@corpus_group.command("preprocess")
@click.option(
    "--ratios",
    default=":".join(str(r) for r in DEFAULT_SPLIT_RATIOS),
    show_default=True,
    help="Train:dev:test document ratio.",
)
@click.option(
    "--no-fix", is_flag=True, default=False, help="Report conflicts without fixing."
)
@click.option(
    "--drop-multi-type",
    is_flag=True,
    default=False,
    help="Keep only the first type of spans annotated with several types.",
)
@click.pass_obj
@click.pass_context
def preprocess(ctx, obj, ratios, no_fix, drop_multi_type):  # noqa: D301
    """Split documents into sentences and into train/dev/test.

    The `preprocess` command reads one document per line from `--data`,
    splits documents into sentences without cutting any entity, audits the
    annotations and splits the documents by `--ratios`, shuffled with
    `--seed`. It writes `train.jsonl`, `dev.jsonl` and `test.jsonl` to
    `--out`.

    Examples: \n
    \t $ spangrid --data docs.jsonl --out data preprocess \n
    \t $ spangrid --data docs.jsonl --out data --seed 3 preprocess --ratios 8:1:1
    """  # noqa: W605
    log_command(ctx)
    path = require_option(ctx, obj.data, "--data")
    try:
        from spangrid.corpus.io import load_documents, write_corpus
        from spangrid.corpus.preprocessing import parse_ratios, preprocess_documents

        corpus, report = preprocess_documents(
            load_documents(path),
            ratios=parse_ratios(ratios),
            seed=obj.seed or 0,
            fix=not no_fix,
            drop_multi=drop_multi_type,
        )
        counts = write_corpus(obj.out or DEFAULT_OUT_DIRECTORY, corpus)
        if not report.is_clean:
            display_message(
                "{0} conflict groups and {1} duplicated entities {2}.".format(
                    len(report.conflicts),
                    len(report.duplicates),
                    "reported" if no_fix else "fixed",
                ),
                msg_type="warning",
            )
        display_message(
            "Wrote {train} train, {dev} dev and {test} test sentences to {0}".format(
                obj.out or DEFAULT_OUT_DIRECTORY, **counts
            ),
            msg_type="success",
        )
    except Exception as e:
        fail(ctx, e, "Could not preprocess {}".format(path))


@corpus_group.command("audit")
@click.option(
    "--fix",
    is_flag=True,
    default=False,
    help="Write a fixed corpus to --out (duplicates removed, conflicts resolved).",
)
@add_json_option
@click.pass_obj
@click.pass_context
def audit(ctx, obj, fix, output_format):  # noqa: D301
    """Find annotation conflicts and duplicated entities.

    The `audit` command lists sentences whose token sequence occurs with
    different entity sets, entities listed twice in one sentence and spans
    carrying several types. With `--fix` the first annotation of every
    conflicting sentence is kept and duplicates are removed.

    Examples: \n
    \t $ spangrid --data data audit \n
    \t $ spangrid --data data --out fixed audit --fix
    """  # noqa: W605
    log_command(ctx)
    path = require_option(ctx, obj.data, "--data")
    directory = require_option(ctx, obj.out, "--out") if fix else None
    try:
        from spangrid.corpus.io import load_corpus, write_corpus
        from spangrid.corpus.preprocessing import audit as audit_corpus

        report, fixed = audit_corpus(load_corpus(path, allow_duplicates=True), fix=fix)
        dataset = build_dataset(
            ["kind", "split", "index", "doc_id", "detail"], report.rows()
        )
        if output_format == JSON:
            display_dataset(dataset, output_format)
        elif report.rows():
            display_dataset(dataset)
        else:
            display_message("No conflicts or duplicates found.", msg_type="success")
        if fixed is not None:
            write_corpus(directory, fixed)
            display_message(
                "Fixed corpus written to {}".format(directory), msg_type="success"
            )
    except Exception as e:
        fail(ctx, e, "Could not audit {}".format(path))


@corpus_group.command("stats")
@add_json_option
@click.pass_obj
@click.pass_context
def stats(ctx, obj, output_format):  # noqa: D301
    """Show corpus statistics per split.

    The `stats` command counts sentences, mentions and overlapping mentions
    and averages sentence and mention lengths for every split of `--data`.

    Examples: \n
    \t $ spangrid --data data stats \n
    \t $ spangrid --data data stats --json
    """  # noqa: W605
    log_command(ctx)
    path = require_option(ctx, obj.data, "--data")
    try:
        from spangrid.corpus.io import load_corpus

        report = corpus_stats(load_corpus(path))
        if output_format == JSON:
            display_report(report.to_dict(), output_format)
        else:
            display_dataset(build_dataset(("split",) + STATS_FIELDS, report.rows()))
    except Exception as e:
        fail(ctx, e, "Could not compute statistics of {}".format(path))


@corpus_group.command("gen")
@click.option("--vocab-size", default=50, show_default=True, help="Vocabulary size.")
@click.option(
    "--sentences", default=2000, show_default=True, help="Training sentences."
)
@click.option("--dev-sentences", default=200, show_default=True)
@click.option("--test-sentences", default=200, show_default=True)
@click.option(
    "--lengths",
    default="5-15",
    show_default=True,
    callback=parse_length_range,
    help="Sentence length range MIN-MAX.",
)
@click.option(
    "--nesting-rate",
    default=0.3,
    show_default=True,
    help="Target fraction of overlapping mentions.",
)
@click.option("--types", "num_types", default=3, show_default=True)
@click.pass_obj
@click.pass_context
def gen(
    ctx,
    obj,
    vocab_size,
    sentences,
    dev_sentences,
    test_sentences,
    lengths,
    nesting_rate,
    num_types,
):  # noqa: D301
    """Generate a synthetic nested-NER corpus.

    The `gen` command writes a seeded synthetic corpus with type-specific
    token patterns and nested entities to `--out`.

    Examples: \n
    \t $ spangrid --seed 0 --out synth gen \n
    \t $ spangrid --out synth gen --sentences 10 --nesting-rate 0.5
    """  # noqa: W605
    log_command(ctx)
    try:
        from spangrid.corpus.io import write_corpus
        from spangrid.corpus.synth import synth_generate

        corpus = synth_generate(
            vocab_size,
            sentences,
            length_range=lengths,
            nesting_rate=nesting_rate,
            num_types=num_types,
            seed=obj.seed or 0,
            dev_sentences=dev_sentences,
            test_sentences=test_sentences,
        )
        directory = obj.out or DEFAULT_OUT_DIRECTORY
        write_corpus(directory, corpus)
        display_message(
            "Synthetic corpus written to {}".format(directory), msg_type="success"
        )
    except Exception as e:
        fail(ctx, e, "Could not generate corpus")
