# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""SpanGrid training, evaluation and prediction commands."""

import json
import logging

import click

from spangrid.cli.utils import add_json_option, fail, log_command, require_option
from spangrid.config import (
    BEST_CHECKPOINT_FILE_NAME,
    DEFAULT_THRESHOLD,
    EXIT_VALIDATION_ERROR,
    GRADCHECK_TOLERANCE,
    JSON,
    SPLIT_NAMES,
    TRAIN_CONFIG_PRESETS,
)
from spangrid.metrics import FLATNESS_MODES
from spangrid.printer import (
    build_dataset,
    display_dataset,
    display_message,
    display_report,
)

DEFAULT_RUN_DIRECTORY = "run"
"""Output directory of ``train`` when ``--out`` is not given."""


def _train_config(obj, preset=None, **overrides):
    from spangrid.validation.config import load_train_config

    values = obj.overrides()
    values.update(overrides)
    return load_train_config(obj.config_path, preset=preset, overrides=values)


def _threshold(obj):
    from spangrid.decoding import check_threshold

    if obj.threshold is not None:
        threshold = obj.threshold
    elif obj.config_path:
        threshold = _train_config(obj).threshold
    else:
        threshold = DEFAULT_THRESHOLD
    check_threshold(threshold)
    return threshold


def _flatness_mode_option(func):
    return click.option(
        "--flatness",
        "mode",
        type=click.Choice(FLATNESS_MODES),
        default=FLATNESS_MODES[0],
        show_default=True,
        help="Judge predictions flat or nested by their own overlaps "
        "or by the gold entities.",
    )(func)


@click.group(help="Model commands")
@click.pass_context
def model_group(ctx):
    """Top level wrapper for model related commands."""
    logging.debug(ctx.info_name)


@model_group.command("train")
@click.option(
    "--preset",
    type=click.Choice(sorted(TRAIN_CONFIG_PRESETS)),
    help="Start from a published hyper-parameter setting.",
)
@click.option("--epochs", type=int, help="Override the number of epochs.")
@click.option(
    "--no-cnn",
    is_flag=True,
    default=False,
    help="Train without the CNN refiner (ablation).",
)
@click.option(
    "--resume",
    type=click.Path(exists=True, dir_okay=False),
    help="Continue from a checkpoint holding optimizer state.",
)
@click.option(
    "--zero-head",
    is_flag=True,
    default=False,
    help="Initialise the output layer at zero.",
)
@click.pass_obj
@click.pass_context
def train(ctx, obj, preset, epochs, no_cnn, resume, zero_head):  # noqa: D301
    """Train a span scorer.

    The `train` command trains on the `train.jsonl` split of the `--data`
    directory, selects the epoch with the best dev F1 and writes
    `best.ckpt`, `last.ckpt` and `train_log.jsonl` to `--out`.

    Examples: \n
    \t $ spangrid --data synth --out run train \n
    \t $ spangrid --data synth --out run --config small.yaml --seed 2 train \n
    \t $ spangrid --data synth --out run train --resume run/last.ckpt --epochs 40
    """  # noqa: W605
    log_command(ctx)
    path = require_option(ctx, obj.data, "--data")
    out_dir = obj.out or DEFAULT_RUN_DIRECTORY
    try:
        from spangrid.corpus.io import load_corpus
        from spangrid.training.trainer import Trainer

        overrides = {"epochs": epochs}
        if no_cnn:
            overrides["cnn_blocks"] = 0
        if resume:
            from spangrid.validation.config import config_layers

            values = obj.overrides()
            values.update(overrides)
            changes = config_layers(obj.config_path, preset=preset, overrides=values)
            corpus = load_corpus(path)
            trainer = Trainer.resume(resume, corpus, overrides=changes, out_dir=out_dir)
        else:
            config = _train_config(obj, preset=preset, **overrides)
            corpus = load_corpus(path, max_length=config.max_sentence_length)
            trainer = Trainer(config, corpus, out_dir=out_dir, zero_head=zero_head)
        result = trainer.train()
        best = "-" if result.best_dev_f1 is None else round(result.best_dev_f1, 4)
        display_message(
            "Trained {0} epochs, best dev F1 {1}. Checkpoints in {2}".format(
                len(result.history), best, out_dir
            ),
            msg_type="success",
        )
    except Exception as e:
        fail(ctx, e, "Training failed")


@model_group.command("eval")
@click.argument("checkpoint", type=click.Path(), default=None, required=False)
@click.option(
    "--split",
    type=click.Choice(SPLIT_NAMES),
    default="test",
    show_default=True,
    help="Split of the --data directory to evaluate on.",
)
@_flatness_mode_option
@add_json_option
@click.pass_obj
@click.pass_context
def evaluate(ctx, obj, checkpoint, split, mode, output_format):  # noqa: D301
    """Evaluate a checkpoint.

    The `eval` command decodes a split of `--data` and reports micro
    precision, recall and F1, the flat and nested precision and recall
    (FEP, FER, NEP, NER) and per-type scores. With `--config` the
    checkpoint must match the configured model.

    Examples: \n
    \t $ spangrid --data synth eval run/best.ckpt \n
    \t $ spangrid --data synth --threshold 0.6 eval run/best.ckpt --json
    """  # noqa: W605
    log_command(ctx)
    path = require_option(ctx, obj.data, "--data")
    checkpoint = checkpoint or "{0}/{1}".format(
        obj.out or DEFAULT_RUN_DIRECTORY, BEST_CHECKPOINT_FILE_NAME
    )
    try:
        from spangrid.corpus.io import load_corpus
        from spangrid.training.trainer import evaluate_checkpoint

        train_config = _train_config(obj) if obj.config_path else None
        sentences = load_corpus(path, split=split).splits[split]
        report = evaluate_checkpoint(
            checkpoint, sentences, _threshold(obj), train_config=train_config, mode=mode
        ).to_dict()
        if output_format == JSON:
            display_report(report, output_format)
            return
        per_type = report.pop("per_type")
        display_report(report)
        display_dataset(
            build_dataset(
                ["type", "precision", "recall", "f1", "support"],
                [
                    (name, v["precision"], v["recall"], v["f1"], v["support"])
                    for name, v in per_type.items()
                ],
            )
        )
    except Exception as e:
        fail(ctx, e, "Could not evaluate {}".format(checkpoint))


@model_group.command("predict")
@click.argument("checkpoint", type=click.Path())
@click.option(
    "--argmax-only",
    is_flag=True,
    default=False,
    help="Report only the best type of every selected span.",
)
@click.pass_obj
@click.pass_context
def predict(ctx, obj, checkpoint, argmax_only):  # noqa: D301
    """Tag sentences with a checkpoint.

    The `predict` command reads tokenized sentences from the `--data` file
    (entities are ignored) and writes one record per sentence, with scored
    entities, to the `--out` file or to the standard output.

    Examples: \n
    \t $ spangrid --data raw.jsonl --out tagged.jsonl predict run/best.ckpt \n
    \t $ spangrid --data raw.jsonl predict run/best.ckpt --argmax-only
    """  # noqa: W605
    log_command(ctx)
    path = require_option(ctx, obj.data, "--data")
    try:
        from spangrid.corpus.io import load_unlabelled, write_jsonl
        from spangrid.training.trainer import load_model, predict as tag

        model = load_model(checkpoint)
        records = tag(
            model, load_unlabelled(path), _threshold(obj), argmax_only=argmax_only
        )
        if obj.out:
            count = write_jsonl(obj.out, records)
            display_message(
                "{0} predictions written to {1}".format(count, obj.out),
                msg_type="success",
            )
        else:
            for record in records:
                click.echo(json.dumps(record, ensure_ascii=False))
    except Exception as e:
        fail(ctx, e, "Could not predict with {}".format(checkpoint))


@model_group.command("gradcheck")
@click.option(
    "--length", default=6, show_default=True, help="Tokens of the checked sentence."
)
@add_json_option
@click.pass_obj
@click.pass_context
def gradcheck(ctx, obj, length, output_format):  # noqa: D301
    """Check model gradients against finite differences.

    The `gradcheck` command builds a small random 64-bit model and compares
    the analytic gradient of every parameter with central differences.
    It fails when any relative error reaches the tolerance.

    Examples: \n
    \t $ spangrid gradcheck \n
    \t $ spangrid --seed 4 gradcheck --length 8
    """  # noqa: W605
    log_command(ctx)
    try:
        from spangrid.model.gradcheck import gradcheck as check_gradients

        errors = check_gradients(seed=obj.seed or 0, length=length)
        dataset = build_dataset(
            ["parameter", "relative_error", "status"],
            [
                (name, error, "ok" if error < GRADCHECK_TOLERANCE else "FAILED")
                for name, error in errors.items()
            ],
        )
        display_dataset(dataset, output_format)
    except Exception as e:
        fail(ctx, e, "Gradient check could not run")
    worst = max(errors.values())
    if worst >= GRADCHECK_TOLERANCE:
        display_message(
            "Largest relative error {0:.2e} exceeds {1:.0e}".format(
                worst, GRADCHECK_TOLERANCE
            ),
            msg_type="error",
        )
        ctx.exit(EXIT_VALIDATION_ERROR)
    if output_format != JSON:
        display_message(
            "All gradients within {:.0e}".format(GRADCHECK_TOLERANCE),
            msg_type="success",
        )


@model_group.command("ablation")
@click.option(
    "--seeds", default=3, show_default=True, help="Number of seeds per variant."
)
@click.option(
    "--split",
    type=click.Choice(SPLIT_NAMES),
    default="test",
    show_default=True,
    help="Split scored after training.",
)
@_flatness_mode_option
@add_json_option
@click.pass_obj
@click.pass_context
def ablation(ctx, obj, seeds, split, mode, output_format):  # noqa: D301
    """Compare training with and without the CNN refiner.

    The `ablation` command trains both variants with the same budget for
    `--seeds` consecutive seeds starting at `--seed` and reports mean F1,
    FEP, FER, NEP and NER per variant.

    Examples: \n
    \t $ spangrid --data synth ablation \n
    \t $ spangrid --data synth --config small.yaml ablation --seeds 5 --json
    """  # noqa: W605
    log_command(ctx)
    path = require_option(ctx, obj.data, "--data")
    try:
        from spangrid.corpus.io import load_corpus
        from spangrid.training.trainer import ABLATION_METRICS, run_ablation

        config = _train_config(obj)
        corpus = load_corpus(path, max_length=config.max_sentence_length)
        start = config.seed
        summary = run_ablation(
            config, corpus, list(range(start, start + seeds)), split=split, mode=mode
        )
        dataset = build_dataset(
            ("variant",) + ABLATION_METRICS,
            [
                (name,) + tuple(values[m] for m in ABLATION_METRICS)
                for name, values in summary.items()
            ],
        )
        display_dataset(dataset, output_format)
    except Exception as e:
        fail(ctx, e, "Ablation failed")
