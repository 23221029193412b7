# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Training loop, evaluation and prediction drivers."""

import json
import logging
import math
import os
import time
from collections import OrderedDict
from typing import List, NamedTuple, Optional

import numpy as np

from spangrid.config import (
    BEST_CHECKPOINT_FILE_NAME,
    LAST_CHECKPOINT_FILE_NAME,
    TRAIN_LOG_FILE_NAME,
)
from spangrid.decoding import decode, prediction_record
from spangrid.errors import CheckpointError, CorpusValidationError, TrainingError
from spangrid.metrics import EvaluationAccumulator
from spangrid.model.checkpoint import load_checkpoint
from spangrid.model.network import SpanScorer
from spangrid.model.vocab import Vocabulary
from spangrid.tensor import Graph, backward
from spangrid.training.batching import BatchPrefetcher, batch_slices, epoch_order
from spangrid.training.config import TrainConfig
from spangrid.training.optim import (
    OptimizerState,
    adamw_step,
    clip_grad_norm,
    update_learning_rate,
)

EVAL_BATCH_SIZE = 32
"""Sentences per forward pass during evaluation and prediction."""

ABLATION_METRICS = ("f1", "fep", "fer", "nep", "ner")
"""Metrics averaged over seeds by :func:`run_ablation`."""


class EpochLog(NamedTuple):
    """One line of the training log."""

    epoch: int
    step: int
    lr: float
    train_loss: float
    dev_f1: Optional[float]
    seconds: float


class TrainResult(NamedTuple):
    """Trained model, per-epoch log and best dev F1."""

    model: SpanScorer
    history: List[EpochLog]
    best_dev_f1: Optional[float]


def dropout_rng(seed, step):
    """Dropout generator of one optimizer step."""
    return np.random.default_rng([seed, step, 1])


def _batches(sentences, size):
    return [sentences[i : i + size] for i in range(0, len(sentences), size)]


def evaluate(model, sentences, threshold, mode="own", batch_size=EVAL_BATCH_SIZE):
    """Decode ``sentences`` and score them against their gold entities.

    :return: :class:`~spangrid.metrics.MetricsReport`.
    """
    accumulator = EvaluationAccumulator(mode)
    for sentence, decoded in _decode_all(model, sentences, threshold, batch_size):
        predicted = {
            triple for entity in decoded for triple in entity.triples(model.types)
        }
        accumulator.add(predicted, sentence.triples())
    return accumulator.report()


def _decode_all(model, sentences, threshold, batch_size, argmax_only=False):
    sentences = list(sentences)
    non_empty = [s for s in sentences if len(s)]
    decoded = {}
    for chunk in _batches(non_empty, batch_size):
        for sentence, probs in zip(chunk, model.probabilities(chunk)):
            decoded[id(sentence)] = decode(probs, threshold, argmax_only=argmax_only)
    for sentence in sentences:
        yield sentence, decoded.get(id(sentence), [])


def predict(model, sentences, threshold, argmax_only=False, batch_size=EVAL_BATCH_SIZE):
    """Prediction records (tokens plus scored entities), one per sentence.

    Empty sentences come back with an empty entity list.
    """
    return [
        prediction_record(sentence, decoded, model.types)
        for sentence, decoded in _decode_all(
            model, sentences, threshold, batch_size, argmax_only=argmax_only
        )
    ]


def evaluate_checkpoint(path, sentences, threshold, train_config=None, mode="own"):
    """Load a checkpoint and evaluate it.

    :raises CheckpointVersionError: the checkpoint doesn't match
        ``train_config``.
    """
    model = load_model(path, train_config)
    return evaluate(model, sentences, threshold, mode=mode)


class Trainer(object):
    """Mini-batch AdamW training of a :class:`SpanScorer`."""

    def __init__(self, config, corpus, out_dir=None, zero_head=False, model=None):
        """Set up model and optimizer for ``corpus``.

        :param config: :class:`~spangrid.training.config.TrainConfig`.
        :param corpus: Validated :class:`~spangrid.corpus.types.Corpus`.
        :param out_dir: Where logs and checkpoints go; nothing is written
            when ``None``.
        :param zero_head: Start the output head at zero.
        :param model: Existing model to continue training.
        :raises TrainingError: the train split is empty.
        :raises CorpusValidationError: a sentence exceeds the length limit.
        """
        if not corpus.train:
            raise TrainingError("The train split is empty.")
        for index, sentence in enumerate(corpus.train):
            if len(sentence) > config.max_sentence_length:
                raise CorpusValidationError(
                    "train sentence {0} has {1} tokens, more than {2}".format(
                        index, len(sentence), config.max_sentence_length
                    )
                )
        self.config = config
        self.corpus = corpus
        self.out_dir = out_dir
        if model is None:
            vocab = Vocabulary.from_sentences(corpus.train)
            model_config = config.model_config(len(corpus.types), len(vocab))
            rng = np.random.default_rng(config.seed)
            model = SpanScorer.create(
                model_config, vocab, corpus.types, rng, zero_head=zero_head
            )
        self.model = model
        self.state = OptimizerState(
            weight_decay=config.weight_decay,
            beta1=config.beta1,
            beta2=config.beta2,
            eps=config.adam_eps,
        )
        self.batches_per_epoch = math.ceil(len(corpus.train) / config.batch_size)
        self.total_updates = config.epochs * self.batches_per_epoch
        self.epoch = 0
        self.best_dev_f1 = None
        self.history = []
        logging.info(
            "Model with {0} parameters, {1} types, {2} updates".format(
                model.parameter_count(), len(model.types), self.total_updates
            )
        )

    def build_batch(self, indices):
        """Padded training batch of the given train sentences."""
        sentences = [self.corpus.train[i] for i in indices]
        return self.model.batch(sentences, with_targets=True)

    def train_step(self, batch):
        """One forward, backward and AdamW update.

        :return: ``(loss, learning rate)``.
        """
        update = self.state.step + 1
        with Graph():
            loss, _ = self.model.loss(
                batch,
                rng=dropout_rng(self.config.seed, update),
                dropout=self.config.dropout,
            )
            backward(loss)
        if self.config.grad_clip:
            clip_grad_norm(self.model.params, self.config.grad_clip)
        lr = update_learning_rate(
            update,
            self.total_updates,
            self.config.learning_rate,
            self.config.warmup_factor,
        )
        adamw_step(self.model.params, self.state, lr)
        self.model.params.zero_grad()
        return loss.item(), lr

    def run_epoch(self):
        """Train over one shuffled pass of the train split.

        :return: Sentence-weighted mean training loss and the last rate.
        """
        order = epoch_order(len(self.corpus.train), self.config.seed, self.epoch)
        total = 0.0
        lr = 0.0
        with BatchPrefetcher(
            batch_slices(order, self.config.batch_size), self.build_batch
        ) as batches:
            for batch in batches:
                loss, lr = self.train_step(batch)
                total += loss * len(batch)
        self.epoch += 1
        return total / len(self.corpus.train), lr

    def train(self):
        """Run the remaining epochs, logging and checkpointing each one.

        :return: :class:`TrainResult`.
        """
        while self.epoch < self.config.epochs:
            started = time.time()
            train_loss, lr = self.run_epoch()
            dev_f1 = None
            if self.corpus.dev:
                dev_f1 = evaluate(
                    self.model, self.corpus.dev, self.config.threshold
                ).f1
            entry = EpochLog(
                epoch=self.epoch,
                step=self.state.step,
                lr=lr,
                train_loss=train_loss,
                dev_f1=dev_f1,
                seconds=time.time() - started,
            )
            self.history.append(entry)
            logging.info(json.dumps(entry._asdict()))
            improved = dev_f1 is not None and (
                self.best_dev_f1 is None or dev_f1 > self.best_dev_f1
            )
            if improved:
                self.best_dev_f1 = dev_f1
            self._write_epoch(entry, best=improved or not self.corpus.dev)
        return TrainResult(self.model, list(self.history), self.best_dev_f1)

    def _write_epoch(self, entry, best):
        if self.out_dir is None:
            return
        os.makedirs(self.out_dir, exist_ok=True)
        with open(os.path.join(self.out_dir, TRAIN_LOG_FILE_NAME), "a") as f:
            f.write(json.dumps(entry._asdict()) + "\n")
        self.save(os.path.join(self.out_dir, LAST_CHECKPOINT_FILE_NAME))
        if best:
            self.save(os.path.join(self.out_dir, BEST_CHECKPOINT_FILE_NAME))

    def train_state(self):
        """Header entry needed to resume training."""
        return {
            "epoch": self.epoch,
            "best_dev_f1": self.best_dev_f1,
            "train_config": self.config.to_dict(),
            "optimizer": self.state.header(),
        }

    def save(self, path):
        """Checkpoint the model together with the optimizer state."""
        self.model.save(
            path,
            extra_header={"train_state": self.train_state()},
            extra_arrays=self.state.arrays(),
        )

    @classmethod
    def resume(cls, path, corpus, overrides=None, out_dir=None):
        """Continue training from a checkpoint written by :meth:`save`.

        The stored training configuration is the starting point; only the
        non-``None`` entries of ``overrides`` (e.g. more epochs) replace it.

        :raises CheckpointError: the checkpoint has no training state.
        :raises CheckpointVersionError: the overrides change the model.
        """
        header, arrays = load_checkpoint(path)
        if "train_state" not in header:
            raise CheckpointError("{} carries no training state".format(path))
        train_state = header["train_state"]
        config = TrainConfig.from_dict(train_state["train_config"])
        changes = {k: v for k, v in (overrides or {}).items() if v is not None}
        if changes:
            config = config.replace(**changes)
            logging.info("Resume overrides: {}".format(sorted(changes)))
        model = SpanScorer.from_checkpoint(
            header, arrays, expected_config=_expected_model_config(header, config)
        )
        trainer = cls(config, corpus, out_dir=out_dir, model=model)
        trainer.state = OptimizerState.restore(train_state["optimizer"], arrays)
        trainer.epoch = int(train_state["epoch"])
        trainer.best_dev_f1 = train_state.get("best_dev_f1")
        logging.info("Resuming from epoch {0} of {1}".format(trainer.epoch, path))
        return trainer


def train(config, corpus, out_dir=None, zero_head=False):
    """Train a model on ``corpus``; see :class:`Trainer`."""
    return Trainer(config, corpus, out_dir=out_dir, zero_head=zero_head).train()


def run_ablation(config, corpus, seeds, split="test", mode="own"):
    """Compare the CNN refiner against the variant without it.

    Both variants train with identical budgets for every seed and are
    scored on ``split``.

    :return: ``variant -> {metric: mean over seeds}``; absent metrics are
        left out of their mean.
    """
    sentences = corpus.splits[split] or corpus.dev
    variants = OrderedDict(
        [("cnn", config), ("no_cnn", config.replace(cnn_blocks=0))]
    )
    summary = OrderedDict()
    for name, variant in variants.items():
        values = {metric: [] for metric in ABLATION_METRICS}
        for seed in seeds:
            result = train(variant.replace(seed=seed), corpus)
            report = evaluate(result.model, sentences, variant.threshold, mode=mode)
            for metric in ABLATION_METRICS:
                value = getattr(report, metric)
                if value is not None:
                    values[metric].append(value)
            logging.info("{0} seed {1}: {2}".format(name, seed, report.to_dict()))
        summary[name] = {
            metric: (float(np.mean(found)) if found else None)
            for metric, found in values.items()
        }
        summary[name]["seeds"] = len(seeds)
    return summary


def _expected_model_config(header, train_config):
    types = header.get("types", [])
    vocab_size = len(Vocabulary(header.get("vocabulary", [])))
    encoder_mode = header.get("model_config", {}).get("encoder_mode", "toy")
    return train_config.model_config(len(types), vocab_size, encoder_mode)


def load_model(path, train_config=None):
    """Load a checkpoint, checking it against ``train_config`` when given.

    :raises CheckpointVersionError: the stored configuration differs.
    """
    header, arrays = load_checkpoint(path)
    expected = None
    if train_config is not None:
        expected = _expected_model_config(header, train_config)
    return SpanScorer.from_checkpoint(header, arrays, expected_config=expected)
