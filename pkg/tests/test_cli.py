# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""SpanGrid command line interface tests."""

import json
import os

import pytest
from click.testing import CliRunner
from mock import patch

from spangrid.cli import cli
from spangrid.config import (
    BEST_CHECKPOINT_FILE_NAME,
    EXIT_IO_ERROR,
    EXIT_VALIDATION_ERROR,
    LAST_CHECKPOINT_FILE_NAME,
    TRAIN_LOG_FILE_NAME,
)
from spangrid.model.checkpoint import load_checkpoint
from spangrid.version import __version__

SMALL_CONFIG = """\
epochs: 2
learning_rate: 1.0e-2
batch_size: 4
cnn_blocks: 1
cnn_channels: 8
heads: 2
hidden_size: 8
length_embed_dim: 4
max_offset: 4
encoder_dim: 8
mixer_layers: 1
precision: "64"
"""

GEN_ARGS = [
    "gen",
    "--vocab-size",
    "20",
    "--sentences",
    "12",
    "--dev-sentences",
    "3",
    "--test-sentences",
    "3",
    "--lengths",
    "4-8",
]


def _lines(path):
    with open(path) as f:
        return [json.loads(line) for line in f if line.strip()]


def _write_lines(path, records):
    with open(path, "w") as f:
        for record in records:
            f.write(json.dumps(record) + "\n")


@pytest.fixture()
def runner():
    """Return a click test runner."""
    return CliRunner()


def test_version(runner):
    """Test version command."""
    result = runner.invoke(cli, ["version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_help_lists_groups(runner):
    """Test the help screen groups commands."""
    result = runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    for section in ("Corpus commands", "Model commands", "Information commands"):
        assert section in result.output


def test_gen_and_stats(runner):
    """Test a generated corpus is written and counted."""
    with runner.isolated_filesystem():
        result = runner.invoke(cli, ["--seed", "3", "--out", "synth"] + GEN_ARGS)
        assert result.exit_code == 0, result.output
        assert len(_lines(os.path.join("synth", "train.jsonl"))) == 12
        assert len(_lines(os.path.join("synth", "test.jsonl"))) == 3

        result = runner.invoke(cli, ["--data", "synth", "stats", "--json"])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["train"]["sentences"] == 12
        assert report["dev"]["sentences"] == 3

        result = runner.invoke(cli, ["--data", "synth", "stats"])
        assert result.exit_code == 0
        assert "avg_mention_length" in result.output


def test_gen_is_reproducible(runner):
    """Test one seed writes identical corpora."""
    with runner.isolated_filesystem():
        runner.invoke(cli, ["--seed", "5", "--out", "a"] + GEN_ARGS)
        runner.invoke(cli, ["--seed", "5", "--out", "b"] + GEN_ARGS)
        for split in ("train", "dev", "test"):
            first = _lines(os.path.join("a", split + ".jsonl"))
            assert first == _lines(os.path.join("b", split + ".jsonl"))


def test_gen_rejects_impossible_constraints(runner):
    """Test impossible generation constraints are refused."""
    with runner.isolated_filesystem():
        result = runner.invoke(cli, ["--out", "x", "gen", "--nesting-rate", "1.5"])
        assert result.exit_code == EXIT_VALIDATION_ERROR
        result = runner.invoke(cli, ["--out", "x", "gen", "--lengths", "five"])
        assert result.exit_code != 0


def test_missing_data(runner):
    """Test commands reading a corpus require --data."""
    for command in (["stats"], ["audit"], ["train"], ["predict", "model.ckpt"]):
        result = runner.invoke(cli, command)
        assert result.exit_code == EXIT_VALIDATION_ERROR
        assert "Missing --data" in result.output


def test_invalid_corpus_names_line(runner):
    """Test a crossing pair is reported with its line number."""
    with runner.isolated_filesystem():
        _write_lines(
            "bad.jsonl",
            [
                {"tokens": ["a", "b"], "entities": []},
                {
                    "tokens": ["a", "b", "c", "d"],
                    "entities": [
                        {"start": 0, "end": 2, "type": "X"},
                        {"start": 1, "end": 3, "type": "Y"},
                    ],
                },
            ],
        )
        result = runner.invoke(cli, ["--data", "bad.jsonl", "stats"])
        assert result.exit_code == EXIT_VALIDATION_ERROR
        assert "line 2" in result.output


def test_audit(runner):
    """Test conflicts and duplicates are reported and fixed."""
    entity = {"start": 0, "end": 0, "type": "X"}
    with runner.isolated_filesystem():
        os.mkdir("data")
        _write_lines(
            os.path.join("data", "train.jsonl"),
            [
                {"tokens": ["a", "b"], "entities": [entity], "doc_id": "d0"},
                {"tokens": ["a", "b"], "entities": [], "doc_id": "d1"},
                {"tokens": ["c"], "entities": [entity, entity], "doc_id": "d2"},
            ],
        )
        result = runner.invoke(cli, ["--data", "data", "audit"])
        assert result.exit_code == 0, result.output
        assert "conflict" in result.output
        assert "duplicate" in result.output

        result = runner.invoke(cli, ["--data", "data", "audit", "--fix"])
        assert result.exit_code == EXIT_VALIDATION_ERROR
        assert "Missing --out" in result.output

        result = runner.invoke(
            cli, ["--data", "data", "--out", "fixed", "audit", "--fix"]
        )
        assert result.exit_code == 0, result.output
        fixed = _lines(os.path.join("fixed", "train.jsonl"))
        assert [record["entities"] for record in fixed] == [[entity]] * 3

        result = runner.invoke(cli, ["--data", "fixed", "audit", "--json"])
        assert json.loads(result.output) == []


def test_preprocess(runner):
    """Test documents are split into sentences and into 8:1:1 splits."""
    documents = [
        {
            "doc_id": "doc-{}".format(i),
            "tokens": ["w{}".format(i), "a", ".", "b", "c", "."],
            "entities": [{"start": 0, "end": 1, "type": "X"}],
        }
        for i in range(10)
    ]
    with runner.isolated_filesystem():
        _write_lines("docs.jsonl", documents)
        result = runner.invoke(
            cli, ["--data", "docs.jsonl", "--out", "data", "--seed", "2", "preprocess"]
        )
        assert result.exit_code == 0, result.output
        assert "Wrote 16 train, 2 dev and 2 test sentences" in result.output
        splits = {
            name: _lines(os.path.join("data", name + ".jsonl"))
            for name in ("train", "dev", "test")
        }
        doc_ids = {name: {r["doc_id"] for r in recs} for name, recs in splits.items()}
        assert len(doc_ids["train"]) == 8
        assert not doc_ids["train"] & doc_ids["dev"]
        assert not doc_ids["dev"] & doc_ids["test"]

        result = runner.invoke(
            cli, ["--data", "docs.jsonl", "--out", "x", "preprocess", "--ratios", "8:1"]
        )
        assert result.exit_code == EXIT_VALIDATION_ERROR


def test_config_command(runner):
    """Test the effective configuration merges preset, file and flags."""
    with runner.isolated_filesystem():
        with open("small.yaml", "w") as f:
            f.write("epochs: 3\n")
        result = runner.invoke(
            cli,
            ["--config", "small.yaml", "--seed", "9"]
            + ["config", "--preset", "genia", "--json"],
        )
        assert result.exit_code == 0, result.output
        config = json.loads(result.output)
        assert (config["epochs"], config["seed"], config["hidden_size"]) == (3, 9, 400)

        with open("broken.yaml", "w") as f:
            f.write("epochs: -1\n")
        result = runner.invoke(cli, ["--config", "broken.yaml", "config"])
        assert result.exit_code == EXIT_VALIDATION_ERROR


def test_gradcheck(runner):
    """Test the gradient check passes and reports every parameter."""
    result = runner.invoke(cli, ["gradcheck", "--length", "4", "--json"])
    assert result.exit_code == 0, result.output
    rows = json.loads(result.output)
    assert rows
    assert all(row["status"] == "ok" for row in rows)
    assert all(row["relative_error"] < 1e-4 for row in rows)


def test_train_eval_predict(runner):
    """Test the full command line workflow on a small synthetic corpus."""
    with runner.isolated_filesystem():
        with open("small.yaml", "w") as f:
            f.write(SMALL_CONFIG)
        runner.invoke(cli, ["--seed", "1", "--out", "synth"] + GEN_ARGS)

        result = runner.invoke(
            cli, ["--data", "synth", "--out", "run", "--config", "small.yaml", "train"]
        )
        assert result.exit_code == 0, result.output
        assert "Trained 2 epochs" in result.output
        for name in (
            BEST_CHECKPOINT_FILE_NAME,
            LAST_CHECKPOINT_FILE_NAME,
            TRAIN_LOG_FILE_NAME,
        ):
            assert os.path.exists(os.path.join("run", name))
        assert len(_lines(os.path.join("run", TRAIN_LOG_FILE_NAME))) == 2

        result = runner.invoke(
            cli,
            ["--data", "synth", "--config", "small.yaml"]
            + ["eval", "run/best.ckpt", "--json"],
        )
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        for key in ("precision", "recall", "f1", "fep", "fer", "nep", "ner"):
            assert key in report
        assert 0.0 <= report["f1"] <= 1.0

        result = runner.invoke(cli, ["--data", "synth", "--out", "run", "eval"])
        assert result.exit_code == 0, result.output
        assert "support" in result.output

        _write_lines("raw.jsonl", [{"tokens": ["t0", "t1", "t2"]}, {"tokens": []}])
        result = runner.invoke(
            cli,
            ["--data", "raw.jsonl", "--out", "tagged.jsonl"]
            + ["predict", "run/best.ckpt"],
        )
        assert result.exit_code == 0, result.output
        tagged = _lines("tagged.jsonl")
        assert [r["tokens"] for r in tagged] == [["t0", "t1", "t2"], []]
        assert tagged[1]["entities"] == []

        result = runner.invoke(cli, ["--data", "raw.jsonl", "predict", "run/best.ckpt"])
        assert result.exit_code == 0
        assert len(result.output.strip().splitlines()) == 2

        result = runner.invoke(
            cli,
            [
                "--data",
                "synth",
                "--out",
                "run",
                "--config",
                "small.yaml",
                "train",
                "--resume",
                "run/last.ckpt",
                "--epochs",
                "3",
            ],
        )
        assert result.exit_code == 0, result.output
        assert "Trained 1 epochs" in result.output
        assert len(_lines(os.path.join("run", TRAIN_LOG_FILE_NAME))) == 3


def test_eval_exit_codes(runner):
    """Test checkpoint failures map onto exit codes."""
    with runner.isolated_filesystem():
        with open("small.yaml", "w") as f:
            f.write(SMALL_CONFIG.replace("epochs: 2", "epochs: 1"))
        runner.invoke(cli, ["--seed", "1", "--out", "synth"] + GEN_ARGS)
        runner.invoke(
            cli, ["--data", "synth", "--out", "run", "--config", "small.yaml", "train"]
        )

        result = runner.invoke(cli, ["--data", "synth", "eval", "missing.ckpt"])
        assert result.exit_code == EXIT_IO_ERROR

        with open(os.path.join("run", LAST_CHECKPOINT_FILE_NAME), "rb") as f:
            data = f.read()
        with open("truncated.ckpt", "wb") as f:
            f.write(data[: len(data) // 2])
        result = runner.invoke(cli, ["--data", "synth", "eval", "truncated.ckpt"])
        assert result.exit_code == EXIT_IO_ERROR

        damaged = bytearray(data)
        damaged[data.index(b'"hidden_size"') + 2] ^= 0x01
        with open("damaged_header.ckpt", "wb") as f:
            f.write(bytes(damaged))
        result = runner.invoke(cli, ["--data", "synth", "eval", "damaged_header.ckpt"])
        assert result.exit_code == EXIT_VALIDATION_ERROR

        with open("foreign.ckpt", "wb") as f:
            f.write(b"definitely not a checkpoint")
        result = runner.invoke(cli, ["--data", "synth", "eval", "foreign.ckpt"])
        assert result.exit_code == EXIT_VALIDATION_ERROR

        with open("other.yaml", "w") as f:
            f.write(SMALL_CONFIG.replace("hidden_size: 8", "hidden_size: 16"))
        result = runner.invoke(
            cli,
            ["--data", "synth", "--config", "other.yaml", "eval", "run/best.ckpt"],
        )
        assert result.exit_code == EXIT_VALIDATION_ERROR
        assert "hidden_size" in result.output

        result = runner.invoke(
            cli, ["--data", "synth", "--threshold", "1.5", "eval", "run/best.ckpt"]
        )
        assert result.exit_code == EXIT_VALIDATION_ERROR


def test_train_io_failure(runner):
    """Test a failure to write checkpoints exits with the I/O code."""
    with runner.isolated_filesystem():
        runner.invoke(cli, ["--seed", "1", "--out", "synth"] + GEN_ARGS)
        with patch(
            "spangrid.training.trainer.Trainer.train",
            side_effect=OSError("No space left on device"),
        ):
            result = runner.invoke(cli, ["--data", "synth", "--out", "run", "train"])
        assert result.exit_code == EXIT_IO_ERROR
        assert "No space left on device" in result.output


def test_resume_keeps_stored_config(runner):
    """Test resuming without --config continues with the stored settings."""
    with runner.isolated_filesystem():
        with open("small.yaml", "w") as f:
            f.write(SMALL_CONFIG.replace("epochs: 2", "epochs: 1"))
        runner.invoke(cli, ["--seed", "1", "--out", "synth"] + GEN_ARGS)
        result = runner.invoke(
            cli, ["--data", "synth", "--out", "run", "--config", "small.yaml", "train"]
        )
        assert result.exit_code == 0, result.output
        checkpoint = os.path.join("run", LAST_CHECKPOINT_FILE_NAME)

        result = runner.invoke(
            cli,
            ["--data", "synth", "--out", "run"]
            + ["train", "--resume", checkpoint, "--epochs", "2"],
        )
        assert result.exit_code == 0, result.output
        header, _ = load_checkpoint(checkpoint)
        stored = header["train_state"]["train_config"]
        assert stored["epochs"] == 2
        assert stored["hidden_size"] == 8
        assert stored["learning_rate"] == 1e-2
        assert stored["batch_size"] == 4

        with open("wider.yaml", "w") as f:
            f.write("hidden_size: 16\n")
        result = runner.invoke(
            cli,
            ["--data", "synth", "--out", "run", "--config", "wider.yaml"]
            + ["train", "--resume", checkpoint, "--epochs", "3"],
        )
        assert result.exit_code == EXIT_VALIDATION_ERROR
        assert "hidden_size" in result.output
