# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Reading and writing line-delimited corpus files."""

import json
import logging
import os

from spangrid.config import SPLIT_NAMES
from spangrid.corpus.types import Corpus
from spangrid.errors import CorpusValidationError
from spangrid.validation.corpus import (
    validate_document_record,
    validate_sentence_record,
)


def read_records(path):
    """Yield ``(line number, record)`` of a JSONL file, skipping blank lines.

    :raises CorpusValidationError: a line is not a JSON object.
    """
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except ValueError as e:
                raise CorpusValidationError(
                    "malformed record: {}".format(e), line_number
                )
            if not isinstance(record, dict):
                raise CorpusValidationError("record is not an object", line_number)
            yield line_number, record


def load_sentences(path, allow_duplicates=False, max_length=None):
    """Load every validated sentence of one file."""
    sentences = [
        validate_sentence_record(
            record,
            line_number,
            allow_duplicates=allow_duplicates,
            max_length=max_length,
        )
        for line_number, record in read_records(path)
    ]
    logging.info("Loaded {0} sentences from {1}".format(len(sentences), path))
    return sentences


def split_file_path(directory, split):
    """Location of a split file inside a corpus directory."""
    return os.path.join(directory, "{}.jsonl".format(split))


def load_corpus(path, split="train", allow_duplicates=False, max_length=None):
    """Load a validated :class:`Corpus`.

    :param path: Either a directory holding ``train.jsonl``, ``dev.jsonl``
        and ``test.jsonl`` (missing files give empty splits), or a single
        file whose sentences all go to ``split``.
    :param allow_duplicates: Keep repeated identical entities (for auditing).
    :param max_length: Reject longer sentences (training mode).
    """
    kwargs = dict(allow_duplicates=allow_duplicates, max_length=max_length)
    if os.path.isdir(path):
        splits = {}
        for name in SPLIT_NAMES:
            split_path = split_file_path(path, name)
            splits[name] = []
            if os.path.exists(split_path):
                splits[name] = load_sentences(split_path, **kwargs)
        return Corpus(splits=splits)
    return Corpus(splits={split: load_sentences(path, **kwargs)})


def load_documents(path):
    """Load unsplit documents for preprocessing."""
    documents = [
        validate_document_record(record, line_number)
        for line_number, record in read_records(path)
    ]
    logging.info("Loaded {0} documents from {1}".format(len(documents), path))
    return documents


def write_jsonl(path, records):
    """Write one JSON object per line."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False))
            f.write("\n")
            count += 1
    logging.info("Wrote {0} records to {1}".format(count, path))
    return count


def write_corpus(directory, corpus):
    """Write every split to ``<directory>/<split>.jsonl``."""
    return {
        name: write_jsonl(
            split_file_path(directory, name), (s.to_dict() for s in corpus.splits[name])
        )
        for name in SPLIT_NAMES
    }


def load_unlabelled(path):
    """Load sentences for prediction; any entities in the file are ignored."""
    sentences = [
        validate_sentence_record(
            {key: record[key] for key in ("tokens", "doc_id") if key in record},
            line_number,
        )
        for line_number, record in read_records(path)
    ]
    logging.info("Loaded {0} sentences to tag from {1}".format(len(sentences), path))
    return sentences
