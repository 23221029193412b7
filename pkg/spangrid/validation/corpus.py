# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""SpanGrid corpus record validation."""

import json
import logging

from jsonschema import ValidationError, validate

from spangrid.config import corpus_record_schema_file_path
from spangrid.corpus.types import Document, Entity, Sentence
from spangrid.errors import CorpusValidationError

_schema = None


def _record_schema():
    global _schema
    if _schema is None:
        with open(corpus_record_schema_file_path, "r") as f:
            _schema = json.loads(f.read())
    return _schema


def validate_record_schema(record, line_number=None):
    """Validate a decoded record against the corpus record schema.

    :raises CorpusValidationError: the record doesn't match the schema.
    """
    try:
        validate(record, _record_schema())
    except ValidationError as e:
        logging.debug("Invalid corpus record: {}".format(e.message))
        raise CorpusValidationError(e.message, line_number)


def _entities(record, token_count, line_number, allow_duplicates):
    entities = [
        Entity(int(e["start"]), int(e["end"]), str(e["type"]))
        for e in record.get("entities", [])
    ]
    for entity in entities:
        if entity.start > entity.end:
            raise CorpusValidationError(
                "entity {0} starts after it ends".format(entity.as_triple()),
                line_number,
            )
        if entity.end >= token_count:
            raise CorpusValidationError(
                "entity {0} ends at or beyond token count {1}".format(
                    entity.as_triple(), token_count
                ),
                line_number,
            )
    seen = set()
    for index, entity in enumerate(entities):
        if entity in seen and not allow_duplicates:
            raise CorpusValidationError(
                "entity {} is listed twice".format(entity.as_triple()), line_number
            )
        seen.add(entity)
        for other in entities[index + 1 :]:
            if entity.crosses(other):
                raise CorpusValidationError(
                    "entities {0} and {1} cross".format(
                        entity.as_triple(), other.as_triple()
                    ),
                    line_number,
                )
    return tuple(entities)


def _doc_id(record):
    doc_id = record.get("doc_id")
    return None if doc_id is None else str(doc_id)


def validate_sentence_record(
    record, line_number=None, allow_duplicates=False, max_length=None
):
    """Turn a decoded corpus record into a validated :class:`Sentence`.

    :param allow_duplicates: Keep repeated identical entities (for auditing).
    :param max_length: Reject sentences longer than this (training mode).
    :raises CorpusValidationError: a rule is violated; the message carries
        ``line_number``.
    """
    validate_record_schema(record, line_number)
    tokens = tuple(record["tokens"])
    if max_length is not None and len(tokens) > max_length:
        raise CorpusValidationError(
            "sentence has {0} tokens, more than the limit of {1}".format(
                len(tokens), max_length
            ),
            line_number,
        )
    entities = _entities(record, len(tokens), line_number, allow_duplicates)
    return Sentence(tokens=tokens, entities=entities, doc_id=_doc_id(record))


def validate_document_record(record, line_number=None):
    """Turn a decoded record into an unsplit :class:`Document`.

    Duplicated entities are kept for the audit; boundaries must lie within
    the document.
    """
    validate_record_schema(record, line_number)
    tokens = tuple(record["tokens"])
    entities = _entities(record, len(tokens), line_number, allow_duplicates=True)
    boundaries = record.get("boundaries")
    if boundaries is not None:
        if any(b > len(tokens) for b in boundaries):
            raise CorpusValidationError(
                "boundary beyond the document end {}".format(len(tokens)), line_number
            )
        boundaries = tuple(sorted(set(boundaries)))
    doc_id = _doc_id(record)
    if doc_id is None:
        doc_id = "doc-{}".format(line_number)
    return Document(
        doc_id=doc_id, tokens=tokens, entities=entities, boundaries=boundaries
    )
