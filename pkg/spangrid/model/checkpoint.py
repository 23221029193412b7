# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Versioned named-tensor checkpoint archive.

Layout (little endian)::

    magic (8 bytes) | format version (u16) | header length (u32) | header JSON
    SHA-256 of the header block above (32 bytes)
    record count (u32)
    per record: name length (u16) | name | dtype code (u8) | ndim (u8)
                | shape (u32 x ndim) | row-major values
    SHA-256 of everything above (32 bytes)

A damaged header block is an incompatible checkpoint
(:class:`~spangrid.errors.CheckpointVersionError`); truncated or damaged
records are a :class:`~spangrid.errors.CheckpointError`.
"""

import hashlib
import json
import logging
import os
import struct
from collections import OrderedDict

import numpy as np

from spangrid.config import CHECKPOINT_FORMAT_VERSION, CHECKPOINT_MAGIC
from spangrid.errors import CheckpointError, CheckpointVersionError

DTYPE_CODES = {1: np.dtype("<f4"), 2: np.dtype("<f8"), 3: np.dtype("<i8")}
"""Storage dtypes by record code."""

_DIGEST_SIZE = hashlib.sha256().digest_size


def _dtype_code(dtype):
    for code, candidate in DTYPE_CODES.items():
        if np.dtype(dtype).newbyteorder("<") == candidate:
            return code
    raise CheckpointError("Can't store arrays of dtype {}".format(dtype))


def encode_checkpoint(header, arrays):
    """Serialise a header dictionary and ordered arrays to bytes."""
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    header_block = b"".join(
        [
            CHECKPOINT_MAGIC,
            struct.pack("<HI", CHECKPOINT_FORMAT_VERSION, len(header_bytes)),
            header_bytes,
        ]
    )
    chunks = [
        header_block,
        hashlib.sha256(header_block).digest(),
        struct.pack("<I", len(arrays)),
    ]
    for name, array in arrays.items():
        array = np.asarray(array)
        code = _dtype_code(array.dtype)
        name_bytes = name.encode("utf-8")
        chunks.append(struct.pack("<H", len(name_bytes)))
        chunks.append(name_bytes)
        chunks.append(struct.pack("<BB", code, array.ndim))
        chunks.append(struct.pack("<{}I".format(array.ndim), *array.shape))
        chunks.append(np.ascontiguousarray(array, dtype=DTYPE_CODES[code]).tobytes())
    body = b"".join(chunks)
    return body + hashlib.sha256(body).digest()


class _Reader(object):
    def __init__(self, data):
        self.data = data
        self.offset = 0

    def take(self, size):
        if self.offset + size > len(self.data):
            raise CheckpointError("Checkpoint is truncated.")
        chunk = self.data[self.offset : self.offset + size]
        self.offset += size
        return chunk

    def unpack(self, fmt):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def decode_checkpoint(data):
    """Parse checkpoint bytes into ``(header, arrays)``.

    Nothing is returned unless the whole archive verifies.

    :raises CheckpointVersionError: magic or format version don't match, or
        the header block fails its digest.
    :raises CheckpointError: the archive is truncated or its records are
        damaged.
    """
    reader = _Reader(data)
    magic = reader.take(len(CHECKPOINT_MAGIC))
    if magic != CHECKPOINT_MAGIC:
        raise CheckpointVersionError("Not a SpanGrid checkpoint (bad magic bytes).")
    (version,) = reader.unpack("<H")
    if version != CHECKPOINT_FORMAT_VERSION:
        raise CheckpointVersionError(
            "Checkpoint format version {0} is not supported (expected {1}).".format(
                version, CHECKPOINT_FORMAT_VERSION
            )
        )
    (header_size,) = reader.unpack("<I")
    header_bytes = reader.take(header_size)
    header_end = reader.offset
    if hashlib.sha256(data[:header_end]).digest() != reader.take(_DIGEST_SIZE):
        raise CheckpointVersionError(
            "Checkpoint header is corrupted (header digest mismatch)."
        )
    if len(data) < reader.offset + _DIGEST_SIZE:
        raise CheckpointError("Checkpoint is truncated.")
    body, digest = data[:-_DIGEST_SIZE], data[-_DIGEST_SIZE:]
    if hashlib.sha256(body).digest() != digest:
        raise CheckpointError("Checkpoint is truncated or corrupted (digest mismatch).")

    try:
        header = json.loads(header_bytes.decode("utf-8"))
    except ValueError as e:
        raise CheckpointVersionError("Checkpoint header is unreadable: {}".format(e))
    reader = _Reader(body)
    reader.offset = header_end + _DIGEST_SIZE
    (count,) = reader.unpack("<I")
    arrays = OrderedDict()
    for _ in range(count):
        (name_size,) = reader.unpack("<H")
        name = reader.take(name_size).decode("utf-8")
        code, ndim = reader.unpack("<BB")
        if code not in DTYPE_CODES:
            raise CheckpointError("Unknown dtype code {0} for {1}".format(code, name))
        shape = reader.unpack("<{}I".format(ndim))
        dtype = DTYPE_CODES[code]
        size = int(np.prod(shape, dtype=np.int64)) * dtype.itemsize
        values = np.frombuffer(reader.take(size), dtype=dtype)
        arrays[name] = values.reshape(shape).copy()
    if reader.offset != len(body):
        raise CheckpointError("Checkpoint has trailing bytes.")
    return header, arrays


def save_checkpoint(path, header, arrays):
    """Write a checkpoint atomically (temporary file, then rename)."""
    data = encode_checkpoint(header, arrays)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    temporary = "{}.tmp".format(path)
    with open(temporary, "wb") as f:
        f.write(data)
    os.replace(temporary, path)
    logging.info("Checkpoint with {0} arrays written to {1}".format(len(arrays), path))


def load_checkpoint(path):
    """Read and verify a checkpoint file; see :func:`decode_checkpoint`."""
    with open(path, "rb") as f:
        data = f.read()
    header, arrays = decode_checkpoint(data)
    logging.debug("Checkpoint {0}: {1} arrays".format(path, len(arrays)))
    return header, arrays
