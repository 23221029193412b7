# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Span scorer: token encoder, multi-head biaffine grid, CNN refiner and head.

Shape chain for a padded batch of ``B`` sentences of length ``n``::

    B x n x d -> B x n x h (start, end) -> B x n x n x r (R)
              -> B x n x n x r (refined) -> B x n x n x |T| (P)

Padding cells of every grid are exactly zero and every convolution is
bias-free, so a sentence gets the same grids alone and inside a batch.
"""

from typing import NamedTuple, Optional

import numpy as np

from spangrid.config import BCE_CLIP
from spangrid.errors import GroupValidationError, TargetValidationError
from spangrid.model.vocab import UNK_ID
from spangrid.tensor import Tensor
from spangrid.tensor import ops


class ForwardOutput(NamedTuple):
    """Intermediate and final tensors of one forward pass."""

    hidden: Tensor
    start: Tensor
    end: Tensor
    grid: Tensor
    refined: Optional[Tensor]
    probs: Tensor


def encode_tokens(params, config, batch, rng=None, dropout=0.0):
    """Contextual token representations ``H`` (``B x n x d``).

    Toy mode looks token ids up in a trainable table; pieces mode max-pools
    precomputed word-piece embeddings into words. Either way the result then
    goes through ``mixer_layers`` residual bias-free 1-D convolutions.
    """
    mask = batch.token_mask
    dtype = config.dtype
    if config.encoder_mode == "pieces":
        if not batch.pieces:
            raise GroupValidationError(
                "Pieces encoder needs piece embeddings and groups."
            )
        words = [
            ops.piecewise_max_pool(Tensor(piece.embeddings, dtype=dtype), piece.groups)
            for piece in batch.pieces
        ]
        hidden = ops.stack_padded(words, batch.max_length)
    else:
        table = params["encoder.embeddings"]
        ids = np.where(batch.token_ids < table.shape[0], batch.token_ids, UNK_ID)
        hidden = ops.apply_mask(ops.embedding(table, ids), mask)
    for layer in range(config.mixer_layers):
        mixed = ops.conv1d_zero_pad(
            hidden, params["encoder.mixer.{}.kernel".format(layer)], mask
        )
        hidden = ops.apply_mask(ops.add(hidden, ops.gelu(mixed)), mask)
    if dropout and rng is not None:
        hidden = ops.dropout(hidden, dropout, rng)
    return hidden


def project_start_end(hidden, params, config):
    """``H_s = LeakyReLU(H W_s)`` and ``H_e = LeakyReLU(H W_e)``."""
    start = ops.leaky_relu(
        ops.matmul(hidden, params["projection.start"]), config.leaky_slope
    )
    end = ops.leaky_relu(
        ops.matmul(hidden, params["projection.end"]), config.leaky_slope
    )
    return start, end


def length_offsets(length, max_offset):
    """Row ids into the length table: ``clamp(i - j, -L, L) + L``."""
    positions = np.arange(length)
    offsets = positions[:, None] - positions[None, :]
    return np.clip(offsets, -max_offset, max_offset) + max_offset


def multi_head_biaffine(start, end, params, config, grid_mask):
    """Span feature grid ``R = S1 + S2``.

    ``S1[i, j] = (H_s[i] + H_e[j] + w_{i-j}) W`` with ``+`` meaning
    concatenation, computed block-wise on the rows of the single-head ``W``.
    ``S2`` concatenates ``K`` per-head bilinear forms of the split
    representations. Both triangles and the diagonal are filled.
    """
    h = config.hidden_size
    c = config.length_embed_dim
    weight = params["biaffine.W"]
    start_part = ops.matmul(start, ops.slice_axis(weight, 0, h, axis=0))
    end_part = ops.matmul(end, ops.slice_axis(weight, h, 2 * h, axis=0))
    offsets = length_offsets(start.shape[-2], config.max_offset)
    lengths = ops.embedding(params["biaffine.length_embeddings"], offsets)
    length_part = ops.matmul(lengths, ops.slice_axis(weight, 2 * h, 2 * h + c, axis=0))
    concat_path = ops.add(
        ops.add(ops.expand_dims(start_part, -2), ops.expand_dims(end_part, -3)),
        length_part,
    )

    heads = [
        ops.bilinear(start_head, params["biaffine.U.{}".format(k)], end_head)
        for k, (start_head, end_head) in enumerate(
            zip(ops.split(start, config.num_heads), ops.split(end, config.num_heads))
        )
    ]
    bilinear_path = heads[0] if len(heads) == 1 else ops.concat(heads, axis=-1)
    return ops.apply_mask(ops.add(concat_path, bilinear_path), grid_mask)


def cnn_refine(grid, params, config, grid_mask):
    """Residual CNN blocks followed by one final bias-free convolution.

    Each block computes ``GeLU(LayerNorm(Conv2d(R) + R))`` and zeroes the
    padding again, since LayerNorm maps zero vectors to ``beta``. Returns
    ``None`` when the config has no CNN blocks.
    """
    if not config.cnn_blocks:
        return None
    refined = grid
    for block in range(config.cnn_blocks):
        prefix = "cnn.{}.".format(block)
        convolved = ops.conv2d_zero_pad(refined, params[prefix + "kernel"], grid_mask)
        normed = ops.layer_norm_feature(
            ops.add(convolved, refined),
            params[prefix + "gamma"],
            params[prefix + "beta"],
            config.ln_eps,
        )
        refined = ops.apply_mask(ops.gelu(normed), grid_mask)
    return ops.conv2d_zero_pad(refined, params["cnn.final.kernel"], grid_mask)


def output_logits(grid, refined, params):
    """``P = Sigmoid(W_o (R + R'') + b)`` in every cell."""
    features = grid if refined is None else ops.add(grid, refined)
    logits = ops.add(
        ops.matmul(features, ops.transpose(params["output.W"])), params["output.b"]
    )
    return ops.sigmoid(logits)


def check_symmetric(targets, grid_mask=None):
    """Raise :class:`TargetValidationError` unless ``Y[i, j] == Y[j, i]``."""
    targets = np.asarray(targets)
    if grid_mask is not None:
        targets = np.where(
            np.asarray(grid_mask).reshape(grid_mask.shape + (1,)), targets, 0
        )
    if not np.array_equal(targets, np.swapaxes(targets, -3, -2)):
        raise TargetValidationError("Target grid is not symmetric in its span axes.")


def _triangle_weights(grid_mask, dtype):
    """Upper-triangle cell weights: 1 off the diagonal, 1/2 on it, 0 outside."""
    length = grid_mask.shape[-1]
    weights = np.triu(np.ones((length, length))) - 0.5 * np.eye(length)
    return (np.asarray(grid_mask) * weights)[..., None].astype(dtype)


def bce_loss(probs, targets, grid_mask):
    """Mean binary cross entropy over every valid ``(i, j, t)`` cell.

    Both triangles contribute. Mirrored cells are summed pairwise first, so
    the value is bit-for-bit unchanged when ``P`` is transposed over its span
    axes and ``Y`` is symmetric.

    :raises TargetValidationError: ``targets`` is not symmetric.
    """
    grid_mask = np.asarray(grid_mask, dtype=bool)
    check_symmetric(targets, grid_mask)
    dtype = probs.dtype
    y = Tensor(targets, dtype=dtype)
    one = Tensor(np.ones((), dtype=dtype))
    clipped = ops.clip(probs, BCE_CLIP, 1.0 - BCE_CLIP)
    log_likelihood = ops.add(
        ops.mul(y, ops.log(clipped)),
        ops.mul(ops.sub(one, y), ops.log(ops.sub(one, clipped))),
    )
    span_axes = tuple(range(probs.ndim - 3)) + (
        probs.ndim - 2,
        probs.ndim - 3,
        probs.ndim - 1,
    )
    mirrored = ops.add(log_likelihood, ops.transpose(log_likelihood, span_axes))
    weighted = ops.mul(mirrored, Tensor(_triangle_weights(grid_mask, dtype)))
    count = int(grid_mask.sum()) * probs.shape[-1]
    return ops.scale(ops.reduce_sum(weighted), -1.0 / max(count, 1))


def sentence_losses(probs, targets, grid_mask):
    """Mean BCE of every sentence of a batch, without recording a graph."""
    p = np.clip(np.asarray(probs.values, dtype=np.float64), BCE_CLIP, 1.0 - BCE_CLIP)
    y = np.asarray(targets, dtype=np.float64)
    cells = y * np.log(p) + (1.0 - y) * np.log(1.0 - p)
    mask = np.asarray(grid_mask, dtype=bool)[..., None]
    totals = np.where(mask, cells, 0.0).reshape(len(cells), -1).sum(axis=1)
    counts = mask.reshape(len(cells), -1).sum(axis=1) * probs.shape[-1]
    return -totals / np.maximum(counts, 1)


def forward_batch(params, config, batch, rng=None, dropout=0.0):
    """Run the whole scorer over a padded batch."""
    grid_mask = batch.grid_mask
    hidden = encode_tokens(params, config, batch, rng=rng, dropout=dropout)
    start, end = project_start_end(hidden, params, config)
    grid = multi_head_biaffine(start, end, params, config, grid_mask)
    refined = cnn_refine(grid, params, config, grid_mask)
    probs = output_logits(grid, refined, params)
    return ForwardOutput(hidden, start, end, grid, refined, probs)
