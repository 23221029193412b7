# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Differentiable tensor operations.

Every operation takes :class:`~spangrid.tensor.core.Tensor` inputs, returns a
new tensor and, when a :class:`~spangrid.tensor.core.Graph` is active and an
input requires gradients, records its vector-Jacobian product on the graph.
Reductions always run in a fixed order so results are reproducible bit for
bit.
"""

import math

import numpy as np
from scipy.special import erf

from spangrid.errors import (
    ConfigurationError,
    DimensionError,
    GroupValidationError,
)
from spangrid.tensor.core import Tensor, make_result

_SQRT_2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def as_tensor(value, dtype=None):
    """Return ``value`` unchanged if it is a tensor, else a constant tensor."""
    if isinstance(value, Tensor):
        return value
    return Tensor(value, dtype=dtype)


def _unbroadcast(grad, shape):
    """Sum ``grad`` down to ``shape`` after numpy broadcasting."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, extent in enumerate(shape):
        if extent == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _broadcast_shape(a, b, op):
    try:
        return np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise DimensionError("{} operands don't broadcast".format(op), a.shape, b.shape)


def add(a, b):
    """Elementwise ``a + b`` with broadcasting."""
    _broadcast_shape(a, b, "add")

    def backward(grad):
        return _unbroadcast(grad, a.shape), _unbroadcast(grad, b.shape)

    return make_result("add", a.values + b.values, (a, b), backward)


def sub(a, b):
    """Elementwise ``a - b`` with broadcasting."""
    _broadcast_shape(a, b, "sub")

    def backward(grad):
        return _unbroadcast(grad, a.shape), _unbroadcast(-grad, b.shape)

    return make_result("sub", a.values - b.values, (a, b), backward)


def mul(a, b):
    """Elementwise ``a * b`` with broadcasting."""
    _broadcast_shape(a, b, "mul")

    def backward(grad):
        return (
            _unbroadcast(grad * b.values, a.shape),
            _unbroadcast(grad * a.values, b.shape),
        )

    return make_result("mul", a.values * b.values, (a, b), backward)


def scale(a, factor):
    """Multiply by a constant scalar."""

    def backward(grad):
        return (grad * factor,)

    return make_result("scale", a.values * factor, (a,), backward)


def matmul(a, b):
    """Matrix product over the last two axes; leading axes of ``a`` are batch axes.

    :raises DimensionError: inner extents differ.
    """
    if a.ndim < 2 or b.ndim < 2 or a.shape[-1] != b.shape[-2]:
        raise DimensionError("matmul inner extents differ", a.shape, b.shape)

    def backward(grad):
        grad_a = np.matmul(grad, np.swapaxes(b.values, -1, -2))
        if b.ndim == 2:
            grad_b = np.matmul(
                a.values.reshape(-1, a.shape[-1]).T, grad.reshape(-1, grad.shape[-1])
            )
        else:
            grad_b = np.matmul(np.swapaxes(a.values, -1, -2), grad)
        return _unbroadcast(grad_a, a.shape), _unbroadcast(grad_b, b.shape)

    return make_result("matmul", np.matmul(a.values, b.values), (a, b), backward)


def transpose(a, axes=None):
    """Permute axes (reverse them by default)."""
    axes = tuple(reversed(range(a.ndim))) if axes is None else tuple(axes)
    inverse = tuple(np.argsort(axes))

    def backward(grad):
        return (np.transpose(grad, inverse),)

    return make_result("transpose", np.transpose(a.values, axes), (a,), backward)


def reshape(a, shape):
    """Return the same values under a new shape."""

    def backward(grad):
        return (grad.reshape(a.shape),)

    return make_result("reshape", a.values.reshape(shape), (a,), backward)


def expand_dims(a, axis):
    """Insert an axis of extent one."""
    return reshape(a, np.expand_dims(a.values, axis).shape)


def concat(tensors, axis=-1):
    """Concatenate along ``axis``."""
    tensors = tuple(tensors)
    axis = axis % tensors[0].ndim
    for tensor in tensors[1:]:
        if (
            tensor.ndim != tensors[0].ndim
            or tensor.shape[:axis] != tensors[0].shape[:axis]
            or tensor.shape[axis + 1 :] != tensors[0].shape[axis + 1 :]
        ):
            raise DimensionError(
                "concat operands differ outside the joined axis",
                tensors[0].shape,
                tensor.shape,
            )
    bounds = np.cumsum([0] + [tensor.shape[axis] for tensor in tensors])

    def backward(grad):
        return tuple(
            np.take(grad, range(bounds[i], bounds[i + 1]), axis=axis)
            for i in range(len(tensors))
        )

    values = np.concatenate([tensor.values for tensor in tensors], axis=axis)
    return make_result("concat", values, tensors, backward)


def slice_axis(a, start, stop, axis=-1):
    """Return the ``start:stop`` range of ``axis``."""
    index = [slice(None)] * a.ndim
    index[axis] = slice(start, stop)
    index = tuple(index)

    def backward(grad):
        full = np.zeros(a.shape, dtype=grad.dtype)
        full[index] = grad
        return (full,)

    return make_result("slice", np.ascontiguousarray(a.values[index]), (a,), backward)


def split(a, parts):
    """Split the last axis into ``parts`` equal slices.

    :raises ConfigurationError: the last extent is not divisible by ``parts``.
    """
    width = a.shape[-1]
    if parts < 1 or width % parts:
        raise ConfigurationError(
            "Can't split {0} features into {1} equal heads".format(width, parts)
        )
    step = width // parts
    return [slice_axis(a, i * step, (i + 1) * step) for i in range(parts)]


def embedding(table, ids):
    """Gather rows of ``table`` (rows x d) by integer ``ids`` of any shape."""
    ids = np.asarray(ids, dtype=np.int64)
    if ids.size and (ids.min() < 0 or ids.max() >= table.shape[0]):
        raise DimensionError("embedding ids out of range", ids.shape, table.shape)

    def backward(grad):
        full = np.zeros(table.shape, dtype=grad.dtype)
        np.add.at(full, ids.reshape(-1), grad.reshape(-1, table.shape[-1]))
        return (full,)

    return make_result("embedding", table.values[ids], (table,), backward)


def _expand_mask(mask, ndim):
    mask = np.asarray(mask, dtype=bool)
    return mask.reshape(mask.shape + (1,) * (ndim - mask.ndim))


def apply_mask(a, mask):
    """Replace cells where ``mask`` is false by exact zeros.

    ``mask`` covers the leading axes of ``a``; trailing axes are broadcast.
    """
    keep = _expand_mask(mask, a.ndim)
    zero = np.zeros((), dtype=a.dtype)

    def backward(grad):
        return (np.where(keep, grad, zero),)

    return make_result("mask", np.where(keep, a.values, zero), (a,), backward)


def leaky_relu(a, slope=0.01):
    """LeakyReLU with negative ``slope``."""
    positive = a.values > 0

    def backward(grad):
        return (np.where(positive, grad, grad * slope),)

    values = np.where(positive, a.values, a.values * slope)
    return make_result("leaky_relu", values, (a,), backward)


def gelu(a):
    """Exact GeLU, ``x * Phi(x)``."""
    cdf = 0.5 * (1.0 + erf(a.values / _SQRT_2))

    def backward(grad):
        pdf = np.exp(-0.5 * a.values * a.values) * _INV_SQRT_2PI
        return (grad * (cdf + a.values * pdf),)

    return make_result("gelu", (a.values * cdf).astype(a.dtype), (a,), backward)


def sigmoid(a):
    """Logistic sigmoid, evaluated without overflow."""
    decay = np.exp(-np.abs(a.values))
    values = np.where(a.values >= 0, 1.0 / (1.0 + decay), decay / (1.0 + decay))
    values = values.astype(a.dtype)

    def backward(grad):
        return (grad * values * (1.0 - values),)

    return make_result("sigmoid", values, (a,), backward)


ACTIVATIONS = {"leaky_relu": leaky_relu, "gelu": gelu, "sigmoid": sigmoid}
"""Elementwise activations by name."""


def activation(a, kind, **kwargs):
    """Apply the activation called ``kind`` elementwise."""
    try:
        function = ACTIVATIONS[kind]
    except KeyError:
        raise ConfigurationError("Unknown activation {!r}".format(kind))
    return function(a, **kwargs)


def log(a):
    """Natural logarithm."""

    def backward(grad):
        return (grad / a.values,)

    return make_result("log", np.log(a.values), (a,), backward)


def clip(a, low, high):
    """Clamp values to ``[low, high]``; gradient flows only inside the range."""
    inside = (a.values >= low) & (a.values <= high)

    def backward(grad):
        return (np.where(inside, grad, 0.0).astype(grad.dtype),)

    return make_result("clip", np.clip(a.values, low, high), (a,), backward)


def reduce_sum(a):
    """Sum of all elements as a scalar tensor."""

    def backward(grad):
        return (np.broadcast_to(grad, a.shape).astype(a.dtype),)

    return make_result("sum", np.asarray(a.values.sum()), (a,), backward)


def reduce_mean(a):
    """Mean of all elements as a scalar tensor."""
    return scale(reduce_sum(a), 1.0 / a.size)


def layer_norm_feature(x, gamma, beta, eps=1e-5):
    """Normalise every cell over its last (feature) axis, then scale and shift.

    :raises ConfigurationError: ``eps`` is not positive.
    :raises DimensionError: feature extent differs from ``gamma``/``beta``.
    """
    if eps <= 0:
        raise ConfigurationError("LayerNorm eps must be positive, got {}".format(eps))
    width = x.shape[-1]
    if gamma.shape != (width,) or beta.shape != (width,):
        raise DimensionError(
            "LayerNorm feature extent differs from its affine parameters",
            x.shape,
            gamma.shape,
            beta.shape,
        )
    mean = x.values.mean(axis=-1, keepdims=True)
    centred = x.values - mean
    inv_std = 1.0 / np.sqrt((centred * centred).mean(axis=-1, keepdims=True) + eps)
    normed = centred * inv_std

    def backward(grad):
        grad_normed = grad * gamma.values
        grad_x = inv_std * (
            grad_normed
            - grad_normed.mean(axis=-1, keepdims=True)
            - normed * (grad_normed * normed).mean(axis=-1, keepdims=True)
        )
        flat_grad = grad.reshape(-1, width)
        grad_gamma = (flat_grad * normed.reshape(-1, width)).sum(axis=0)
        grad_beta = flat_grad.sum(axis=0)
        return grad_x, grad_gamma, grad_beta

    values = normed * gamma.values + beta.values
    return make_result("layer_norm", values, (x, gamma, beta), backward)


def _check_kernel(kernels, channels, spatial_axes):
    size = kernels.shape[0]
    if size % 2 == 0:
        raise ConfigurationError(
            "Convolution kernel size must be odd, got {}".format(size)
        )
    if kernels.shape[:spatial_axes] != (size,) * spatial_axes:
        raise DimensionError("Convolution kernel must be square", kernels.shape)
    if kernels.shape[spatial_axes] != channels:
        raise DimensionError(
            "Convolution input channels differ from the kernel",
            kernels.shape,
            (channels,),
        )
    return size


def conv2d_zero_pad(x, kernels, mask=None):
    """Bias-free 'same' 2-D convolution over a span grid.

    :param x: Grid ``n x n x c`` or batch ``B x n x n x c``.
    :param kernels: ``k x k x c x c_out``, ``k`` odd.
    :param mask: Boolean ``n x n`` (or ``B x n x n``) validity mask; masked
        input cells read as zero and masked output cells are exactly zero.
    """
    batched = x.ndim == 4
    values = x.values if batched else x.values[None]
    if values.ndim != 4:
        raise DimensionError("conv2d expects an n x n x c grid", x.shape)
    count, rows, cols, channels = values.shape
    size = _check_kernel(kernels, channels, 2)
    out_channels = kernels.shape[3]
    half = size // 2
    if mask is None:
        keep = np.ones((count, rows, cols, 1), dtype=bool)
    else:
        keep = np.asarray(mask, dtype=bool).reshape(count, rows, cols, 1)
    zero = np.zeros((), dtype=x.dtype)

    padded = np.zeros((count, rows + 2 * half, cols + 2 * half, channels), x.dtype)
    padded[:, half : half + rows, half : half + cols] = np.where(keep, values, zero)
    out = np.zeros((count, rows, cols, out_channels), dtype=x.dtype)
    for a in range(size):
        for b in range(size):
            window = padded[:, a : a + rows, b : b + cols]
            out += np.matmul(window, kernels.values[a, b])
    out = np.where(keep, out, zero)

    def backward(grad):
        grad = np.where(keep, grad if batched else grad[None], zero)
        flat_grad = grad.reshape(-1, out_channels)
        grad_padded = np.zeros(padded.shape, dtype=grad.dtype)
        grad_kernels = np.zeros(kernels.shape, dtype=grad.dtype)
        for a in range(size):
            for b in range(size):
                window = padded[:, a : a + rows, b : b + cols].reshape(-1, channels)
                grad_kernels[a, b] = np.matmul(window.T, flat_grad)
                grad_padded[:, a : a + rows, b : b + cols] += np.matmul(
                    grad, kernels.values[a, b].T
                )
        grad_x = grad_padded[:, half : half + rows, half : half + cols]
        grad_x = np.where(keep, grad_x, zero)
        return (grad_x if batched else grad_x[0]), grad_kernels

    return make_result(
        "conv2d", out if batched else out[0], (x, kernels), backward
    )


def conv1d_zero_pad(x, kernels, mask=None):
    """Bias-free 'same' 1-D convolution over the token axis.

    :param x: ``n x d`` or batch ``B x n x d``.
    :param kernels: ``k x d x d_out``, ``k`` odd.
    :param mask: Boolean ``n`` (or ``B x n``) token mask.
    """
    batched = x.ndim == 3
    values = x.values if batched else x.values[None]
    if values.ndim != 3:
        raise DimensionError("conv1d expects an n x d sequence", x.shape)
    count, length, channels = values.shape
    size = _check_kernel(kernels, channels, 1)
    out_channels = kernels.shape[2]
    half = size // 2
    if mask is None:
        keep = np.ones((count, length, 1), dtype=bool)
    else:
        keep = np.asarray(mask, dtype=bool).reshape(count, length, 1)
    zero = np.zeros((), dtype=x.dtype)

    padded = np.zeros((count, length + 2 * half, channels), dtype=x.dtype)
    padded[:, half : half + length] = np.where(keep, values, zero)
    out = np.zeros((count, length, out_channels), dtype=x.dtype)
    for a in range(size):
        out += np.matmul(padded[:, a : a + length], kernels.values[a])
    out = np.where(keep, out, zero)

    def backward(grad):
        grad = np.where(keep, grad if batched else grad[None], zero)
        flat_grad = grad.reshape(-1, out_channels)
        grad_padded = np.zeros(padded.shape, dtype=grad.dtype)
        grad_kernels = np.zeros(kernels.shape, dtype=grad.dtype)
        for a in range(size):
            window = padded[:, a : a + length].reshape(-1, channels)
            grad_kernels[a] = np.matmul(window.T, flat_grad)
            grad_padded[:, a : a + length] += np.matmul(grad, kernels.values[a].T)
        grad_x = np.where(keep, grad_padded[:, half : half + length], zero)
        return (grad_x if batched else grad_x[0]), grad_kernels

    return make_result(
        "conv1d", out if batched else out[0], (x, kernels), backward
    )


def validate_groups(groups, piece_count):
    """Check that ``groups`` partition ``range(piece_count)`` contiguously in order.

    :raises GroupValidationError: a group is empty, overlaps, skips pieces or
        is out of order.
    """
    if piece_count and not groups:
        raise GroupValidationError(
            "No piece groups given for {} pieces".format(piece_count)
        )
    expected_start = 0
    for index, (start, stop) in enumerate(groups):
        if stop <= start:
            raise GroupValidationError("Piece group {} is empty".format(index))
        if start != expected_start:
            raise GroupValidationError(
                "Piece group {0} starts at {1}, expected {2}: groups must be "
                "contiguous, ordered and non-overlapping".format(
                    index, start, expected_start
                )
            )
        expected_start = stop
    if expected_start != piece_count:
        raise GroupValidationError(
            "Piece groups cover {0} of {1} pieces".format(expected_start, piece_count)
        )


def piecewise_max_pool(pieces, groups):
    """Max-pool word pieces (``p x d``) into words (``w x d``) by index ranges."""
    groups = [tuple(group) for group in groups]
    validate_groups(groups, pieces.shape[0])
    # first maximal piece per column wins ties
    winners = np.zeros((len(groups), pieces.shape[1]), dtype=np.int64)
    for row, (start, stop) in enumerate(groups):
        winners[row] = start + np.argmax(pieces.values[start:stop], axis=0)
    columns = np.arange(pieces.shape[1])
    values = pieces.values[winners, columns]

    def backward(grad):
        full = np.zeros(pieces.shape, dtype=grad.dtype)
        for row in range(len(groups)):
            full[winners[row], columns] += grad[row]
        return (full,)

    return make_result("max_pool", values, (pieces,), backward)


def stack_padded(tensors, length):
    """Stack ``n_i x d`` tensors into ``B x length x d`` with zero padding."""
    tensors = tuple(tensors)
    width = tensors[0].shape[-1]
    values = np.zeros((len(tensors), length, width), dtype=tensors[0].dtype)
    for index, tensor in enumerate(tensors):
        if tensor.shape[-1] != width or tensor.shape[0] > length:
            raise DimensionError(
                "Can't pad sequence into the batch", tensor.shape, (length, width)
            )
        values[index, : tensor.shape[0]] = tensor.values

    def backward(grad):
        return tuple(
            grad[index, : tensor.shape[0]] for index, tensor in enumerate(tensors)
        )

    return make_result("stack_padded", values, tensors, backward)


def bilinear(left, weight, right):
    """Per-feature bilinear form.

    ``out[i, j, q] = left[i] . weight[:, q, :] . right[j]``

    :param left: ``n x a`` or ``B x n x a``.
    :param weight: ``a x r x b``.
    :param right: ``n x b`` or ``B x n x b``.
    :returns: ``n x n x r`` (or batched) grid.
    """
    batched = left.ndim == 3
    lv = left.values if batched else left.values[None]
    rv = right.values if batched else right.values[None]
    if (
        weight.ndim != 3
        or lv.shape[-1] != weight.shape[0]
        or rv.shape[-1] != weight.shape[2]
        or lv.shape[:2] != rv.shape[:2]
    ):
        raise DimensionError(
            "bilinear shapes don't agree", left.shape, weight.shape, right.shape
        )
    count, length, left_width = lv.shape
    _, features, right_width = weight.shape
    # projected[b, i, q, y] = sum_x left[b, i, x] weight[x, q, y]
    projected = np.matmul(lv, weight.values.reshape(left_width, -1)).reshape(
        count, length, features, right_width
    )
    out = np.matmul(
        projected.reshape(count, length * features, right_width),
        np.swapaxes(rv, 1, 2),
    )
    out = out.reshape(count, length, features, length).transpose(0, 1, 3, 2)

    def backward(grad):
        grad = grad if batched else grad[None]
        grad_projected = np.matmul(
            grad.transpose(0, 1, 3, 2).reshape(count, length * features, length), rv
        ).reshape(count, length, features * right_width)
        grad_right = np.matmul(
            grad.transpose(0, 2, 1, 3).reshape(count, length, length * features),
            projected.reshape(count, length * features, right_width),
        )
        flat_weight = weight.values.reshape(left_width, features * right_width)
        grad_left = np.matmul(grad_projected, flat_weight.T)
        grad_weight = np.matmul(
            lv.reshape(-1, left_width).T,
            grad_projected.reshape(-1, features * right_width),
        ).reshape(weight.shape)
        if not batched:
            grad_left, grad_right = grad_left[0], grad_right[0]
        return grad_left, grad_weight, grad_right

    values = np.ascontiguousarray(out if batched else out[0])
    return make_result("bilinear", values, (left, weight, right), backward)


def dropout(a, rate, rng):
    """Inverted dropout; identity when ``rate`` is zero."""
    if not rate:
        return a
    keep = (rng.random(a.shape) >= rate) / (1.0 - rate)
    keep = keep.astype(a.dtype)

    def backward(grad):
        return (grad * keep,)

    return make_result("dropout", a.values * keep, (a,), backward)
