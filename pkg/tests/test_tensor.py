# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""SpanGrid tensor and differentiation tests."""

import math

import numpy as np
import pytest

from spangrid.errors import (
    ConfigurationError,
    ContractError,
    DimensionError,
    GroupValidationError,
)
from spangrid.tensor import (
    Graph,
    Tensor,
    backward,
    numerical_gradient,
    relative_error,
    resolve_dtype,
)
from spangrid.tensor import ops


def _param(values):
    return Tensor(np.asarray(values, dtype=np.float64), requires_grad=True)


def _conv2d_oracle(x, kernels):
    n, _, c = x.shape
    k = kernels.shape[0]
    half = k // 2
    out = np.zeros((n, n, kernels.shape[3]))
    for i in range(n):
        for j in range(n):
            for a in range(k):
                for b in range(k):
                    row, col = i + a - half, j + b - half
                    if 0 <= row < n and 0 <= col < n:
                        for q in range(c):
                            out[i, j] += x[row, col, q] * kernels[a, b, q]
    return out


def test_resolve_dtype():
    """Test precision modes map to numpy dtypes."""
    assert resolve_dtype("32") == np.float32
    assert resolve_dtype(64) == np.float64
    with pytest.raises(ConfigurationError):
        resolve_dtype("16")


def test_item_needs_one_element():
    """Test item() refuses tensors with several elements."""
    assert Tensor([2.5]).item() == 2.5
    with pytest.raises(ContractError):
        Tensor([1.0, 2.0]).item()


@pytest.mark.parametrize(
    "left, right, expected",
    [
        (np.eye(2), [[3.0, 4.0], [5.0, 6.0]], [[3.0, 4.0], [5.0, 6.0]]),
        (np.zeros((2, 3)), np.ones((3, 4)), np.zeros((2, 4))),
        ([[1.0, 2.0], [3.0, 4.0]], [[5.0, 6.0], [7.0, 8.0]], [[19, 22], [43, 50]]),
    ],
)
def test_matmul(left, right, expected):
    """Test matrix products against hand results."""
    result = ops.matmul(Tensor(left), Tensor(right))
    np.testing.assert_array_equal(result.values, np.asarray(expected, dtype=float))


def test_matmul_shape_mismatch():
    """Test matmul names both shapes on mismatch."""
    with pytest.raises(DimensionError) as e:
        ops.matmul(Tensor(np.ones((2, 3))), Tensor(np.ones((2, 3))))
    assert "(2, 3), (2, 3)" in str(e.value)


def test_conv2d_single_cell():
    """Test a 1x1 grid only sees the kernel centre."""
    kernels = np.arange(9 * 2 * 3, dtype=float).reshape(3, 3, 2, 3)
    x = np.array([[[1.5, -2.0]]])
    result = ops.conv2d_zero_pad(Tensor(x), Tensor(kernels))
    np.testing.assert_allclose(result.values[0, 0], x[0, 0] @ kernels[1, 1])


def test_conv2d_zero_input():
    """Test the bias-free convolution maps zeros to zeros."""
    kernels = np.ones((3, 3, 2, 2))
    result = ops.conv2d_zero_pad(Tensor(np.zeros((4, 4, 2))), Tensor(kernels))
    assert not result.values.any()


def test_conv2d_matches_loop_oracle(rng):
    """Test convolution against a direct loop summation."""
    x = rng.normal(size=(5, 5, 2))
    kernels = rng.normal(size=(3, 3, 2, 2))
    result = ops.conv2d_zero_pad(Tensor(x), Tensor(kernels))
    np.testing.assert_allclose(result.values, _conv2d_oracle(x, kernels), atol=1e-12)


def test_conv2d_mask_zeroes_cells(rng):
    """Test masked cells are read as zero and written as exact zeros."""
    x = rng.normal(size=(4, 4, 2))
    kernels = rng.normal(size=(3, 3, 2, 2))
    mask = np.zeros((4, 4), dtype=bool)
    mask[:2, :2] = True
    result = ops.conv2d_zero_pad(Tensor(x), Tensor(kernels), mask)
    assert not result.values[~mask].any()
    expected = _conv2d_oracle(np.where(mask[..., None], x, 0.0), kernels)
    np.testing.assert_allclose(result.values[mask], expected[mask], atol=1e-12)


def test_conv2d_even_kernel():
    """Test even kernel sizes are rejected."""
    with pytest.raises(ConfigurationError):
        ops.conv2d_zero_pad(Tensor(np.ones((3, 3, 1))), Tensor(np.ones((2, 2, 1, 1))))


def test_layer_norm_examples(rng):
    """Test constant and already normalised vectors and the scalar formula."""
    ones, zeros = Tensor(np.ones(2)), Tensor(np.zeros(2))
    constant = ops.layer_norm_feature(Tensor([3.0, 3.0]), ones, zeros)
    np.testing.assert_allclose(constant.values, [0.0, 0.0], atol=1e-12)
    unit = ops.layer_norm_feature(Tensor([1.0, -1.0]), ones, zeros, eps=1e-12)
    np.testing.assert_allclose(unit.values, [1.0, -1.0], atol=1e-9)

    x = rng.normal(size=6)
    gamma, beta = rng.normal(size=6), rng.normal(size=6)
    result = ops.layer_norm_feature(Tensor(x), Tensor(gamma), Tensor(beta), eps=1e-5)
    expected = (x - x.mean()) / math.sqrt(x.var() + 1e-5) * gamma + beta
    np.testing.assert_allclose(result.values, expected, atol=1e-12)


def test_layer_norm_mismatch():
    """Test LayerNorm rejects affine parameters of another width."""
    with pytest.raises(DimensionError):
        ops.layer_norm_feature(
            Tensor(np.ones((2, 3))), Tensor(np.ones(2)), Tensor(np.zeros(2))
        )


def test_activations():
    """Test activation values at reference points."""
    assert ops.activation(Tensor([0.0]), "gelu").item() == 0.0
    assert ops.activation(Tensor([-1.0]), "leaky_relu", slope=0.01).item() == -0.01
    assert ops.activation(Tensor([0.0]), "sigmoid").item() == 0.5
    with pytest.raises(ConfigurationError):
        ops.activation(Tensor([0.0]), "tanh")


def test_sigmoid_derivative_at_zero():
    """Test d/dx sigmoid(0) is one quarter."""
    x = _param([0.0])
    with Graph():
        y = ops.reduce_sum(ops.sigmoid(x))
        backward(y)
    assert x.grad[0] == pytest.approx(0.25)


def test_backward_needs_scalar():
    """Test backward refuses non-scalar losses."""
    x = _param([1.0, 2.0])
    with Graph():
        y = ops.scale(x, 2.0)
        with pytest.raises(ContractError):
            backward(y)


def test_backward_needs_graph():
    """Test backward refuses results computed outside of a graph."""
    x = _param([1.0])
    with pytest.raises(ContractError):
        backward(ops.reduce_sum(x))


def test_shared_input_accumulates():
    """Test a tensor used twice gets the sum of both gradients."""
    x = _param([3.0])
    with Graph():
        backward(ops.reduce_sum(ops.mul(x, x)))
    assert x.grad[0] == pytest.approx(6.0)


def test_matmul_gradients(rng):
    """Test matmul gradients against central differences."""
    a = _param(rng.normal(size=(3, 3)))
    b = _param(rng.normal(size=(3, 3)))
    weights = rng.normal(size=(3, 3))

    def objective():
        return float((np.matmul(a.values, b.values) * weights).sum())

    with Graph():
        loss = ops.reduce_sum(ops.mul(ops.matmul(a, b), Tensor(weights)))
        backward(loss)
    for tensor in (a, b):
        numeric = numerical_gradient(objective, tensor, 1e-5)
        assert relative_error(tensor.grad, numeric) < 1e-6


@pytest.mark.parametrize(
    "build",
    [
        lambda x, k, rng: ops.conv2d_zero_pad(x, k, np.triu(np.ones((4, 4), bool))),
        lambda x, k, rng: ops.gelu(ops.layer_norm_feature(
            x, Tensor(rng.normal(size=2)), Tensor(rng.normal(size=2))
        )),
    ],
)
def test_grid_operation_gradients(build, rng):
    """Test convolution and LayerNorm gradients against central differences."""
    x = _param(rng.normal(size=(4, 4, 2)))
    k = _param(rng.normal(size=(3, 3, 2, 2)))
    weights = Tensor(rng.normal(size=(4, 4, 2)))

    def loss():
        return ops.reduce_sum(ops.mul(build(x, k, np.random.default_rng(0)), weights))

    with Graph():
        backward(loss())
    numeric = numerical_gradient(lambda: loss().item(), x, 1e-5)
    assert relative_error(x.grad, numeric) < 1e-6


def test_bilinear_gradients(rng):
    """Test bilinear form values and gradients."""
    left = _param(rng.normal(size=(3, 2)))
    weight = _param(rng.normal(size=(2, 4, 2)))
    right = _param(rng.normal(size=(3, 2)))
    result = ops.bilinear(left, weight, right)
    expected = np.einsum("ix,xqy,jy->ijq", left.values, weight.values, right.values)
    np.testing.assert_allclose(result.values, expected, atol=1e-12)

    weights = Tensor(rng.normal(size=(3, 3, 4)))

    def loss():
        return ops.reduce_sum(ops.mul(ops.bilinear(left, weight, right), weights))

    with Graph():
        backward(loss())
    for tensor in (left, weight, right):
        numeric = numerical_gradient(lambda: loss().item(), tensor, 1e-5)
        assert relative_error(tensor.grad, numeric) < 1e-6


def test_piecewise_max_pool_examples(rng):
    """Test identity, a two-piece group and a loop oracle."""
    pieces = rng.normal(size=(6, 4))
    identity = ops.piecewise_max_pool(Tensor(pieces), [(i, i + 1) for i in range(6)])
    np.testing.assert_array_equal(identity.values, pieces)

    pair = ops.piecewise_max_pool(Tensor([[0.2], [0.7]]), [(0, 2)])
    assert pair.values.tolist() == [[0.7]]

    pooled = ops.piecewise_max_pool(Tensor(pieces), [(0, 2), (2, 6)])
    expected = np.array([pieces[0:2].max(axis=0), pieces[2:6].max(axis=0)])
    np.testing.assert_array_equal(pooled.values, expected)


@pytest.mark.parametrize(
    "groups", [[(0, 0), (0, 3)], [(0, 2), (1, 3)], [(1, 3), (0, 1)], [(0, 2)]]
)
def test_piecewise_max_pool_invalid_groups(groups):
    """Test empty, overlapping, unordered and incomplete groups."""
    with pytest.raises(GroupValidationError):
        ops.piecewise_max_pool(Tensor(np.ones((3, 2))), groups)


def test_piecewise_max_pool_gradient_goes_to_winner():
    """Test the gradient reaches only the maximal piece."""
    pieces = _param([[0.2, 0.9], [0.7, 0.1]])
    with Graph():
        backward(ops.reduce_sum(ops.piecewise_max_pool(pieces, [(0, 2)])))
    np.testing.assert_array_equal(pieces.grad, [[0.0, 1.0], [1.0, 0.0]])


def test_apply_mask_gives_exact_zeros():
    """Test masking replaces cells by exact zeros, NaN included."""
    x = Tensor([[np.nan, 1.0], [2.0, 3.0]])
    masked = ops.apply_mask(x, [[False, True], [True, True]])
    assert masked.values[0, 0] == 0.0
    assert masked.values[1, 1] == 3.0


def test_graph_records_only_inside_context():
    """Test operations are recorded only while a graph is active."""
    x = _param([1.0])
    ops.scale(x, 2.0)
    with Graph() as graph:
        ops.scale(x, 2.0)
        ops.scale(Tensor([1.0]), 2.0)
    assert len(graph) == 1
