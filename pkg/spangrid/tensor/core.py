# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Dense tensors and the reverse-mode differentiation tape."""

import itertools
import logging
import threading

import numpy as np

from spangrid.config import PRECISIONS
from spangrid.errors import ConfigurationError, ContractError

_node_ids = itertools.count()
_local = threading.local()


def resolve_dtype(precision):
    """Return the numpy dtype of a precision mode ("32" or "64")."""
    try:
        return np.dtype(PRECISIONS[str(precision)])
    except KeyError:
        raise ConfigurationError(
            "Unknown precision {0!r}, expected one of {1}.".format(
                precision, ", ".join(sorted(PRECISIONS))
            )
        )


class Tensor(object):
    """Dense row-major array taking part in a differentiation graph."""

    def __init__(self, values, requires_grad=False, name=None, dtype=None):
        """Wrap ``values`` (copied only when a dtype cast is needed).

        :param values: Array-like numeric values.
        :param requires_grad: Whether gradients flow into this tensor.
        :param name: Optional parameter name.
        :param dtype: Storage dtype; floating arrays keep their own by default.
        """
        array = np.asarray(values)
        if dtype is not None:
            array = array.astype(dtype, copy=False)
        elif not np.issubdtype(array.dtype, np.floating):
            array = array.astype(np.float64)
        self.values = np.ascontiguousarray(array)
        self.requires_grad = requires_grad
        self.name = name
        self.grad = None
        self.node_id = next(_node_ids)
        self.is_leaf = True
        self.graph = None

    @property
    def shape(self):
        """Extents of the tensor."""
        return self.values.shape

    @property
    def ndim(self):
        """Number of axes."""
        return self.values.ndim

    @property
    def dtype(self):
        """Numpy dtype of the values."""
        return self.values.dtype

    @property
    def size(self):
        """Number of elements, ``product(shape)``."""
        return self.values.size

    def item(self):
        """Return the value of a one-element tensor as a Python float."""
        if self.size != 1:
            raise ContractError(
                "item() needs a one-element tensor, got shape {}".format(self.shape)
            )
        return float(self.values.reshape(()))

    def numpy(self):
        """Return the underlying array."""
        return self.values

    def zero_grad(self):
        """Forget the accumulated gradient."""
        self.grad = None

    def accumulate_grad(self, grad):
        """Add ``grad`` to the stored gradient."""
        grad = np.asarray(grad, dtype=self.dtype).reshape(self.shape)
        if self.grad is None:
            self.grad = grad.copy()
        else:
            self.grad += grad

    def __repr__(self):
        """Short description with name and shape."""
        return "Tensor(name={0!r}, shape={1}, dtype={2}, requires_grad={3})".format(
            self.name, self.shape, self.dtype, self.requires_grad
        )


class Record(object):
    """One executed operation on the tape."""

    __slots__ = ("op", "inputs", "output", "backward")

    def __init__(self, op, inputs, output, backward):
        """Store the operation name, its tensors and its vector-Jacobian rule."""
        self.op = op
        self.inputs = inputs
        self.output = output
        self.backward = backward


class Graph(object):
    """Ordered record of the operations executed in one forward pass.

    A graph becomes active for the current thread inside a ``with`` block;
    operations executed outside of any active graph are not recorded.
    """

    def __init__(self):
        """Start an empty tape."""
        self.records = []

    def __enter__(self):
        """Make this graph the recording target of the current thread."""
        _graph_stack().append(self)
        return self

    def __exit__(self, exc_type, exc_value, tb):
        """Stop recording."""
        _graph_stack().pop()
        return False

    def __len__(self):
        """Number of recorded operations."""
        return len(self.records)

    def record(self, op, inputs, output, backward):
        """Append an executed operation."""
        output.graph = self
        self.records.append(Record(op, inputs, output, backward))

    def backward(self, loss):
        """Propagate d(loss) back through the tape in exact reverse order."""
        if loss.size != 1:
            raise ContractError(
                "backward() needs a scalar loss, got shape {}".format(loss.shape)
            )
        if loss.graph is not self:
            raise ContractError("Loss was not recorded on this graph.")
        pending = {loss.node_id: np.ones(loss.shape, dtype=loss.dtype)}
        for record in reversed(self.records):
            grad = pending.pop(record.output.node_id, None)
            if grad is None:
                continue
            input_grads = record.backward(grad)
            for tensor, input_grad in zip(record.inputs, input_grads):
                if input_grad is None or not tensor.requires_grad:
                    continue
                if tensor.is_leaf:
                    tensor.accumulate_grad(input_grad)
                elif tensor.node_id in pending:
                    pending[tensor.node_id] = pending[tensor.node_id] + input_grad
                else:
                    pending[tensor.node_id] = input_grad
        logging.debug("Backward pass through {} operations".format(len(self.records)))
        self.records = []


def _graph_stack():
    if not hasattr(_local, "stack"):
        _local.stack = []
    return _local.stack


def current_graph():
    """Return the graph recording on this thread, if any."""
    stack = _graph_stack()
    return stack[-1] if stack else None


def backward(loss):
    """Populate ``grad`` of every parameter reachable from ``loss``."""
    if loss.size != 1:
        raise ContractError(
            "backward() needs a scalar loss, got shape {}".format(loss.shape)
        )
    if loss.graph is None:
        raise ContractError(
            "Loss has no recorded graph; run the forward pass inside a Graph."
        )
    loss.graph.backward(loss)


def make_result(op, values, inputs, backward_fn):
    """Wrap ``values`` as the output of ``op`` and record it when needed."""
    requires_grad = any(tensor.requires_grad for tensor in inputs)
    output = Tensor(values, requires_grad=requires_grad)
    output.is_leaf = False
    graph = current_graph()
    if requires_grad and graph is not None:
        graph.record(op, inputs, output, backward_fn)
    return output


def numerical_gradient(fn, tensor, step):
    """Central finite difference gradient of scalar ``fn()`` w.r.t. ``tensor``."""
    flat = tensor.values.reshape(-1)
    grad = np.zeros(flat.shape, dtype=np.float64)
    for index in range(flat.size):
        original = flat[index]
        flat[index] = original + step
        upper = fn()
        flat[index] = original - step
        lower = fn()
        flat[index] = original
        grad[index] = (upper - lower) / (2.0 * step)
    return grad.reshape(tensor.shape)


def relative_error(analytic, numeric):
    """Norm-based relative difference of two gradient arrays."""
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    scale = max(np.linalg.norm(analytic) + np.linalg.norm(numeric), 1e-12)
    return float(np.linalg.norm(analytic - numeric) / scale)
