# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Learning rate schedule and the AdamW optimizer."""

from collections import OrderedDict

import numpy as np

from spangrid.errors import CheckpointError, DimensionError, ScheduleError

OPTIMIZER_PREFIX = "optimizer."
"""Checkpoint record prefix of optimizer moments."""


def lr_schedule(step, total_steps, peak_lr, warmup_factor):
    """Linear warmup from 0 to ``peak_lr`` then linear decay to 0.

    The apex sits at ``warmup_factor * total_steps``.

    :raises ScheduleError: ``total_steps`` is not positive or ``step`` is
        outside ``[0, total_steps]``.
    """
    if total_steps <= 0:
        raise ScheduleError("total_steps must be positive, got {}".format(total_steps))
    if not 0 <= step <= total_steps:
        raise ScheduleError(
            "step {0} outside [0, {1}]".format(step, total_steps)
        )
    if not 0.0 <= warmup_factor < 1.0:
        raise ScheduleError("warmup_factor must lie in [0, 1)")
    warmup = warmup_factor * total_steps
    if step < warmup:
        return peak_lr * step / warmup
    return peak_lr * (total_steps - step) / (total_steps - warmup)


def update_learning_rate(update, total_updates, peak_lr, warmup_factor):
    """Rate of the ``update``-th (1-based) of ``total_updates`` optimizer steps.

    The schedule runs over ``total_updates + 1`` steps so neither the first
    nor the last update gets a zero rate.
    """
    return lr_schedule(update, total_updates + 1, peak_lr, warmup_factor)


class OptimizerState(object):
    """AdamW moments, step counter and constants."""

    def __init__(self, weight_decay=0.01, beta1=0.9, beta2=0.999, eps=1e-8):
        """Start at step 0 with no moments."""
        self.step = 0
        self.weight_decay = weight_decay
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.first_moments = OrderedDict()
        self.second_moments = OrderedDict()

    def header(self):
        """Serialisable constants and step counter."""
        return {
            "step": self.step,
            "weight_decay": self.weight_decay,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "eps": self.eps,
        }

    def arrays(self):
        """Moment arrays keyed for a checkpoint."""
        arrays = OrderedDict()
        for name, moment in self.first_moments.items():
            arrays["{}m.{}".format(OPTIMIZER_PREFIX, name)] = moment.copy()
        for name, moment in self.second_moments.items():
            arrays["{}v.{}".format(OPTIMIZER_PREFIX, name)] = moment.copy()
        return arrays

    @classmethod
    def restore(cls, header, arrays):
        """Rebuild from checkpoint contents.

        :raises CheckpointError: moment records are missing.
        """
        state = cls(
            weight_decay=header["weight_decay"],
            beta1=header["beta1"],
            beta2=header["beta2"],
            eps=header["eps"],
        )
        state.step = int(header["step"])
        for key, array in arrays.items():
            if not key.startswith(OPTIMIZER_PREFIX):
                continue
            kind, name = key[len(OPTIMIZER_PREFIX) :].split(".", 1)
            target = state.first_moments if kind == "m" else state.second_moments
            target[name] = array.copy()
        if set(state.first_moments) != set(state.second_moments):
            raise CheckpointError("Checkpoint optimizer moments are incomplete.")
        return state


def global_grad_norm(params):
    """L2 norm over every parameter gradient."""
    total = 0.0
    for _, tensor in params.items():
        if tensor.grad is not None:
            total += float(np.sum(np.square(tensor.grad, dtype=np.float64)))
    return float(np.sqrt(total))


def clip_grad_norm(params, max_norm):
    """Scale gradients so their global norm is at most ``max_norm``.

    :return: The norm before clipping.
    """
    norm = global_grad_norm(params)
    if max_norm > 0 and norm > max_norm:
        factor = max_norm / norm
        for _, tensor in params.items():
            if tensor.grad is not None:
                tensor.grad *= tensor.grad.dtype.type(factor)
    return norm


def adamw_step(params, state, lr):
    """Apply one decoupled-weight-decay Adam update in place.

    ``p <- p * (1 - lr * wd) - lr * m_hat / (sqrt(v_hat) + eps)`` with bias
    corrected moments; a missing gradient counts as zero.

    :raises DimensionError: a gradient or moment doesn't match its parameter.
    """
    state.step += 1
    correction1 = 1.0 - state.beta1 ** state.step
    correction2 = 1.0 - state.beta2 ** state.step
    for name, tensor in params.items():
        values = tensor.values
        grad = tensor.grad if tensor.grad is not None else np.zeros_like(values)
        if grad.shape != values.shape:
            raise DimensionError(
                "Gradient of {} doesn't match its parameter".format(name),
                grad.shape,
                values.shape,
            )
        first = state.first_moments.setdefault(name, np.zeros_like(values))
        second = state.second_moments.setdefault(name, np.zeros_like(values))
        if first.shape != values.shape or second.shape != values.shape:
            raise DimensionError(
                "Optimizer moments of {} don't match".format(name),
                first.shape,
                values.shape,
            )
        first *= state.beta1
        first += (1.0 - state.beta1) * grad
        second *= state.beta2
        second += (1.0 - state.beta2) * grad * grad
        update = (first / correction1) / (np.sqrt(second / correction2) + state.eps)
        values *= 1.0 - lr * state.weight_decay
        values -= (lr * update).astype(values.dtype, copy=False)
