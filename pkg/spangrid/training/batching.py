# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Epoch shuffling and background batch assembly."""

import logging
from queue import Empty, Queue
from threading import Event, Thread

import numpy as np

PREFETCH_DEPTH = 2
"""Batches assembled ahead of the training loop."""

DRAIN_INTERVAL = 0.05
"""Seconds between attempts to unblock a stopping worker."""

_DONE = object()


def epoch_order(size, seed, epoch):
    """Sentence order of one epoch, a function of ``(seed, epoch)`` only."""
    return np.random.default_rng([seed, epoch]).permutation(size)


def batch_slices(order, batch_size):
    """Split an index order into consecutive batches."""
    return [order[i : i + batch_size] for i in range(0, len(order), batch_size)]


class BatchPrefetcher(object):
    """Build batches on one background thread, handing them over in order.

    ``build`` turns a list of indices into an immutable batch; the bounded
    queue keeps at most ``depth`` batches waiting. Use it as a context
    manager so the worker stops when the consumer fails mid-epoch.
    """

    def __init__(self, index_batches, build, depth=PREFETCH_DEPTH):
        """Prepare without starting the worker."""
        self.index_batches = list(index_batches)
        self.build = build
        self.queue = Queue(maxsize=depth)
        self.stopped = Event()
        self.thread = None
        self.error = None

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()

    def _work(self):
        try:
            for indices in self.index_batches:
                if self.stopped.is_set():
                    break
                self.queue.put(self.build(indices))
        except Exception as e:
            logging.debug("Batch assembly failed: {}".format(e))
            self.error = e
        finally:
            self.queue.put(_DONE)

    def __iter__(self):
        """Yield batches in order; errors of the worker are re-raised here."""
        self.thread = Thread(target=self._work, name="spangrid-prefetch", daemon=True)
        self.thread.start()
        try:
            while True:
                batch = self.queue.get()
                if batch is _DONE:
                    break
                yield batch
        finally:
            self.close()
        if self.error is not None:
            raise self.error

    def close(self):
        """Stop the worker, dropping unread batches, and wait for it."""
        self.stopped.set()
        if self.thread is None:
            return
        while True:
            self.thread.join(DRAIN_INTERVAL)
            if not self.thread.is_alive():
                break
            while True:
                try:
                    self.queue.get_nowait()
                except Empty:
                    break
