# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Version information for SpanGrid.

This file is imported by ``spangrid.__init__`` and parsed by
``setup.py``.
"""

from __future__ import absolute_import, print_function

__version__ = "0.3.1"
