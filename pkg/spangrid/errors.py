# -*- coding: utf-8 -*-
#
# This file is part of SpanGrid.
# Copyright (C) 2025, 2026 SpanGrid contributors.
#
# SpanGrid is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""SpanGrid errors."""


class SpanGridError(Exception):
    """Base class of every SpanGrid error."""


class SpanGridValidationError(SpanGridError):
    """Input didn't pass validation."""


class DimensionError(SpanGridValidationError):
    """Tensor shapes don't agree."""

    def __init__(self, message, *shapes):
        """Name every offending shape in the message."""
        if shapes:
            message = "{0} (shapes: {1})".format(
                message, ", ".join(str(tuple(shape)) for shape in shapes)
            )
        super(DimensionError, self).__init__(message)
        self.shapes = tuple(tuple(shape) for shape in shapes)


class ConfigurationError(SpanGridValidationError):
    """Model or training configuration is invalid."""


class ContractError(SpanGridError):
    """Operation was called outside of its contract."""


class GroupValidationError(SpanGridValidationError):
    """Word piece groups don't partition the pieces."""


class CorpusValidationError(SpanGridValidationError):
    """Corpus record didn't pass validation."""

    def __init__(self, message, line_number=None):
        """Prefix the message with the offending line number."""
        if line_number is not None:
            message = "line {0}: {1}".format(line_number, message)
        super(CorpusValidationError, self).__init__(message)
        self.line_number = line_number


class TargetValidationError(SpanGridValidationError):
    """Target grid is not symmetric."""


class GenerationError(SpanGridValidationError):
    """Synthetic corpus constraints can't be satisfied."""


class SplitError(SpanGridValidationError):
    """Document split couldn't be performed."""


class ScheduleError(SpanGridValidationError):
    """Learning rate schedule arguments are invalid."""


class TrainingError(SpanGridError):
    """Training couldn't be started."""


class CheckpointError(SpanGridError):
    """Checkpoint file is unreadable or damaged."""


class CheckpointVersionError(CheckpointError):
    """Checkpoint magic, version or configuration doesn't match."""
