# -*- coding: utf-8 -*-
"""
diffshape/exceptions
~~~~~~~~~~~~~~~~~~~~

Exceptions for the diffshape package.
"""
from .errors import ExitCodes


class DiffShapeError(Exception):
    """
    The base class for all exceptions for the diffshape package.
    """
    #: The command line exit code that corresponds to this kind of error.
    exit_code = ExitCodes.RUNTIME_ERROR


class ScheduleError(DiffShapeError, ValueError):
    """
    A variance schedule was requested or loaded that violates
    ``0 < beta_1 < ... < beta_T < 1``.
    """
    pass


class TimeStepError(DiffShapeError, ValueError):
    """
    A diffusion operation was asked for a time-step outside ``1..T``.
    """
    def __init__(self, t, t_steps):
        #: The offending time-step.
        self.t = t

        #: The number of steps in the schedule in use.
        self.t_steps = t_steps

    def __str__(self):
        return "TimeStepError: t=%s outside 1..%d" % (self.t, self.t_steps)


class ShapeMismatchError(DiffShapeError, ValueError):
    """
    Two batches that must agree in shape do not, or a batch is not ``N x 2``.
    """
    pass


class NoiseContractError(DiffShapeError, ValueError):
    """
    A nonzero noise draw was supplied to the final (``t = 1``) reverse step,
    which must be deterministic.
    """
    pass


class ConstellationError(DiffShapeError, ValueError):
    """
    An unsupported modulation order was requested, or a symbol index lies
    outside ``1..M``.
    """
    pass


class DistributionError(DiffShapeError, ValueError):
    """
    A probability vector is negative, does not sum to one, or was built from
    an all-zero histogram.
    """
    pass


class CheckpointError(DiffShapeError):
    """
    A checkpoint payload could not be decoded, or decodes to a model whose
    parts disagree with each other.
    """
    pass


class CheckpointVersionError(CheckpointError):
    """
    A checkpoint was written with a format version this release cannot read.
    """
    def __init__(self, expected, found):
        #: The format version this release writes and reads.
        self.expected_version = expected

        #: The format version found in the payload.
        self.found_version = found

    def __str__(self):
        return "CheckpointVersionError: expected version %s, found %s" % (
            self.expected_version, self.found_version
        )


class InputFormatError(DiffShapeError):
    """
    A CSV input file contains a row that cannot be parsed.
    """
    def __init__(self, line_number, reason):
        #: The 1-based line number of the offending row.
        self.line_number = line_number

        #: What was wrong with the row.
        self.reason = reason

    def __str__(self):
        return "InputFormatError: line %d: %s" % (
            self.line_number, self.reason
        )


class ConfigurationError(DiffShapeError, ValueError):
    """
    An experiment configuration file or option is invalid.
    """
    #: Configuration problems map to their own exit code.
    exit_code = ExitCodes.CONFIG_ERROR
