# -*- coding: utf-8 -*-
"""
diffshape/errors
~~~~~~~~~~~~~~~~

Registry of the process exit codes used by the ``diffshape`` command line.
Every exception in :mod:`diffshape.exceptions` carries one of these codes.
"""
import enum


class ExitCodes(enum.IntEnum):
    """
    All exit codes the command line can return.
    """
    #: The command completed.
    SUCCESS = 0

    #: The configuration file or command line arguments were invalid.
    CONFIG_ERROR = 2

    #: A runtime or validation failure, e.g. a malformed checkpoint.
    RUNTIME_ERROR = 3


__all__ = ['ExitCodes']
