# -*- coding: utf-8 -*-
"""
diffshape/utilities
~~~~~~~~~~~~~~~~~~~

Utility functions that do not belong in a separate module.
"""
import enum
import zlib

import numpy as np

from .exceptions import ShapeMismatchError

#: Number of rows evaluated at once by the reverse diffusion loops.
DEFAULT_CHUNK_SIZE = 8192


class RandomStreams(enum.IntEnum):
    """
    The named random sub-streams derived from an experiment's master seed.
    Each value is the first element of the stream's ``SeedSequence`` spawn
    key, so these values must never be renumbered.
    """
    TRAIN = 0
    SHAPE = 1
    CHANNEL = 2
    RECEIVER = 3
    DEMAPPER = 4
    SYMBOLS = 5


def _label_key(label):
    """
    Map an arbitrary point label (scheme name, SNR value...) to a stable
    32-bit integer.
    """
    return zlib.crc32(repr(label).encode('utf-8')) & 0xffffffff


def substream(seed, stream, *labels):
    """
    Returns an independent ``numpy.random.Generator`` for the named stream of
    a master seed. Extra ``labels`` identify one point of a sweep, so that the
    same point always sees the same draws however the sweep is ordered.

    :param seed: The master seed.
    :type seed: ``int``
    :param stream: Which sub-stream.
    :type stream: :class:`RandomStreams <diffshape.utilities.RandomStreams>`
    :param labels: Hashable identifiers of the sweep point.
    :rtype: ``numpy.random.Generator``
    """
    spawn_key = (int(stream),) + tuple(_label_key(x) for x in labels)
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=spawn_key)
    return np.random.Generator(np.random.PCG64(sequence))


def as_batch(points, name='batch'):
    """
    Validates a symbol batch: a finite ``N x 2`` float array with ``N >= 1``.
    Returns it as a float64 array (a copy only if conversion is needed).
    """
    batch = np.asarray(points, dtype=np.float64)
    if batch.ndim != 2 or batch.shape[1] != 2 or batch.shape[0] < 1:
        raise ShapeMismatchError(
            "%s must be an N x 2 array with N >= 1, got shape %s" %
            (name, batch.shape)
        )
    if not np.all(np.isfinite(batch)):
        raise ShapeMismatchError("%s contains non-finite entries" % name)
    return batch


def require_same_shape(a, b, a_name, b_name):
    """
    Raises :class:`ShapeMismatchError
    <diffshape.exceptions.ShapeMismatchError>` unless ``a`` and ``b`` have the
    same shape.
    """
    if a.shape != b.shape:
        raise ShapeMismatchError(
            "%s has shape %s but %s has shape %s" %
            (a_name, a.shape, b_name, b.shape)
        )


def softplus(z):
    """
    ``log(1 + exp(z))`` without overflow for large ``z``.
    """
    return np.logaddexp(0.0, z)


def chunk_slices(n, chunk_size=DEFAULT_CHUNK_SIZE):
    """
    Yields slices that cover ``range(n)`` in runs of at most ``chunk_size``.
    """
    for start in range(0, n, chunk_size):
        yield slice(start, min(start + chunk_size, n))
