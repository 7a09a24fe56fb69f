# -*- coding: utf-8 -*-
"""
diffshape/constellation
~~~~~~~~~~~~~~~~~~~~~~~

Square QAM geometries and the probability vectors placed over them.

Symbol indices are 1-based everywhere in this module's public API. Points are
ordered row-major over the ascending ``(I, Q)`` grid: index 1 is the
bottom-left point, index ``sqrt(M)`` the top-left one.
"""
import math

import numpy as np

from .exceptions import ConstellationError, DistributionError
from .utilities import DEFAULT_CHUNK_SIZE, as_batch, chunk_slices

#: Modulation orders :func:`make_qam` can build.
SUPPORTED_ORDERS = (4, 16, 64, 256)


def _gray(n):
    return n ^ (n >> 1)


class Constellation(object):
    """
    An ordered set of ``M`` distinct 2-D points with unit average power.

    Instances are immutable; build them with :func:`make_qam
    <diffshape.constellation.make_qam>`.
    """
    def __init__(self, order, points, gray_labels=None):
        points = np.array(points, dtype=np.float64)
        if points.shape != (order, 2):
            raise ConstellationError(
                "expected %d points, got an array of shape %s" %
                (order, points.shape)
            )
        points.flags.writeable = False

        #: The modulation order ``M``.
        self.order = order

        #: ``M x 2`` array; row ``s - 1`` is the point of symbol ``s``.
        self.points = points

        #: The symbol indices, ``1..M``.
        self.labels = np.arange(1, order + 1)
        self.labels.flags.writeable = False

        #: Gray-coded bit label of every point, as an integer in
        #: ``0..M-1``. Neighbouring grid points differ in exactly one bit.
        self.gray_labels = gray_labels

    @property
    def bits_per_symbol(self):
        return int(math.log2(self.order))

    def corner_indices(self):
        """
        The symbol indices of the points with the largest energy.
        """
        energy = np.sum(self.points ** 2, axis=1)
        return self.labels[np.isclose(energy, energy.max())]

    def check_indices(self, indices):
        """
        Validates a vector of symbol indices and returns it as an integer
        array.
        """
        indices = np.asarray(indices)
        if indices.ndim != 1:
            raise ConstellationError("indices must be a vector")
        if indices.size == 0:
            return indices.astype(np.intp)
        if indices.dtype.kind not in 'iu':
            raise ConstellationError("indices must be integers")
        if indices.min() < 1 or indices.max() > self.order:
            bad = indices[(indices < 1) | (indices > self.order)][0]
            raise ConstellationError(
                "symbol index %d outside 1..%d" % (bad, self.order)
            )
        return indices.astype(np.intp)

    def __eq__(self, other):
        if isinstance(other, Constellation):
            return np.array_equal(self.points, other.points)
        else:
            return NotImplemented

    def __ne__(self, other):
        if isinstance(other, Constellation):
            return not self == other
        else:
            return NotImplemented

    def __repr__(self):
        return "Constellation(order=%d)" % self.order


class ShapingDistribution(object):
    """
    A probability vector over the ``M`` points of a constellation.

    :param probs: Non-negative values summing to one.
    :raises DistributionError: If they are not.
    """
    #: Allowed deviation of ``sum(probs)`` from one.
    TOLERANCE = 1e-12

    def __init__(self, probs):
        probs = np.array(probs, dtype=np.float64)
        if probs.ndim != 1 or probs.size < 1:
            raise DistributionError("probs must be a non-empty vector")
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise DistributionError("probs must be finite and non-negative")
        total = probs.sum()
        if abs(total - 1.0) > self.TOLERANCE:
            raise DistributionError("probs sum to %r, not 1" % total)
        probs.flags.writeable = False
        self.probs = probs

    @property
    def order(self):
        return self.probs.size

    def __eq__(self, other):
        if isinstance(other, ShapingDistribution):
            return np.array_equal(self.probs, other.probs)
        else:
            return NotImplemented

    def __ne__(self, other):
        if isinstance(other, ShapingDistribution):
            return not self == other
        else:
            return NotImplemented

    def __repr__(self):
        return "ShapingDistribution(%s)" % np.array2string(
            self.probs, precision=4
        )


def make_qam(order):
    """
    Builds a square ``order``-QAM constellation on the grid
    ``{+-1, +-3, ...}^2``, scaled to unit average power.

    :param order: One of :data:`SUPPORTED_ORDERS
        <diffshape.constellation.SUPPORTED_ORDERS>`.
    :rtype: :class:`Constellation <diffshape.constellation.Constellation>`
    """
    if isinstance(order, bool) or order not in SUPPORTED_ORDERS:
        raise ConstellationError(
            "unsupported QAM order %r; expected one of %s" %
            (order, ', '.join(str(o) for o in SUPPORTED_ORDERS))
        )
    order = int(order)
    side = math.isqrt(order)
    levels = 2.0 * np.arange(side) - (side - 1)
    i_grid, q_grid = np.meshgrid(levels, levels, indexing='ij')
    points = np.stack((i_grid.ravel(), q_grid.ravel()), axis=1)
    # Average energy of the unscaled square grid is 2(M - 1)/3.
    points /= math.sqrt(2.0 * (order - 1) / 3.0)

    rows, cols = np.divmod(np.arange(order), side)
    half_bits = int(math.log2(side))
    gray = np.array([
        (_gray(r) << half_bits) | _gray(c) for r, c in zip(rows, cols)
    ])
    gray.flags.writeable = False
    return Constellation(order, points, gray)


def project(batch, c, chunk_size=DEFAULT_CHUNK_SIZE):
    """
    Maps every point of ``batch`` to its Euclidean-nearest constellation
    point. Ties go to the lowest symbol index.

    :returns: ``(projected, indices)``: an ``N x 2`` array of constellation
        points and the 1-based index of each.
    """
    batch = as_batch(batch)
    indices = np.empty(batch.shape[0], dtype=np.intp)
    for rows in chunk_slices(batch.shape[0], chunk_size):
        diff = batch[rows, np.newaxis, :] - c.points[np.newaxis, :, :]
        distance = np.sum(diff * diff, axis=2)
        # argmin returns the first minimum, which is the lowest index.
        indices[rows] = np.argmin(distance, axis=1)
    return c.points[indices], indices + 1


def count(indices, c):
    """
    Occurrences of each symbol index in ``indices``, as a length ``M``
    vector.
    """
    indices = c.check_indices(indices)
    return np.bincount(indices - 1, minlength=c.order)


def to_distribution(counts):
    """
    Normalizes a histogram into a :class:`ShapingDistribution
    <diffshape.constellation.ShapingDistribution>`.
    """
    counts = np.asarray(counts, dtype=np.float64)
    if counts.ndim != 1 or np.any(counts < 0):
        raise DistributionError("counts must be a non-negative vector")
    total = counts.sum()
    if not total > 0:
        raise DistributionError("cannot normalize an all-zero histogram")
    return ShapingDistribution(counts / total)


def sample_symbols(dist, c, n, rng):
    """
    Draws ``n`` i.i.d. symbols from ``dist``.

    :returns: ``(points, indices)``.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DistributionError("n must be a positive int, got %r" % (n,))
    if dist.order != c.order:
        raise DistributionError(
            "distribution over %d symbols used with a %d-point "
            "constellation" % (dist.order, c.order)
        )
    indices = rng.choice(c.order, size=int(n), p=dist.probs) + 1
    return c.points[indices - 1], indices
