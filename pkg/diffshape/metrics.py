# -*- coding: utf-8 -*-
"""
diffshape/metrics
~~~~~~~~~~~~~~~~~

Figures of merit for a link: plug-in mutual information, symbol error rate,
and the entropy and total-variation distance of shaped distributions.
"""
import math

import numpy as np
import scipy.stats

from .constellation import ShapingDistribution
from .exceptions import ConstellationError, DistributionError


def _index_pair(tx_idx, rx_idx, m=None):
    tx_idx = np.asarray(tx_idx)
    rx_idx = np.asarray(rx_idx)
    if tx_idx.ndim != 1 or tx_idx.shape != rx_idx.shape:
        raise ValueError(
            "index vectors must be 1-D and of equal length, got %s and %s" %
            (tx_idx.shape, rx_idx.shape)
        )
    if tx_idx.size < 1:
        raise ValueError("index vectors must not be empty")
    if m is not None:
        for name, idx in (('tx', tx_idx), ('rx', rx_idx)):
            if idx.dtype.kind not in 'iu':
                raise ConstellationError("%s indices must be integers" % name)
            if idx.min() < 1 or idx.max() > m:
                raise ConstellationError(
                    "%s index outside 1..%d" % (name, m)
                )
    return tx_idx, rx_idx


def _probs(dist):
    if isinstance(dist, ShapingDistribution):
        return dist.probs
    return ShapingDistribution(dist).probs


def mutual_information(tx_idx, rx_idx, m):
    """
    Plug-in estimate, in bits, of the mutual information between transmitted
    and decided symbol indices, computed from their empirical joint
    histogram with ``0 log 0 = 0``.

    :param m: The modulation order; indices must lie in ``1..m``.
    :returns: A value in ``[0, log2 m]``.
    """
    tx_idx, rx_idx = _index_pair(tx_idx, rx_idx, m)
    joint = np.bincount((tx_idx - 1) * m + (rx_idx - 1), minlength=m * m)
    p_joint = joint.reshape(m, m) / float(tx_idx.size)
    p_tx = p_joint.sum(axis=1)
    p_rx = p_joint.sum(axis=0)

    nz = p_joint > 0
    ratio = p_joint[nz] / np.outer(p_tx, p_rx)[nz]
    mi = float(np.sum(p_joint[nz] * np.log2(ratio)))
    return min(max(mi, 0.0), math.log2(m))


def symbol_error_rate(tx_idx, rx_idx):
    """
    The fraction of positions where the two index vectors differ.
    """
    tx_idx, rx_idx = _index_pair(tx_idx, rx_idx)
    return float(np.mean(tx_idx != rx_idx))


def entropy_bits(dist):
    """
    Shannon entropy of a distribution, in bits.

    :param dist: A :class:`ShapingDistribution
        <diffshape.constellation.ShapingDistribution>` or a probability
        vector.
    """
    return float(scipy.stats.entropy(_probs(dist), base=2))


def tv_distance(a, b):
    """
    Total-variation distance ``1/2 sum |a - b|`` between two distributions
    over the same constellation.
    """
    p, q = _probs(a), _probs(b)
    if p.shape != q.shape:
        raise DistributionError(
            "distributions over %d and %d symbols" % (p.size, q.size)
        )
    return float(0.5 * np.sum(np.abs(p - q)))
