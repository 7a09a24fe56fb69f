# -*- coding: utf-8 -*-
"""
diffshape/baseline
~~~~~~~~~~~~~~~~~~

The reference systems the diffusion scheme is measured against: uniform
shaping, and a neural demapper classifying received samples directly.
"""
import math

import numpy as np
from scipy.special import log_softmax, softmax

from .channel import transmit
from .config import DemapperConfig
from .constellation import ShapingDistribution
from .exceptions import ShapeMismatchError
from .optim import Adam
from .receiver import hard_decisions
from .utilities import RandomStreams, as_batch, substream


def uniform_shaping(c):
    """
    The distribution with probability ``1/M`` on every point: the
    transmitter with shaping switched off.
    """
    return ShapingDistribution(np.full(c.order, 1.0 / c.order))


class DemapperParams(object):
    """
    Weights of the demapper MLP ``2 -> H -> H -> M``: ReLU hidden layers and
    a softmax head.

    :param layers: ``(weight, bias)`` pairs, weights ``out x in``.
    """
    def __init__(self, layers):
        layers = [
            (np.array(w, dtype=np.float64), np.array(b, dtype=np.float64))
            for w, b in layers
        ]
        fan_in = 2
        for k, (w, b) in enumerate(layers):
            if w.ndim != 2 or w.shape[1] != fan_in or (
                    b.shape != (w.shape[0],)):
                raise ShapeMismatchError(
                    "demapper layer %d has inconsistent shapes" % k
                )
            fan_in = w.shape[0]

        #: ``(weight, bias)`` pairs, output layer last.
        self.layers = layers

    @property
    def order(self):
        """
        Number of symbols the head classifies into.
        """
        return self.layers[-1][0].shape[0]

    def arrays(self):
        out = []
        for w, b in self.layers:
            out.extend((w, b))
        return out

    @classmethod
    def zeros(cls, order, hidden_width=64):
        """
        An all-zero demapper. Its posterior is uniform for every input.
        """
        return cls([
            (np.zeros((hidden_width, 2)), np.zeros(hidden_width)),
            (np.zeros((hidden_width, hidden_width)), np.zeros(hidden_width)),
            (np.zeros((order, hidden_width)), np.zeros(order)),
        ])


def _init_demapper(order, hidden_width, rng):
    layers = []
    fan_in = 2
    for width in (hidden_width, hidden_width, order):
        bound = 1.0 / math.sqrt(fan_in)
        layers.append((
            rng.uniform(-bound, bound, size=(width, fan_in)),
            rng.uniform(-bound, bound, size=width),
        ))
        fan_in = width
    return DemapperParams(layers)


def _logits(params, y):
    h = y
    cache = []
    for w, b in params.layers[:-1]:
        z = h @ w.T + b
        cache.append((h, z))
        h = np.maximum(z, 0.0)
    w, b = params.layers[-1]
    return h @ w.T + b, cache, h


def demapper_loss(params, y, indices):
    """
    Mean cross-entropy of the demapper on labelled samples, and its gradient
    as a list of arrays in :meth:`DemapperParams.arrays` order.
    """
    n = y.shape[0]
    logits, cache, h_last = _logits(params, y)
    log_p = log_softmax(logits, axis=1)
    rows = np.arange(n)
    loss = float(-np.mean(log_p[rows, indices - 1]))

    d_logits = np.exp(log_p)
    d_logits[rows, indices - 1] -= 1.0
    d_logits /= n

    grads = []
    w_out, _ = params.layers[-1]
    grads.append((d_logits.T @ h_last, d_logits.sum(axis=0)))
    d_h = d_logits @ w_out
    for k in reversed(range(len(cache))):
        h_in, z = cache[k]
        d_z = d_h * (z > 0.0)
        grads.append((d_z.T @ h_in, d_z.sum(axis=0)))
        d_h = d_z @ params.layers[k][0]
    flat = []
    for g_w, g_b in reversed(grads):
        flat.extend((g_w, g_b))
    return loss, flat


def train_dnn_demapper(c, channel_spec, cfg=None, loss_log=None):
    """
    Trains a demapper on uniformly transmitted symbols passed through
    ``channel_spec``.

    Each iteration draws ``cfg.batch_size`` symbols uniformly, sends them
    through the channel and takes one Adam step on the cross-entropy between
    the softmax head and the transmitted index. Draws come from the
    ``demapper`` stream of ``cfg.seed``, labelled by the channel, so a given
    operating point always trains the same demapper.

    :rtype: :class:`DemapperParams <diffshape.baseline.DemapperParams>`
    """
    cfg = cfg or DemapperConfig()
    rng = substream(cfg.seed, RandomStreams.DEMAPPER,
                    channel_spec.kind.value, channel_spec.snr_db)
    params = _init_demapper(c.order, cfg.hidden_width, rng)
    optimizer = Adam(params.arrays(), cfg.learning_rate)
    cfg.logger.debug("Training demapper for %r over %d iterations",
                     channel_spec, cfg.iterations)

    for it in range(1, cfg.iterations + 1):
        indices = rng.integers(1, c.order + 1, size=cfg.batch_size)
        y = transmit(c.points[indices - 1], channel_spec, rng)
        loss, grads = demapper_loss(params, y, indices)
        optimizer.step(grads)
        if loss_log is not None:
            loss_log.append(loss)
        if it % 1000 == 0:
            cfg.logger.debug("Demapper iteration %d loss %.6f", it, loss)
    return params


def demapper_posterior(params, y):
    """
    The softmax posterior ``p(s | y)``, an ``N x M`` array.
    """
    y = as_batch(y, 'y')
    logits, _, _ = _logits(params, y)
    return softmax(logits, axis=1)


def demap(params, y):
    """
    Hard decisions of the demapper: the argmax of the posterior, ties to the
    lowest symbol index.
    """
    return hard_decisions(demapper_posterior(params, y))
