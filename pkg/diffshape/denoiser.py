# -*- coding: utf-8 -*-
"""
diffshape/denoiser
~~~~~~~~~~~~~~~~~~

The noise-prediction network ``eps_theta(x_t, t)`` and its training loop.

The network is a small multilayer perceptron over 2-D points. Hidden layers
use softplus activations; each hidden activation is multiplied elementwise by
a learned embedding row for the current time-step, so one set of weights is
shared across all time-steps. The output layer is linear.
"""
import math

import numpy as np
from scipy.special import expit

from .config import TrainConfig
from .diffusion import diffuse_rows
from .exceptions import ConstellationError, ShapeMismatchError, TimeStepError
from .optim import Adam
from .utilities import RandomStreams, softplus, substream


class DenoiserParams(object):
    """
    Weights of the denoiser.

    :param layers: ``(weight, bias)`` pairs, hidden layers first and the
        output layer last. Weights are ``out x in``.
    :type layers: ``list`` of ``(numpy.ndarray, numpy.ndarray)``
    :param time_embed: One embedding row per time-step, ``T x width``.
    :type time_embed: ``numpy.ndarray``
    :param embed_layers: 0-based hidden layers whose activations are
        multiplied by the embedding. ``None`` means all of them.
    """
    def __init__(self, layers, time_embed, embed_layers=None):
        layers = [
            (np.array(w, dtype=np.float64), np.array(b, dtype=np.float64))
            for w, b in layers
        ]
        time_embed = np.array(time_embed, dtype=np.float64)
        if len(layers) < 2:
            raise ShapeMismatchError("need at least one hidden layer")

        fan_in = 2
        for k, (w, b) in enumerate(layers):
            if w.ndim != 2 or w.shape[1] != fan_in:
                raise ShapeMismatchError(
                    "layer %d weight has shape %s, expected (*, %d)" %
                    (k, w.shape, fan_in)
                )
            if b.shape != (w.shape[0],):
                raise ShapeMismatchError(
                    "layer %d bias has shape %s, expected (%d,)" %
                    (k, b.shape, w.shape[0])
                )
            fan_in = w.shape[0]
        if fan_in != 2:
            raise ShapeMismatchError("output layer must have width 2")

        hidden = len(layers) - 1
        if embed_layers is None:
            embed_layers = range(hidden)
        embed_layers = tuple(sorted(set(int(k) for k in embed_layers)))
        if time_embed.ndim != 2 or time_embed.shape[0] < 1:
            raise ShapeMismatchError("time_embed must be a T x width matrix")
        for k in embed_layers:
            if not 0 <= k < hidden:
                raise ShapeMismatchError(
                    "embedding position %d is not a hidden layer" % k
                )
            if layers[k][0].shape[0] != time_embed.shape[1]:
                raise ShapeMismatchError(
                    "hidden layer %d has width %d but time_embed has %d" %
                    (k, layers[k][0].shape[0], time_embed.shape[1])
                )

        for w, b in layers:
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise ShapeMismatchError("non-finite network parameter")
        if not np.all(np.isfinite(time_embed)):
            raise ShapeMismatchError("non-finite time embedding")

        #: ``(weight, bias)`` pairs, output layer last.
        self.layers = layers

        #: ``T x width`` time embedding matrix.
        self.time_embed = time_embed

        #: Hidden layers scaled by the time embedding.
        self.embed_layers = embed_layers

    @property
    def t_steps(self):
        """
        Number of time-steps this network was built for.
        """
        return self.time_embed.shape[0]

    def arrays(self):
        """
        Every parameter array, in a fixed order: ``w, b`` per layer and then
        the time embedding. The arrays are the live storage, not copies.
        """
        out = []
        for w, b in self.layers:
            out.extend((w, b))
        out.append(self.time_embed)
        return out

    def zeros_like(self):
        """
        A same-shaped set of parameters filled with zeros. Used to hold
        gradients.
        """
        return DenoiserParams(
            [(np.zeros_like(w), np.zeros_like(b)) for w, b in self.layers],
            np.zeros_like(self.time_embed),
            self.embed_layers,
        )

    def freeze(self):
        """
        Marks every array read-only and returns ``self``.
        """
        for a in self.arrays():
            a.flags.writeable = False
        return self

    def __eq__(self, other):
        if isinstance(other, DenoiserParams):
            if self.embed_layers != other.embed_layers:
                return False
            mine, theirs = self.arrays(), other.arrays()
            return len(mine) == len(theirs) and all(
                np.array_equal(a, b) for a, b in zip(mine, theirs)
            )
        else:
            return NotImplemented

    def __ne__(self, other):
        if isinstance(other, DenoiserParams):
            return not self == other
        else:
            return NotImplemented

    def __repr__(self):
        widths = [w.shape[0] for w, _ in self.layers[:-1]]
        return "DenoiserParams(hidden=%s, t_steps=%d, embed_layers=%s)" % (
            widths, self.t_steps, self.embed_layers
        )


def init_params(t_steps, rng, hidden_width=128, hidden_layers=3,
                embed_layers=None):
    """
    Fresh network weights. Weights and biases are drawn uniformly from
    ``(-1/sqrt(fan_in), 1/sqrt(fan_in))``; the time embedding starts at all
    ones so that the untrained network is a plain MLP.
    """
    layers = []
    fan_in = 2
    for width in [hidden_width] * hidden_layers + [2]:
        bound = 1.0 / math.sqrt(fan_in)
        w = rng.uniform(-bound, bound, size=(width, fan_in))
        b = rng.uniform(-bound, bound, size=width)
        layers.append((w, b))
        fan_in = width
    time_embed = np.ones((t_steps, hidden_width))
    return DenoiserParams(layers, time_embed, embed_layers)


def _as_input(params, xt, t):
    xt = np.asarray(xt, dtype=np.float64)
    if xt.ndim != 2 or xt.shape[1] != 2:
        raise ShapeMismatchError(
            "input must be an N x 2 batch, got shape %s" % (xt.shape,)
        )
    t = np.asarray(t)
    if t.ndim == 0:
        t = np.full(xt.shape[0], t)
    if t.shape != (xt.shape[0],):
        raise ShapeMismatchError(
            "t must be a scalar or one time-step per row, got shape %s" %
            (t.shape,)
        )
    if t.dtype.kind not in 'iu':
        raise TimeStepError(t[0] if t.size else t, params.t_steps)
    bad = (t < 1) | (t > params.t_steps)
    if np.any(bad):
        raise TimeStepError(int(t[bad][0]), params.t_steps)
    return xt, t.astype(np.intp) - 1


def _forward_cache(params, xt, t_idx):
    embed = params.time_embed[t_idx]
    h = xt
    cache = []
    for k, (w, b) in enumerate(params.layers[:-1]):
        z = h @ w.T + b
        a = softplus(z)
        cache.append((h, z, a))
        h = a * embed if k in params.embed_layers else a
    w, b = params.layers[-1]
    return h @ w.T + b, cache, h, embed


def forward(params, xt, t):
    """
    Evaluates ``eps_theta(x_t, t)``.

    :param params: The network.
    :type params: :class:`DenoiserParams
        <diffshape.denoiser.DenoiserParams>`
    :param xt: ``N x 2`` batch of noisy points.
    :param t: A time-step ``1..T``, or one time-step per row.
    :returns: ``N x 2`` noise estimate.
    """
    xt, t_idx = _as_input(params, xt, t)
    out, _, _, _ = _forward_cache(params, xt, t_idx)
    return out


def backward(params, xt, t, eps):
    """
    The denoising loss and its exact gradient with respect to every
    parameter.

    :returns: ``(loss, grads)``, where ``grads`` is a :class:`DenoiserParams
        <diffshape.denoiser.DenoiserParams>` holding the gradient of each
        array. Embedding rows of time-steps absent from ``t`` get zero
        gradient.
    """
    xt, t_idx = _as_input(params, xt, t)
    eps = np.asarray(eps, dtype=np.float64)
    if eps.shape != xt.shape:
        raise ShapeMismatchError(
            "eps has shape %s but xt has shape %s" % (eps.shape, xt.shape)
        )
    n = xt.shape[0]
    out, cache, h_last, embed = _forward_cache(params, xt, t_idx)
    resid = out - eps
    loss = float(np.mean(np.sum(resid * resid, axis=1)))

    grads = params.zeros_like()
    d_out = 2.0 * resid / n
    w_out, _ = params.layers[-1]
    g_w, g_b = grads.layers[-1]
    g_w[...] = d_out.T @ h_last
    g_b[...] = d_out.sum(axis=0)
    d_h = d_out @ w_out

    d_embed = np.zeros_like(embed)
    for k in reversed(range(len(cache))):
        h_in, z, a = cache[k]
        if k in params.embed_layers:
            d_embed += d_h * a
            d_a = d_h * embed
        else:
            d_a = d_h
        d_z = d_a * expit(z)
        g_w, g_b = grads.layers[k]
        g_w[...] = d_z.T @ h_in
        g_b[...] = d_z.sum(axis=0)
        d_h = d_z @ params.layers[k][0]

    np.add.at(grads.time_embed, t_idx, d_embed)
    return loss, grads


def steps_per_epoch(order, cfg):
    """
    Optimizer steps in one epoch: ``ceil(M * draws_per_point / batch_size)``.
    """
    return -(-order * cfg.draws_per_point // cfg.batch_size)


def train(constellation, sched, cfg=None, loss_log=None):
    """
    Trains a denoiser on a constellation.

    Every step draws a batch of ``x_0`` uniformly from the constellation
    points, a time-step per draw uniformly from ``1..T`` and standard normal
    noise, then takes one Adam step on the denoising loss. Training runs for
    ``cfg.epochs`` epochs and is fully determined by ``cfg.seed``.

    :param constellation: Points to learn.
    :type constellation: :class:`Constellation
        <diffshape.constellation.Constellation>`
    :param sched: The variance schedule.
    :param cfg: Training options; defaults to :class:`TrainConfig
        <diffshape.config.TrainConfig>` defaults.
    :param loss_log: If given, a list that receives the loss of every step.
    :rtype: :class:`DenoiserParams <diffshape.denoiser.DenoiserParams>`
    """
    cfg = cfg or TrainConfig()
    points = np.asarray(constellation.points, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] == 0:
        raise ConstellationError("cannot train on an empty constellation")

    rng = substream(cfg.seed, RandomStreams.TRAIN)
    params = init_params(sched.t_steps, rng, cfg.hidden_width,
                         cfg.hidden_layers, cfg.embed_layers)
    optimizer = Adam(params.arrays(), cfg.learning_rate, cfg.adam_beta1,
                     cfg.adam_beta2, cfg.adam_eps)
    n_steps = steps_per_epoch(points.shape[0], cfg)
    cfg.logger.debug(
        "Training %s for %d epochs of %d steps (M=%d, T=%d)",
        params, cfg.epochs, n_steps, points.shape[0], sched.t_steps
    )

    for epoch in range(1, cfg.epochs + 1):
        total = 0.0
        for _ in range(n_steps):
            x0 = points[rng.integers(0, points.shape[0], size=cfg.batch_size)]
            t = rng.integers(1, sched.t_steps + 1, size=cfg.batch_size)
            eps = rng.standard_normal((cfg.batch_size, 2))
            xt = diffuse_rows(x0, t, eps, sched)
            loss, grads = backward(params, xt, t, eps)
            optimizer.step(grads.arrays())
            total += loss
            if loss_log is not None:
                loss_log.append(loss)
        cfg.logger.debug("Epoch %d/%d mean loss %.6f",
                         epoch, cfg.epochs, total / n_steps)

    return params.freeze()
