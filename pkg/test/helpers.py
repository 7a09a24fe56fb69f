# -*- coding: utf-8 -*-
"""
helpers
~~~~~~~

This module contains helpers for the diffshape tests: independent oracles to
check the library against, and small fixtures for building inputs.
"""
import numpy as np

import diffshape.denoiser


def random_model(t_steps, seed=0, hidden_width=8, hidden_layers=3,
                 embed_layers=None):
    """
    A network with random weights and a random (not all-ones) time
    embedding.
    """
    rng = np.random.default_rng(seed)
    params = diffshape.denoiser.init_params(
        t_steps, rng, hidden_width, hidden_layers, embed_layers
    )
    embed = rng.uniform(0.5, 1.5, size=params.time_embed.shape)
    return diffshape.denoiser.DenoiserParams(
        params.layers, embed, params.embed_layers
    )


def plain_mlp(layers, x):
    """
    Evaluates a softplus MLP with a linear output layer, written out
    independently of the library.
    """
    h = np.asarray(x, dtype=np.float64)
    for w, b in layers[:-1]:
        z = h.dot(w.T) + b
        h = np.where(z > 0, z + np.log1p(np.exp(-np.abs(z))),
                     np.log1p(np.exp(-np.abs(z))))
    w, b = layers[-1]
    return h.dot(w.T) + b


def numerical_gradient(f, array, h=1e-5):
    """
    Central finite differences of the scalar function ``f()`` with respect to
    every entry of ``array``, which is perturbed in place and restored.
    """
    grad = np.zeros_like(array)
    for idx in np.ndindex(*array.shape):
        original = array[idx]
        array[idx] = original + h
        up = f()
        array[idx] = original - h
        down = f()
        array[idx] = original
        grad[idx] = (up - down) / (2.0 * h)
    return grad


def gaussian_posterior_1d(x0, xt, alpha_bar_prev, alpha):
    """
    ``q(x_{t-1} | x_t, x_0)`` for scalars, from the product of the prior
    ``N(sqrt(ab_prev) x0, 1 - ab_prev)`` and the likelihood
    ``N(x_t; sqrt(alpha) x_{t-1}, 1 - alpha)``.
    """
    prior_var = 1.0 - alpha_bar_prev
    lik_var = 1.0 - alpha
    precision = 1.0 / prior_var + alpha / lik_var
    var = 1.0 / precision
    mean = var * (
        np.sqrt(alpha_bar_prev) * x0 / prior_var +
        np.sqrt(alpha) * xt / lik_var
    )
    return mean, var


def oracle_eps(xt, x0, t, sched):
    """
    The noise a perfect denoiser would predict for ``x_t`` when ``x_0`` is
    known.
    """
    ab = sched.alpha_bar[t - 1]
    return (xt - np.sqrt(ab) * x0) / np.sqrt(1.0 - ab)


TINY_CONFIG = """\
# A fast experiment for the command line tests.
modulation_order = 4
t_steps = 5
beta_min = 0.001
beta_max = 0.2
seed = 7

train.epochs = 2
train.batch_size = 32
train.hidden_width = 8

shaping.n_samples = 200

sweep.snr_db = -5, 5
sweep.symbols_per_point = 500
sweep.channels = awgn, laplacian
sweep.schemes = ddpm, uniform, dnn

demapper.iterations = 20
demapper.hidden_width = 8
"""


def write_tiny_config(directory):
    """
    Writes :data:`TINY_CONFIG` into ``directory`` and returns its path.
    """
    path = directory.join('tiny.conf')
    path.write(TINY_CONFIG)
    return str(path)
