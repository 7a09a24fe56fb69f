# -*- coding: utf-8 -*-
"""
diffshape/diffusion
~~~~~~~~~~~~~~~~~~~

The forward and reverse diffusion processes over 2-D (I/Q) symbol batches.

Everything in this module is a pure function of its arguments: noise is always
passed in explicitly, and no function draws random numbers of its own.
Time-steps are 1-based, ``1 <= t <= T``, with ``alpha_bar_0 = 1`` implied.
"""
import numpy as np

from .exceptions import (
    ScheduleError, TimeStepError, NoiseContractError, ShapeMismatchError
)
from .utilities import as_batch, require_same_shape

#: Supported noise scales for :func:`reverse_step`.
SIGMA_BETA = 'beta'
SIGMA_BETA_TILDE = 'beta_tilde'


class VarianceSchedule(object):
    """
    A variance schedule ``0 < beta_1 < ... < beta_T < 1`` and its derived
    tables. Arrays are 0-indexed: ``beta[t - 1]`` holds ``beta_t``.

    :param beta: The per-step noise variances.
    :type beta: sequence of ``float``
    """
    def __init__(self, beta):
        beta = np.array(beta, dtype=np.float64)
        if beta.ndim != 1 or beta.size < 1:
            raise ScheduleError("beta must be a non-empty vector")
        if not np.all(np.isfinite(beta)):
            raise ScheduleError("beta contains non-finite entries")
        if not (beta[0] > 0.0 and beta[-1] < 1.0):
            raise ScheduleError("beta must lie strictly inside (0, 1)")
        if np.any(np.diff(beta) <= 0.0):
            raise ScheduleError("beta must be strictly increasing")

        alpha = 1.0 - beta
        alpha_bar = np.cumprod(alpha)
        alpha_bar_prev = np.concatenate(([1.0], alpha_bar[:-1]))

        #: Number of diffusion steps ``T``.
        self.t_steps = beta.size

        #: ``beta_t``.
        self.beta = beta

        #: ``alpha_t = 1 - beta_t``.
        self.alpha = alpha

        #: ``alpha_bar_t = prod_{i <= t} alpha_i``.
        self.alpha_bar = alpha_bar

        #: ``alpha_bar_{t-1}``, with ``alpha_bar_0 = 1``.
        self.alpha_bar_prev = alpha_bar_prev

        #: Posterior variance ``beta_tilde_t``.
        self.beta_tilde = (1.0 - alpha_bar_prev) / (1.0 - alpha_bar) * beta

        for table in (self.beta, self.alpha, self.alpha_bar,
                      self.alpha_bar_prev, self.beta_tilde):
            table.flags.writeable = False

    def check_t(self, t):
        """
        Validates a time-step and returns the 0-based table index for it.
        """
        if isinstance(t, (bool, np.bool_)) or not isinstance(
                t, (int, np.integer)):
            raise TimeStepError(t, self.t_steps)
        if not 1 <= t <= self.t_steps:
            raise TimeStepError(t, self.t_steps)
        return int(t) - 1

    def __eq__(self, other):
        if isinstance(other, VarianceSchedule):
            return np.array_equal(self.beta, other.beta)
        else:
            return NotImplemented

    def __ne__(self, other):
        if isinstance(other, VarianceSchedule):
            return not self == other
        else:
            return NotImplemented

    def __repr__(self):
        return "VarianceSchedule(t_steps=%d, beta_1=%r, beta_T=%r)" % (
            self.t_steps, float(self.beta[0]), float(self.beta[-1])
        )


def make_linear_schedule(t_steps=100, beta_min=1e-4, beta_max=0.02):
    """
    Builds a schedule whose ``beta_t`` rises linearly from ``beta_min`` at
    ``t = 1`` to ``beta_max`` at ``t = T``.

    A single-step schedule needs ``beta_min == beta_max``; longer schedules
    need ``beta_min < beta_max``.

    :rtype: :class:`VarianceSchedule <diffshape.diffusion.VarianceSchedule>`
    """
    if isinstance(t_steps, bool) or not isinstance(t_steps, int) or (
            t_steps < 1):
        raise ScheduleError("t_steps must be a positive int, got %r" %
                            (t_steps,))
    if not 0.0 < beta_min <= beta_max < 1.0:
        raise ScheduleError(
            "need 0 < beta_min <= beta_max < 1, got %r, %r" %
            (beta_min, beta_max)
        )
    if t_steps == 1:
        beta = np.array([beta_min], dtype=np.float64)
    else:
        beta = np.linspace(beta_min, beta_max, t_steps, dtype=np.float64)
    return VarianceSchedule(beta)


def _pair(a, b, a_name, b_name):
    a = as_batch(a, a_name)
    b = as_batch(b, b_name)
    require_same_shape(a, b, a_name, b_name)
    return a, b


def diffuse_to(x0, t, eps, sched):
    """
    Samples ``x_t`` given ``x_0`` in closed form:
    ``sqrt(alpha_bar_t) x_0 + sqrt(1 - alpha_bar_t) eps``.
    """
    i = sched.check_t(t)
    x0, eps = _pair(x0, eps, 'x0', 'eps')
    ab = sched.alpha_bar[i]
    return np.sqrt(ab) * x0 + np.sqrt(1.0 - ab) * eps


def forward_step(x_prev, t, eps, sched):
    """
    One noising step: ``sqrt(1 - beta_t) x_{t-1} + sqrt(beta_t) eps``.
    """
    i = sched.check_t(t)
    x_prev, eps = _pair(x_prev, eps, 'x_prev', 'eps')
    beta = sched.beta[i]
    return np.sqrt(1.0 - beta) * x_prev + np.sqrt(beta) * eps


def posterior_params(x0, xt, t, sched):
    """
    Parameters of ``q(x_{t-1} | x_t, x_0)``.

    :returns: ``(mean, var)`` where ``mean`` is an ``N x 2`` array and ``var``
        is the scalar ``beta_tilde_t`` shared by every coordinate.
    """
    i = sched.check_t(t)
    x0, xt = _pair(x0, xt, 'x0', 'xt')
    ab = sched.alpha_bar[i]
    ab_prev = sched.alpha_bar_prev[i]
    beta = sched.beta[i]
    coef_x0 = np.sqrt(ab_prev) * beta / (1.0 - ab)
    coef_xt = np.sqrt(sched.alpha[i]) * (1.0 - ab_prev) / (1.0 - ab)
    return coef_x0 * x0 + coef_xt * xt, float(sched.beta_tilde[i])


def predict_x0(xt, eps_hat, t, sched):
    """
    Inverts :func:`diffuse_to`: recovers ``x_0`` from ``x_t`` and a noise
    estimate.
    """
    i = sched.check_t(t)
    xt, eps_hat = _pair(xt, eps_hat, 'xt', 'eps_hat')
    ab = sched.alpha_bar[i]
    return (xt - np.sqrt(1.0 - ab) * eps_hat) / np.sqrt(ab)


def reverse_step(xt, eps_hat, z, t, sched, sigma=SIGMA_BETA):
    """
    One ancestral sampling step::

        x_{t-1} = (x_t - (1 - alpha_t) / sqrt(1 - alpha_bar_t) eps_hat)
                  / sqrt(alpha_t) + sigma_t z

    ``sigma_t`` is ``sqrt(beta_t)`` by default, or ``sqrt(beta_tilde_t)``
    with ``sigma='beta_tilde'``. The final step must be noiseless: ``z`` must
    be zero (or ``None``) when ``t == 1``.
    """
    i = sched.check_t(t)
    xt, eps_hat = _pair(xt, eps_hat, 'xt', 'eps_hat')
    if z is None:
        z = np.zeros_like(xt)
    else:
        z = as_batch(z, 'z')
        require_same_shape(xt, z, 'xt', 'z')
    if i == 0 and np.any(z != 0.0):
        raise NoiseContractError("z must be zero at t = 1")

    if sigma == SIGMA_BETA:
        scale = np.sqrt(sched.beta[i])
    elif sigma == SIGMA_BETA_TILDE:
        scale = np.sqrt(sched.beta_tilde[i])
    else:
        raise ValueError("unknown sigma %r" % (sigma,))

    alpha = sched.alpha[i]
    coef = (1.0 - alpha) / np.sqrt(1.0 - sched.alpha_bar[i])
    return (xt - coef * eps_hat) / np.sqrt(alpha) + scale * z


def loss_target(x0, t, eps, eps_hat):
    """
    The denoising objective: the batch mean of ``||eps - eps_hat||^2``.

    ``x0`` and ``t`` do not enter the value; ``x0`` is only checked to have
    the same shape as the noise.
    """
    eps = np.asarray(eps, dtype=np.float64)
    eps_hat = np.asarray(eps_hat, dtype=np.float64)
    require_same_shape(eps, eps_hat, 'eps', 'eps_hat')
    require_same_shape(np.asarray(x0), eps, 'x0', 'eps')
    if eps.ndim != 2 or eps.shape[0] < 1:
        raise ShapeMismatchError("eps must be an N x D array with N >= 1")
    return float(np.mean(np.sum((eps - eps_hat) ** 2, axis=1)))


def matching_step(sched, noise_var):
    """
    The time-step whose forward marginal best matches an observation
    ``y = x_0 + n`` with per-coordinate noise variance ``noise_var``.

    Scaling ``y`` by ``sqrt(alpha_bar_t)`` gives noise of variance
    ``alpha_bar_t * noise_var``, which equals the forward process noise
    ``1 - alpha_bar_t`` when ``(1 - alpha_bar_t) / alpha_bar_t`` equals
    ``noise_var``. Returns the ``t`` in ``0..T`` nearest to that, where ``0``
    means the observation is already clean. Noise beyond what the schedule
    reaches gives ``T``.
    """
    if not noise_var >= 0.0:
        raise ValueError("noise_var must be non-negative, got %r" %
                         (noise_var,))
    if not np.isfinite(noise_var):
        return sched.t_steps
    ratios = np.concatenate(
        ([0.0], (1.0 - sched.alpha_bar) / sched.alpha_bar)
    )
    return int(np.argmin(np.abs(ratios - noise_var)))


def diffuse_rows(x0, t, eps, sched):
    """
    Row-wise :func:`diffuse_to`: row ``n`` of ``x0`` is diffused to its own
    time-step ``t[n]``. Used by training, where each draw has its own ``t``.
    """
    x0, eps = _pair(x0, eps, 'x0', 'eps')
    t = np.asarray(t)
    if t.shape != (x0.shape[0],):
        raise ShapeMismatchError(
            "t must hold one time-step per row, got shape %s" % (t.shape,)
        )
    if t.size and (t.min() < 1 or t.max() > sched.t_steps):
        bad = t[(t < 1) | (t > sched.t_steps)][0]
        raise TimeStepError(int(bad), sched.t_steps)
    ab = sched.alpha_bar[t - 1][:, np.newaxis]
    return np.sqrt(ab) * x0 + np.sqrt(1.0 - ab) * eps
