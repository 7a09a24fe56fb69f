# -*- coding: utf-8 -*-
"""
diffshape/receiver
~~~~~~~~~~~~~~~~~~

Symbol reconstruction at the receiver: the received batch is denoised by the
reverse diffusion, then projected onto the constellation.

When the channel noise power is known, the received samples are scaled onto
the forward marginal of the time-step that carries the same noise, and the
reverse pass starts there. Without it they are taken as ``x_T`` as they are.
"""
import math

import numpy as np

from .config import DummyLogger
from .constellation import project
from .diffusion import SIGMA_BETA, matching_step
from .shaping import run_reverse
from .utilities import DEFAULT_CHUNK_SIZE, as_batch


def entry_point(sched, y, noise_power=None):
    """
    Where the reverse pass over ``y`` starts: ``(x_start, t_start)``.

    :param noise_power: Total channel noise variance ``delta^2`` per 2-D
        sample, split evenly over I and Q. ``None`` starts from the raw
        samples at ``t = T``.
    """
    if noise_power is None:
        return y, sched.t_steps
    t_start = matching_step(sched, noise_power / 2.0)
    if t_start == 0:
        return y, 0
    return math.sqrt(sched.alpha_bar[t_start - 1]) * y, t_start


def reconstruct(model, sched, c, y, rng, sigma=SIGMA_BETA, trajectory=None,
                chunk_size=DEFAULT_CHUNK_SIZE, logger=None,
                noise_power=None):
    """
    Hard symbol decisions for a received batch.

    :param model: The trained denoiser.
    :param sched: Its variance schedule.
    :param c: The constellation.
    :param y: ``N x 2`` received samples.
    :param rng: The generator supplying the reverse-step noise.
    :type rng: ``numpy.random.Generator``
    :param trajectory: Optional time-steps whose intermediate batches should
        be returned as well. Only steps at or below the starting step are
        recorded.
    :param noise_power: The channel's total noise variance ``delta^2``. See
        :func:`entry_point <diffshape.receiver.entry_point>`.
    :returns: ``(points, indices)``, or ``(points, indices, snapshots)`` when
        ``trajectory`` is given.
    """
    logger = logger or DummyLogger(__name__)
    y = as_batch(y, 'y')
    x_start, t_start = entry_point(sched, y, noise_power)
    x0, snapshots = run_reverse(model, sched, x_start, rng, sigma=sigma,
                                trajectory=trajectory, chunk_size=chunk_size,
                                logger=logger, t_start=t_start)
    points, indices = project(x0, c)
    if trajectory is not None:
        return points, indices, snapshots
    return points, indices


def reconstruct_posterior(model, sched, c, y, passes, rng, sigma=SIGMA_BETA,
                          chunk_size=DEFAULT_CHUNK_SIZE, logger=None,
                          noise_power=None):
    """
    Soft output by repeated stochastic decoding: ``passes`` independent
    reverse passes over the same ``y``, each ending in a hard decision.

    Passes draw from ``rng`` one after the other, so the first pass sees
    exactly the draws :func:`reconstruct
    <diffshape.receiver.reconstruct>` would.

    :returns: ``N x M`` array whose row ``n`` is the fraction of passes that
        decided each symbol for sample ``n``.
    """
    if isinstance(passes, bool) or not isinstance(passes, int) or passes < 1:
        raise ValueError("passes must be a positive int, got %r" % (passes,))
    logger = logger or DummyLogger(__name__)
    y = as_batch(y, 'y')
    x_start, t_start = entry_point(sched, y, noise_power)
    votes = np.zeros((y.shape[0], c.order))
    rows = np.arange(y.shape[0])
    for k in range(passes):
        logger.debug("Posterior pass %d/%d", k + 1, passes)
        x0, _ = run_reverse(model, sched, x_start, rng, sigma=sigma,
                            chunk_size=chunk_size, logger=logger,
                            t_start=t_start)
        _, indices = project(x0, c)
        votes[rows, indices - 1] += 1
    return votes / passes


def hard_decisions(posterior):
    """
    The most voted symbol of each row of a posterior histogram; ties go to
    the lowest index.
    """
    return np.argmax(posterior, axis=1) + 1
