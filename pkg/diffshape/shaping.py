# -*- coding: utf-8 -*-
"""
diffshape/shaping
~~~~~~~~~~~~~~~~~

SNR-adaptive probabilistic shaping at the transmitter.

Uniformly drawn constellation points are pushed through synthetic noise at
the channel's noise power, denoised by the full reverse diffusion, and
projected back onto the constellation. The histogram of the projected points
is the shaped distribution.
"""
import math

import numpy as np

from .config import DummyLogger, _IntegerConfigOption, _RealConfigOption
from .constellation import count, project, to_distribution
from .denoiser import forward
from .diffusion import SIGMA_BETA, reverse_step
from .exceptions import ShapeMismatchError
from .utilities import (
    DEFAULT_CHUNK_SIZE, RandomStreams, chunk_slices, substream
)


class ShapingRequest(object):
    """
    One shaping run.

    :param snr_db: The channel SNR ``Gamma`` in dB.
    :type snr_db: ``float``
    :param n_samples: Number of reverse-diffusion samples ``N_s``. Defaults to
        ``10000``.
    :type n_samples: ``int``
    :param transmit_power: Average transmit power ``P``. Defaults to ``1.0``.
    :type transmit_power: ``float``
    :param seed: Master seed; draws come from its ``shape`` sub-stream.
    :type seed: ``int``
    """
    n_samples = _IntegerConfigOption('n_samples', minimum=1)
    transmit_power = _RealConfigOption('transmit_power', lower=0.0)
    seed = _IntegerConfigOption('seed', minimum=0)

    def __init__(self, snr_db, n_samples=10000, transmit_power=1.0, seed=0):
        if isinstance(snr_db, bool) or not isinstance(snr_db, (int, float)):
            raise ValueError("snr_db must be a real number")
        if math.isnan(snr_db) or snr_db == -math.inf:
            raise ValueError("snr_db must not be NaN or -inf")
        self.snr_db = float(snr_db)
        self.n_samples = n_samples
        self.transmit_power = transmit_power
        self.seed = seed

    def __repr__(self):
        return "ShapingRequest(snr_db=%r, n_samples=%d, seed=%d)" % (
            self.snr_db, self.n_samples, self.seed
        )


def noise_power_from_snr(snr_db, p=1.0):
    """
    The noise variance ``delta^2 = P * 10^(-snr_db / 10)`` at which a link of
    transmit power ``P`` has the given SNR. An SNR of ``+inf`` gives zero.
    """
    if not p > 0:
        raise ValueError("transmit power must be positive, got %r" % (p,))
    return p * 10.0 ** (-snr_db / 10.0)


def run_reverse(model, sched, x_start, rng, sigma=SIGMA_BETA,
                trajectory=None, chunk_size=DEFAULT_CHUNK_SIZE,
                logger=None, t_start=None):
    """
    Runs the reverse diffusion from ``x_{t_start} = x_start`` down to
    ``x_0``.

    Fresh standard normal ``z`` is drawn at every step ``t > 1``; the last
    step is noiseless. The batch is processed in row chunks; the draws are
    taken for the whole batch at each step, so the result does not depend on
    ``chunk_size``.

    :param trajectory: Optional collection of time-steps. The batch *entering*
        each listed step (``x_t``) is recorded, and ``0`` records the final
        ``x_0``.
    :param t_start: The step to start from, ``0..T``. Defaults to ``T``;
        ``0`` returns ``x_start`` unchanged without drawing.
    :returns: ``(x0, snapshots)``; ``snapshots`` maps each requested
        time-step to a copy of the batch, and is empty without
        ``trajectory``.
    """
    if model.t_steps != sched.t_steps:
        raise ShapeMismatchError(
            "model was built for %d steps but the schedule has %d" %
            (model.t_steps, sched.t_steps)
        )
    if t_start is None:
        t_start = sched.t_steps
    if isinstance(t_start, bool) or not 0 <= t_start <= sched.t_steps:
        raise ValueError("t_start must lie in 0..%d, got %r" %
                         (sched.t_steps, t_start))
    logger = logger or DummyLogger(__name__)
    wanted = set(trajectory or ())
    snapshots = {}
    x = np.array(x_start, dtype=np.float64)
    n = x.shape[0]
    logger.debug("Reverse diffusion of %d rows over %d steps", n, t_start)

    for t in range(int(t_start), 0, -1):
        if t in wanted:
            snapshots[t] = x.copy()
        z = rng.standard_normal((n, 2)) if t > 1 else None
        for rows in chunk_slices(n, chunk_size):
            eps_hat = forward(model, x[rows], t)
            x[rows] = reverse_step(
                x[rows], eps_hat, None if z is None else z[rows], t, sched,
                sigma=sigma,
            )
    if 0 in wanted:
        snapshots[0] = x.copy()
    return x, snapshots


def shape(model, sched, c, req, sigma=SIGMA_BETA, return_trajectory=False,
          logger=None, chunk_size=DEFAULT_CHUNK_SIZE):
    """
    Produces the shaped distribution for the channel SNR in ``req``.

    :param model: The trained denoiser.
    :param sched: Its variance schedule.
    :param c: The constellation.
    :param req: The request.
    :type req: :class:`ShapingRequest <diffshape.shaping.ShapingRequest>`
    :param sigma: Reverse-step noise scale, ``'beta'`` or ``'beta_tilde'``.
    :param return_trajectory: When set, also return the intermediate batches
        at every time-step.
    :returns: A :class:`ShapingDistribution
        <diffshape.constellation.ShapingDistribution>`, or
        ``(distribution, snapshots)`` with ``return_trajectory``.
    """
    logger = logger or DummyLogger(__name__)
    rng = substream(req.seed, RandomStreams.SHAPE, req.snr_db)
    delta = math.sqrt(noise_power_from_snr(req.snr_db, req.transmit_power))
    logger.debug("Shaping %r: delta^2=%.6g, M=%d", req, delta ** 2, c.order)

    start = c.points[rng.integers(0, c.order, size=req.n_samples)]
    # Per-coordinate noise of variance delta^2 / 2: total noise power delta^2.
    noise = rng.standard_normal((req.n_samples, 2))
    x_start = start + (delta / math.sqrt(2.0)) * noise

    steps = range(sched.t_steps + 1) if return_trajectory else None
    x0, snapshots = run_reverse(model, sched, x_start, rng, sigma=sigma,
                                trajectory=steps, chunk_size=chunk_size,
                                logger=logger)
    _, indices = project(x0, c)
    dist = to_distribution(count(indices, c))
    if return_trajectory:
        return dist, snapshots
    return dist
