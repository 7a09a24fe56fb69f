# -*- coding: utf-8 -*-
"""
diffshape/channel
~~~~~~~~~~~~~~~~~

Memoryless additive-noise channels.

Both channels add independent noise to each coordinate with variance
``delta^2 / 2``, where ``delta^2 = P * 10^(-snr_db / 10)``, so the total noise
power of a 2-D symbol is ``delta^2``. This is the same convention the shaping
transmitter assumes.
"""
import enum
import math

from .shaping import noise_power_from_snr
from .utilities import as_batch


class ChannelKind(enum.Enum):
    """
    The supported noise families.
    """
    #: Gaussian noise; the condition the denoiser is trained for.
    AWGN = 'awgn'

    #: Laplacian noise of the same variance; heavier tails.
    LAPLACIAN = 'laplacian'


class ChannelSpec(object):
    """
    A channel at one operating point.

    :param kind: The noise family, a :class:`ChannelKind
        <diffshape.channel.ChannelKind>` or its string value.
    :param snr_db: The SNR in dB. ``float('inf')`` disables the noise.
    :param transmit_power: Average transmit power ``P``. Defaults to ``1.0``.
    """
    def __init__(self, kind, snr_db, transmit_power=1.0):
        self.kind = ChannelKind(kind)
        if math.isnan(snr_db) or snr_db == -math.inf:
            raise ValueError("snr_db must not be NaN or -inf")
        if not transmit_power > 0:
            raise ValueError("transmit_power must be positive")
        self.snr_db = float(snr_db)
        self.transmit_power = float(transmit_power)

    @property
    def noise_power(self):
        """
        Total noise variance ``delta^2`` per 2-D symbol.
        """
        return noise_power_from_snr(self.snr_db, self.transmit_power)

    def __repr__(self):
        return "ChannelSpec(kind=%s, snr_db=%r, transmit_power=%r)" % (
            self.kind.value, self.snr_db, self.transmit_power
        )


def transmit(x, spec, rng):
    """
    Passes a symbol batch through the channel.

    :param x: ``N x 2`` transmitted symbols.
    :param spec: The channel.
    :type spec: :class:`ChannelSpec <diffshape.channel.ChannelSpec>`
    :param rng: Source of the noise.
    :type rng: ``numpy.random.Generator``
    :returns: ``N x 2`` received samples. With an infinite SNR this is an
        exact copy of ``x`` and ``rng`` is not used.
    """
    x = as_batch(x, 'x')
    if spec.snr_db == math.inf:
        return x.copy()
    per_coord_var = spec.noise_power / 2.0
    if spec.kind is ChannelKind.AWGN:
        noise = rng.normal(0.0, math.sqrt(per_coord_var), size=x.shape)
    else:
        # Laplace(0, b) has variance 2 b^2.
        noise = rng.laplace(0.0, math.sqrt(per_coord_var / 2.0), size=x.shape)
    return x + noise
