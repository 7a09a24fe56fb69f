# -*- coding: utf-8 -*-
"""
diffshape/experiment
~~~~~~~~~~~~~~~~~~~~

Orchestration of experiments: training a model from an experiment
configuration, evaluating single operating points and whole SNR sweeps, and
reading and writing the CSV files that record them.

Every CSV file written here starts with a comment line carrying the digest of
the configuration and the master seed, followed by a header row.
"""
import collections
import csv
import math

import numpy as np

from .baseline import demap, train_dnn_demapper, uniform_shaping
from .channel import ChannelKind, ChannelSpec, transmit
from .constellation import sample_symbols
from .denoiser import train
from .diffusion import make_linear_schedule
from .exceptions import ConfigurationError, InputFormatError
from .metrics import entropy_bits, mutual_information, symbol_error_rate
from .receiver import reconstruct
from .shaping import ShapingRequest, shape
from .utilities import RandomStreams, substream

#: The transmit/receive schemes a sweep can compare.
SCHEME_DDPM = 'ddpm'
SCHEME_UNIFORM = 'uniform'
SCHEME_DNN = 'dnn'

#: Column order of sweep result files.
RESULT_FIELDS = (
    'scheme', 'channel', 'snr_db', 'mi_bits', 'ser', 'entropy_tx', 'seed'
)

#: One evaluated operating point.
PointResult = collections.namedtuple('PointResult', RESULT_FIELDS)


def build_schedule(config):
    """
    The variance schedule an experiment configuration describes.
    """
    return make_linear_schedule(
        config['t_steps'], config['beta_min'], config['beta_max']
    )


def train_model(config, constellation, loss_log=None):
    """
    Trains the denoiser of an experiment.

    :returns: ``(params, sched, meta)``, ready for :func:`save_checkpoint
        <diffshape.checkpoint.save_checkpoint>`.
    """
    sched = build_schedule(config)
    train_cfg = config.train_config()
    config.logger.info("Training %d-QAM denoiser, seed %d",
                       constellation.order, config['seed'])
    params = train(constellation, sched, train_cfg, loss_log=loss_log)
    meta = {
        'modulation_order': constellation.order,
        'seed': config['seed'],
        'config_sha256': config.digest(),
        'train': train_cfg.as_dict(),
    }
    return params, sched, meta


class _DemapperCache(object):
    """
    Trains each demapper a sweep needs once, keyed by the channel it is
    trained on and the SNR.
    """
    def __init__(self, config, constellation):
        self.config = config
        self.constellation = constellation
        self._trained = {}

    def get(self, channel, snr_db):
        if not self.config['sweep.dnn_retrain_on_channel']:
            channel = ChannelKind.AWGN.value
        key = (channel, snr_db)
        if key not in self._trained:
            spec = ChannelSpec(channel, snr_db,
                               self.config['shaping.transmit_power'])
            self._trained[key] = train_dnn_demapper(
                self.constellation, spec, self.config.demapper_config()
            )
        return self._trained[key]


def run_point(config, model, sched, constellation, scheme, channel, snr_db,
              demappers=None):
    """
    Evaluates one ``(scheme, channel, snr_db)`` operating point.

    ``sweep.symbols_per_point`` symbols are drawn from the scheme's transmit
    distribution, sent through the channel, and decided at the receiver. The
    ``ddpm`` scheme shapes with the diffusion model; ``uniform`` and ``dnn``
    transmit uniformly. ``ddpm`` and ``uniform`` decide with the diffusion
    receiver; ``dnn`` uses a neural demapper trained at this SNR.

    :rtype: :class:`PointResult <diffshape.experiment.PointResult>`
    """
    seed = config['seed']
    power = config['shaping.transmit_power']
    labels = (scheme, channel, float(snr_db))
    config.logger.info("Evaluating %s over %s at %s dB", *labels)

    if scheme == SCHEME_DDPM:
        request = ShapingRequest(snr_db, config['shaping.n_samples'], power,
                                 seed)
        dist = shape(model, sched, constellation, request,
                     logger=config.logger)
    elif scheme in (SCHEME_UNIFORM, SCHEME_DNN):
        dist = uniform_shaping(constellation)
    else:
        raise ConfigurationError("Unknown scheme %r" % (scheme,))

    x, tx_idx = sample_symbols(
        dist, constellation, config['sweep.symbols_per_point'],
        substream(seed, RandomStreams.SYMBOLS, *labels)
    )
    spec = ChannelSpec(channel, snr_db, power)
    y = transmit(x, spec, substream(seed, RandomStreams.CHANNEL, *labels))

    if scheme == SCHEME_DNN:
        demappers = demappers or _DemapperCache(config, constellation)
        rx_idx = demap(demappers.get(channel, snr_db), y)
    else:
        _, rx_idx = reconstruct(
            model, sched, constellation, y,
            substream(seed, RandomStreams.RECEIVER, *labels),
            logger=config.logger,
            noise_power=spec.noise_power,
        )

    result = PointResult(
        scheme=scheme,
        channel=channel,
        snr_db=float(snr_db),
        mi_bits=mutual_information(tx_idx, rx_idx, constellation.order),
        ser=symbol_error_rate(tx_idx, rx_idx),
        entropy_tx=entropy_bits(dist),
        seed=seed,
    )
    config.logger.info("Result %s", result)
    return result


def mi_ratio(results, numerator, denominator, channel, snr_db):
    """
    The ratio of the mutual information of two schemes at one operating
    point, or ``None`` if either is missing or the denominator is zero.
    """
    mi = {
        r.scheme: r.mi_bits for r in results
        if r.channel == channel and r.snr_db == snr_db
    }
    if numerator not in mi or not mi.get(denominator):
        return None
    return mi[numerator] / mi[denominator]


def run_sweep(config, model, sched, constellation):
    """
    Evaluates every ``(scheme, channel, snr_db)`` combination of the
    configuration.

    Points are evaluated one after another; each draws from sub-streams
    labelled by its own coordinates, so results do not depend on the order.

    :returns: ``list`` of :class:`PointResult
        <diffshape.experiment.PointResult>`, sorted by scheme, channel and
        SNR.
    """
    demappers = _DemapperCache(config, constellation)
    results = [
        run_point(config, model, sched, constellation, scheme, channel, snr,
                  demappers)
        for scheme in config['sweep.schemes']
        for channel in config['sweep.channels']
        for snr in config['sweep.snr_db']
    ]
    results.sort(key=lambda r: (r.scheme, r.channel, r.snr_db))

    for channel in config['sweep.channels']:
        ratio = mi_ratio(results, SCHEME_DDPM, SCHEME_DNN, channel, 0.0)
        if ratio is not None:
            config.logger.info(
                "DDPM/DNN mutual information ratio at 0 dB over %s: %.3f",
                channel, ratio
            )
    return results


def _comment(digest, seed):
    return '# config_sha256=%s seed=%s\n' % (digest, seed)


def _write_csv(path, digest, seed, header, rows):
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(_comment(digest, seed))
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)


def write_results_csv(path, results, digest, seed):
    """
    Writes sweep results with the columns of :data:`RESULT_FIELDS
    <diffshape.experiment.RESULT_FIELDS>`.
    """
    _write_csv(path, digest, seed, RESULT_FIELDS, results)


def write_distribution_csv(path, constellation, dist, digest, seed):
    """
    Writes a shaped distribution as ``symbol_index, i, q, probability``
    rows.
    """
    rows = [
        (s, float(p[0]), float(p[1]), float(prob))
        for s, p, prob in zip(constellation.labels, constellation.points,
                              dist.probs)
    ]
    _write_csv(path, digest, seed, ('symbol_index', 'i', 'q', 'probability'),
               rows)


def write_training_log(path, losses, digest, seed):
    """
    Writes the per-step training loss as ``step, loss`` rows.
    """
    rows = ((step, loss) for step, loss in enumerate(losses, start=1))
    _write_csv(path, digest, seed, ('step', 'loss'), rows)


def write_reconstruction_csv(path, y, indices, digest, seed, posterior=None):
    """
    Writes receiver decisions as ``i, q, symbol_index`` rows. With a
    ``posterior`` histogram, its columns ``p_1 .. p_M`` follow.
    """
    header = ['i', 'q', 'symbol_index']
    if posterior is not None:
        header += ['p_%d' % s for s in range(1, posterior.shape[1] + 1)]
    rows = []
    for n, (point, s) in enumerate(zip(y, indices)):
        row = [float(point[0]), float(point[1]), int(s)]
        if posterior is not None:
            row.extend(float(p) for p in posterior[n])
        rows.append(row)
    _write_csv(path, digest, seed, header, rows)


def read_samples_csv(path):
    """
    Reads received samples from a CSV file of ``i, q`` rows.

    Blank lines and lines starting with ``#`` are skipped, as is an ``i,q``
    header. Extra columns are ignored.

    :returns: An ``N x 2`` array.
    :raises InputFormatError: On the first row that is not two finite
        numbers, naming its line.
    """
    samples = []
    with open(path, 'r', encoding='utf-8', newline='') as f:
        for line_number, row in enumerate(csv.reader(f), start=1):
            if not row or not ''.join(row).strip():
                continue
            if row[0].lstrip().startswith('#'):
                continue
            if not samples and [c.strip() for c in row[:2]] == ['i', 'q']:
                continue
            if len(row) < 2:
                raise InputFormatError(line_number, "expected two columns")
            try:
                i, q = float(row[0]), float(row[1])
            except ValueError:
                raise InputFormatError(
                    line_number, "not a number: %r" % ','.join(row)
                )
            if not (math.isfinite(i) and math.isfinite(q)):
                raise InputFormatError(line_number, "non-finite sample")
            samples.append((i, q))
    if not samples:
        raise InputFormatError(0, "no samples found")
    return np.array(samples, dtype=np.float64)


def read_comment(path):
    """
    The ``key=value`` pairs of a result file's leading comment line.
    """
    with open(path, 'r', encoding='utf-8') as f:
        first = f.readline()
    if not first.startswith('#'):
        return {}
    pairs = (item.partition('=') for item in first[1:].split())
    return {key: value for key, _, value in pairs}
