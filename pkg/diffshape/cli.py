# -*- coding: utf-8 -*-
"""
diffshape/cli
~~~~~~~~~~~~~

The ``diffshape`` command line: ``train``, ``shape``, ``simulate``,
``sweep`` and ``reconstruct`` subcommands.

Exit status is ``0`` on success, ``2`` for configuration and usage errors and
``3`` for any other failure.
"""
import argparse
import logging
import os
import sys

from . import __version__
from .checkpoint import load_checkpoint, save_checkpoint
from .config import ExperimentConfig, load_config
from .constellation import make_qam
from .diffusion import SIGMA_BETA, SIGMA_BETA_TILDE
from .errors import ExitCodes
from .exceptions import ConfigurationError, DiffShapeError
from .experiment import (
    read_samples_csv, run_point, run_sweep, train_model,
    write_distribution_csv, write_reconstruction_csv, write_results_csv,
    write_training_log,
)
from .metrics import entropy_bits
from .receiver import hard_decisions, reconstruct, reconstruct_posterior
from .shaping import ShapingRequest, noise_power_from_snr, shape
from .svg import mi_chart
from .utilities import RandomStreams, substream

#: Environment variable naming the default output directory.
OUTPUT_DIR_ENV = 'DIFFSHAPE_OUTPUT_DIR'

log = logging.getLogger('diffshape')


def _output_dir(args, config=None):
    """
    ``--out`` wins, then the environment, then the configuration.
    """
    out = args.out or os.environ.get(OUTPUT_DIR_ENV)
    if not out:
        out = config['output_dir'] if config is not None else '.'
    os.makedirs(out, exist_ok=True)
    return out


def _load_experiment(args):
    config = load_config(args.config, logger=log)
    if getattr(args, 'seed', None) is not None:
        config = config.with_overrides(seed=args.seed)
    return config


def _load_model(path):
    with open(path, 'rb') as f:
        return load_checkpoint(f.read())


def _model_config(args, meta):
    """
    The experiment configuration for a command that starts from a model:
    ``--config`` if given, else defaults for the model's modulation order.
    """
    order = meta['modulation_order']
    if args.config:
        config = load_config(args.config, logger=log)
        if config['modulation_order'] != order:
            raise ConfigurationError(
                "config is for %d-QAM but the model is %d-QAM" %
                (config['modulation_order'], order)
            )
    else:
        config = ExperimentConfig(
            {'modulation_order': order, 'sweep.snr_db': (0.0,)}, logger=log
        )
    if args.seed is not None:
        config = config.with_overrides(seed=args.seed)
    return config


def cmd_train(args):
    config = _load_experiment(args)
    constellation = make_qam(config['modulation_order'])
    losses = []
    params, sched, meta = train_model(config, constellation, losses)
    out = _output_dir(args, config)

    model_path = os.path.join(out, 'model.json')
    with open(model_path, 'wb') as f:
        f.write(save_checkpoint(params, sched, meta))
    log_path = os.path.join(out, 'training_log.csv')
    write_training_log(log_path, losses, config.digest(), config['seed'])
    print("wrote %s and %s" % (model_path, log_path))


def cmd_shape(args):
    params, sched, meta = _load_model(args.model)
    constellation = make_qam(meta['modulation_order'])
    seed = args.seed if args.seed is not None else meta.get('seed', 0)
    request = ShapingRequest(args.snr_db, args.n_samples,
                             args.transmit_power, seed)
    dist = shape(params, sched, constellation, request, sigma=args.sigma,
                 logger=log)

    out = _output_dir(args)
    path = os.path.join(out, 'distribution_%gdB.csv' % args.snr_db)
    write_distribution_csv(path, constellation, dist,
                           meta.get('config_sha256', ''), seed)
    print("entropy_bits=%.6f" % entropy_bits(dist))
    print("wrote %s" % path)


def cmd_simulate(args):
    params, sched, meta = _load_model(args.model)
    config = _model_config(args, meta)
    if args.symbols is not None:
        config = config.with_overrides(sweep__symbols_per_point=args.symbols)
    constellation = make_qam(meta['modulation_order'])
    result = run_point(config, params, sched, constellation, args.scheme,
                       args.channel, args.snr_db)

    out = _output_dir(args, config)
    path = os.path.join(out, 'simulate_%s_%s_%gdB.csv' %
                        (args.scheme, args.channel, args.snr_db))
    write_results_csv(path, [result], config.digest(), config['seed'])
    print("mi_bits=%.6f ser=%.6f" % (result.mi_bits, result.ser))
    print("wrote %s" % path)


def cmd_sweep(args):
    config = _load_experiment(args)
    constellation = make_qam(config['modulation_order'])
    if args.model:
        params, sched, meta = _load_model(args.model)
        if meta['modulation_order'] != constellation.order:
            raise ConfigurationError(
                "config is for %d-QAM but the model is %d-QAM" %
                (constellation.order, meta['modulation_order'])
            )
    else:
        params, sched, _ = train_model(config, constellation)

    results = run_sweep(config, params, sched, constellation)
    out = _output_dir(args, config)
    csv_path = os.path.join(out, 'sweep.csv')
    write_results_csv(csv_path, results, config.digest(), config['seed'])
    svg_path = os.path.join(out, 'sweep.svg')
    with open(svg_path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(mi_chart(results, title='%d-QAM, seed %d' %
                         (constellation.order, config['seed'])))
    print("wrote %s and %s" % (csv_path, svg_path))


def cmd_reconstruct(args):
    params, sched, meta = _load_model(args.model)
    constellation = make_qam(meta['modulation_order'])
    y = read_samples_csv(args.input)
    seed = args.seed if args.seed is not None else meta.get('seed', 0)
    rng = substream(seed, RandomStreams.RECEIVER)
    noise_power = None
    if args.snr_db is not None:
        noise_power = noise_power_from_snr(args.snr_db, args.transmit_power)

    posterior = None
    if args.passes is None:
        _, indices = reconstruct(params, sched, constellation, y, rng,
                                 sigma=args.sigma, logger=log,
                                 noise_power=noise_power)
    else:
        posterior = reconstruct_posterior(params, sched, constellation, y,
                                          args.passes, rng, sigma=args.sigma,
                                          logger=log, noise_power=noise_power)
        indices = hard_decisions(posterior)

    out = _output_dir(args)
    path = os.path.join(out, 'reconstruction.csv')
    write_reconstruction_csv(path, y, indices, meta.get('config_sha256', ''),
                             seed, posterior)
    print("wrote %s" % path)


def _positive_int(value):
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return number


def build_parser():
    """
    The argument parser of the ``diffshape`` command.
    """
    parser = argparse.ArgumentParser(
        prog='diffshape',
        description="Probabilistic constellation shaping with denoising "
                    "diffusion models.",
    )
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    parser.add_argument('--verbose', '-v', action='count', default=0,
                        help="Log progress; repeat for debug output.")
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument('--seed', type=int, default=None,
                       help="Override the master seed.")
        p.add_argument('--out', default=None,
                       help="Output directory (default: $%s, then the "
                            "config's output_dir)." % OUTPUT_DIR_ENV)
        return p

    p = add('train', cmd_train, "Train a denoiser and write a checkpoint.")
    p.add_argument('--config', required=True,
                   help="Config file, or a built-in config name.")

    p = add('shape', cmd_shape, "Compute the shaped distribution at an SNR.")
    p.add_argument('--model', required=True)
    p.add_argument('--snr-db', type=float, required=True)
    p.add_argument('--n-samples', type=_positive_int, default=10000)
    p.add_argument('--transmit-power', type=float, default=1.0)
    p.add_argument('--sigma', choices=(SIGMA_BETA, SIGMA_BETA_TILDE),
                   default=SIGMA_BETA)

    p = add('simulate', cmd_simulate, "Evaluate a single operating point.")
    p.add_argument('--model', required=True)
    p.add_argument('--config', default=None)
    p.add_argument('--snr-db', type=float, required=True)
    p.add_argument('--channel', choices=('awgn', 'laplacian'),
                   default='awgn')
    p.add_argument('--scheme', choices=('ddpm', 'uniform', 'dnn'),
                   default='ddpm')
    p.add_argument('--symbols', type=_positive_int, default=None)

    p = add('sweep', cmd_sweep, "Run the SNR sweep of a config.")
    p.add_argument('--config', required=True)
    p.add_argument('--model', default=None,
                   help="Use this checkpoint instead of training one.")

    p = add('reconstruct', cmd_reconstruct,
            "Decide symbols for received samples read from a CSV file.")
    p.add_argument('--model', required=True)
    p.add_argument('--input', required=True)
    p.add_argument('--snr-db', type=float, default=None,
                   help="Channel SNR of the samples; sets where the reverse "
                        "pass starts.")
    p.add_argument('--transmit-power', type=float, default=1.0)
    p.add_argument('--passes', type=_positive_int, default=None,
                   help="Emit a histogram over this many stochastic passes.")
    p.add_argument('--sigma', choices=(SIGMA_BETA, SIGMA_BETA_TILDE),
                   default=SIGMA_BETA)
    return parser


def main(argv=None):
    """
    Runs the command line and returns the exit status.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level,
                        format='%(asctime)s %(name)s %(levelname)s '
                               '%(message)s')

    try:
        args.func(args)
    except DiffShapeError as e:
        print("error: %s" % e, file=sys.stderr)
        return int(e.exit_code)
    except (OSError, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return int(ExitCodes.RUNTIME_ERROR)
    return int(ExitCodes.SUCCESS)
