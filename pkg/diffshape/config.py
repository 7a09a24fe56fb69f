# -*- coding: utf-8 -*-
"""
diffshape/config
~~~~~~~~~~~~~~~~

Objects for controlling the configuration of training runs and experiments.
"""
import hashlib
import os

from .diffusion import make_linear_schedule
from .exceptions import ConfigurationError, ScheduleError


class _IntegerConfigOption(object):
    """
    Descriptor for handling an integer config option.  This will block
    attempts to set integer config options to non-integers or to values below
    ``minimum``.
    """
    def __init__(self, name, minimum=None):
        self.name = name
        self.minimum = minimum
        self.attr_name = '_%s' % self.name

    def __get__(self, instance, owner):
        return getattr(instance, self.attr_name)

    def __set__(self, instance, value):
        # bool is an int subclass, and True is never a sensible epoch count.
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValueError("%s must be an int" % self.name)
        if self.minimum is not None and value < self.minimum:
            raise ValueError(
                "%s must be at least %d, got %d" %
                (self.name, self.minimum, value)
            )
        setattr(instance, self.attr_name, value)


class _RealConfigOption(object):
    """
    Descriptor for handling a real-valued config option confined to the
    interval ``(lower, upper)``. Either bound may be ``None``; the lower bound
    is closed when ``lower_inclusive`` is set.
    """
    def __init__(self, name, lower=None, upper=None, lower_inclusive=False):
        self.name = name
        self.lower = lower
        self.lower_inclusive = lower_inclusive
        self.upper = upper
        self.attr_name = '_%s' % self.name

    def __get__(self, instance, owner):
        return getattr(instance, self.attr_name)

    def __set__(self, instance, value):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError("%s must be a real number" % self.name)
        value = float(value)
        if self.lower is not None:
            below = value < self.lower if self.lower_inclusive else (
                value <= self.lower
            )
            if below:
                raise ValueError(
                    "%s must not be below %r" % (self.name, self.lower)
                )
        if self.upper is not None and not value < self.upper:
            raise ValueError("%s must be below %r" % (self.name, self.upper))
        setattr(instance, self.attr_name, value)


class DummyLogger(object):
    """
    A logger that discards every message.

    Each log method is a no-op, so that diffshape code never needs to check
    whether a logger was passed in before logging.
    """
    def __init__(self, *vargs):
        pass

    def debug(self, *vargs, **kwargs):
        """
        No-op logging.
        """
        pass

    def info(self, *vargs, **kwargs):
        """
        No-op logging.
        """
        pass


class TrainConfig(object):
    """
    Controls a single run of the denoiser training loop.

    :param epochs: How many epochs to train for. One epoch is
        ``ceil(M * draws_per_point / batch_size)`` optimizer steps. Defaults
        to ``1000``.
    :type epochs: ``int``

    :param learning_rate: The Adam step size. Defaults to ``1e-3``.
    :type learning_rate: ``float``

    :param batch_size: Number of ``(x_0, t, eps)`` draws per step. Defaults to
        ``256``.
    :type batch_size: ``int``

    :param adam_beta1: First-moment decay. Defaults to ``0.9``.
    :param adam_beta2: Second-moment decay. Defaults to ``0.999``.
    :param adam_eps: Denominator guard. Defaults to ``1e-8``.

    :param seed: Seed of the ``train`` random stream. Defaults to ``0``.
    :type seed: ``int``

    :param draws_per_point: How many draws per constellation point make up an
        epoch. Defaults to ``64``.
    :type draws_per_point: ``int``

    :param hidden_width: Width of each hidden layer. Defaults to ``128``.
    :param hidden_layers: Number of hidden layers. Defaults to ``3``.

    :param embed_layers: Which hidden layers (0-based) have their activations
        multiplied by the time embedding. ``None`` means all of them.
    :type embed_layers: ``tuple`` of ``int`` or ``None``

    :param logger: A logger. Defaults to a :class:`DummyLogger
        <diffshape.config.DummyLogger>`.
    :type logger: ``logging.Logger``
    """
    epochs = _IntegerConfigOption('epochs', minimum=1)
    learning_rate = _RealConfigOption('learning_rate', lower=0.0)
    batch_size = _IntegerConfigOption('batch_size', minimum=1)
    adam_beta1 = _RealConfigOption('adam_beta1', lower=0.0, upper=1.0,
                                   lower_inclusive=True)
    adam_beta2 = _RealConfigOption('adam_beta2', lower=0.0, upper=1.0,
                                   lower_inclusive=True)
    adam_eps = _RealConfigOption('adam_eps', lower=0.0)
    seed = _IntegerConfigOption('seed', minimum=0)
    draws_per_point = _IntegerConfigOption('draws_per_point', minimum=1)
    hidden_width = _IntegerConfigOption('hidden_width', minimum=1)
    hidden_layers = _IntegerConfigOption('hidden_layers', minimum=1)

    def __init__(self,
                 epochs=1000,
                 learning_rate=1e-3,
                 batch_size=256,
                 adam_beta1=0.9,
                 adam_beta2=0.999,
                 adam_eps=1e-8,
                 seed=0,
                 draws_per_point=64,
                 hidden_width=128,
                 hidden_layers=3,
                 embed_layers=None,
                 logger=None):
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.adam_beta1 = adam_beta1
        self.adam_beta2 = adam_beta2
        self.adam_eps = adam_eps
        self.seed = seed
        self.draws_per_point = draws_per_point
        self.hidden_width = hidden_width
        self.hidden_layers = hidden_layers
        self.embed_layers = embed_layers
        self.logger = logger or DummyLogger(__name__)

    @property
    def embed_layers(self):
        """
        The hidden layers whose activations are multiplied by the time
        embedding, as a sorted tuple of 0-based positions.
        """
        if self._embed_layers is None:
            return tuple(range(self.hidden_layers))
        return self._embed_layers

    @embed_layers.setter
    def embed_layers(self, value):
        """
        Enforces that the embedding positions name existing hidden layers.
        """
        if value is None:
            self._embed_layers = None
            return
        positions = tuple(sorted(set(value)))
        for position in positions:
            if not 0 <= position < self.hidden_layers:
                raise ValueError(
                    "embed_layers entry %r is not a hidden layer" % position
                )
        self._embed_layers = positions

    def as_dict(self):
        """
        The options as a plain ``dict``, suitable for checkpoint metadata.
        """
        return {
            'epochs': self.epochs,
            'learning_rate': self.learning_rate,
            'batch_size': self.batch_size,
            'adam_beta1': self.adam_beta1,
            'adam_beta2': self.adam_beta2,
            'adam_eps': self.adam_eps,
            'seed': self.seed,
            'draws_per_point': self.draws_per_point,
            'hidden_width': self.hidden_width,
            'hidden_layers': self.hidden_layers,
            'embed_layers': list(self.embed_layers),
        }


class DemapperConfig(object):
    """
    Controls training of the neural demapper benchmark.

    :param iterations: Number of Adam iterations. Defaults to ``5000``.
    :param learning_rate: The Adam step size. Defaults to ``1e-3``.
    :param batch_size: Received samples per iteration. Defaults to ``256``.
    :param hidden_width: Width of both hidden layers. Defaults to ``64``.
    :param seed: Seed of the ``demapper`` random stream. Defaults to ``0``.
    :param logger: A logger. Defaults to a :class:`DummyLogger
        <diffshape.config.DummyLogger>`.
    """
    iterations = _IntegerConfigOption('iterations', minimum=1)
    learning_rate = _RealConfigOption('learning_rate', lower=0.0)
    batch_size = _IntegerConfigOption('batch_size', minimum=1)
    hidden_width = _IntegerConfigOption('hidden_width', minimum=1)
    seed = _IntegerConfigOption('seed', minimum=0)

    def __init__(self,
                 iterations=5000,
                 learning_rate=1e-3,
                 batch_size=256,
                 hidden_width=64,
                 seed=0,
                 logger=None):
        self.iterations = iterations
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.hidden_width = hidden_width
        self.seed = seed
        self.logger = logger or DummyLogger(__name__)


#: Names of the configuration files shipped with the package.
BUILTIN_CONFIGS = ('default_16qam', 'default_64qam')

_CONFIG_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                           'configs')

_SCHEMES = ('ddpm', 'uniform', 'dnn')
_CHANNELS = ('awgn', 'laplacian')


def _parse_int(value):
    return int(value)


def _parse_float(value):
    return float(value)


def _parse_bool(value):
    lowered = value.lower()
    if lowered in ('true', 'yes', '1'):
        return True
    if lowered in ('false', 'no', '0'):
        return False
    raise ValueError("not a boolean: %r" % value)


def _parse_float_list(value):
    return tuple(float(v) for v in value.split(',') if v.strip())


def _parse_embed_layers(value):
    if value.lower() == 'all':
        return 'all'
    positions = tuple(int(v) for v in value.split(',') if v.strip())
    if not positions:
        raise ValueError("expected 'all' or a list of layer positions")
    return positions


def _choice_list(choices):
    def parse(value):
        items = tuple(v.strip() for v in value.split(',') if v.strip())
        for item in items:
            if item not in choices:
                raise ValueError(
                    "%r is not one of %s" % (item, ', '.join(choices))
                )
        return items
    return parse


def _parse_str(value):
    return value


# key: (parser, default). A default of None means the key is required.
_SCHEMA = {
    'modulation_order': (_parse_int, None),
    't_steps': (_parse_int, 100),
    'beta_min': (_parse_float, 1e-4),
    'beta_max': (_parse_float, 0.02),
    'seed': (_parse_int, 0),
    'output_dir': (_parse_str, 'results'),
    'train.epochs': (_parse_int, 1000),
    'train.learning_rate': (_parse_float, 1e-3),
    'train.batch_size': (_parse_int, 256),
    'train.adam_beta1': (_parse_float, 0.9),
    'train.adam_beta2': (_parse_float, 0.999),
    'train.adam_eps': (_parse_float, 1e-8),
    'train.draws_per_point': (_parse_int, 64),
    'train.hidden_width': (_parse_int, 128),
    'train.hidden_layers': (_parse_int, 3),
    'train.embed_layers': (_parse_embed_layers, 'all'),
    'shaping.n_samples': (_parse_int, 10000),
    'shaping.transmit_power': (_parse_float, 1.0),
    'sweep.snr_db': (_parse_float_list, None),
    'sweep.symbols_per_point': (_parse_int, 100000),
    'sweep.channels': (_choice_list(_CHANNELS), ('awgn',)),
    'sweep.schemes': (_choice_list(_SCHEMES), _SCHEMES),
    'sweep.dnn_retrain_on_channel': (_parse_bool, False),
    'demapper.iterations': (_parse_int, 5000),
    'demapper.learning_rate': (_parse_float, 1e-3),
    'demapper.batch_size': (_parse_int, 256),
    'demapper.hidden_width': (_parse_int, 64),
}


def _render(value):
    if isinstance(value, tuple):
        return ', '.join(_render(v) for v in value)
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


class ExperimentConfig(object):
    """
    A flat, typed experiment description: modulation order, schedule,
    training, shaping and sweep options, master seed and output directory.

    Values are looked up by their dotted key, e.g. ``config['train.epochs']``.
    Use :func:`load_config <diffshape.config.load_config>` to build one from
    a file, or pass overrides directly.

    :param values: A mapping of key to already-typed value. Missing optional
        keys take their defaults.
    :param logger: A logger handed to every component the experiment builds.
    """
    def __init__(self, values, logger=None):
        unknown = sorted(set(values) - set(_SCHEMA))
        if unknown:
            raise ConfigurationError("Unknown config key(s): %s" %
                                     ', '.join(unknown))
        self._values = {}
        for key, (_, default) in _SCHEMA.items():
            if key in values:
                self._values[key] = values[key]
            elif default is None:
                raise ConfigurationError("Missing required key %r" % key)
            else:
                self._values[key] = default
        self.logger = logger or DummyLogger(__name__)
        self._validate()

    def _validate(self):
        order = self['modulation_order']
        if order not in (4, 16, 64, 256):
            raise ConfigurationError(
                "modulation_order must be 4, 16, 64 or 256, got %d" % order
            )
        try:
            make_linear_schedule(self['t_steps'], self['beta_min'],
                                 self['beta_max'])
        except ScheduleError as e:
            raise ConfigurationError(str(e))
        if not self['sweep.snr_db']:
            raise ConfigurationError("sweep.snr_db must not be empty")
        if self['sweep.symbols_per_point'] < 1:
            raise ConfigurationError("sweep.symbols_per_point must be >= 1")
        if self['shaping.n_samples'] < 1:
            raise ConfigurationError("shaping.n_samples must be >= 1")
        if not self['shaping.transmit_power'] > 0:
            raise ConfigurationError("shaping.transmit_power must be > 0")
        if not self['sweep.channels'] or not self['sweep.schemes']:
            raise ConfigurationError("sweep needs a channel and a scheme")
        # Sub-configs validate their own ranges; surface those as config
        # errors too.
        try:
            self.train_config()
            self.demapper_config()
        except ValueError as e:
            raise ConfigurationError(str(e))

    def __getitem__(self, key):
        return self._values[key]

    def with_overrides(self, **overrides):
        """
        Returns a copy with some keys replaced. Keyword names use ``__`` in
        place of the dot, e.g. ``train__epochs=5``.
        """
        values = dict(self._values)
        for name, value in overrides.items():
            values[name.replace('__', '.')] = value
        return ExperimentConfig(values, logger=self.logger)

    def _embed_layers(self):
        value = self['train.embed_layers']
        return None if value == 'all' else value

    def train_config(self):
        """
        The :class:`TrainConfig <diffshape.config.TrainConfig>` this
        experiment trains with.
        """
        return TrainConfig(
            epochs=self['train.epochs'],
            learning_rate=self['train.learning_rate'],
            batch_size=self['train.batch_size'],
            adam_beta1=self['train.adam_beta1'],
            adam_beta2=self['train.adam_beta2'],
            adam_eps=self['train.adam_eps'],
            seed=self['seed'],
            draws_per_point=self['train.draws_per_point'],
            hidden_width=self['train.hidden_width'],
            hidden_layers=self['train.hidden_layers'],
            embed_layers=self._embed_layers(),
            logger=self.logger,
        )

    def demapper_config(self):
        """
        The :class:`DemapperConfig <diffshape.config.DemapperConfig>` of the
        neural demapper benchmark.
        """
        return DemapperConfig(
            iterations=self['demapper.iterations'],
            learning_rate=self['demapper.learning_rate'],
            batch_size=self['demapper.batch_size'],
            hidden_width=self['demapper.hidden_width'],
            seed=self['seed'],
            logger=self.logger,
        )

    def render(self):
        """
        The canonical ``key = value`` text of this configuration, one key per
        line in sorted order.
        """
        return ''.join(
            '%s = %s\n' % (key, _render(self._values[key]))
            for key in sorted(self._values)
        )

    def digest(self):
        """
        A short SHA-256 digest of :meth:`render`, stamped into result files.
        """
        return hashlib.sha256(self.render().encode('utf-8')).hexdigest()[:16]


def parse_config(text, logger=None):
    """
    Parses the text of a configuration file into an :class:`ExperimentConfig
    <diffshape.config.ExperimentConfig>`.

    Lines are ``key = value``; blank lines and lines starting with ``#`` are
    ignored. List values are comma separated.
    """
    values = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        key, sep, value = line.partition('=')
        key = key.strip()
        if not sep or not key:
            raise ConfigurationError(
                "line %d: expected 'key = value', got %r" % (line_number, raw)
            )
        if key not in _SCHEMA:
            raise ConfigurationError(
                "line %d: unknown key %r" % (line_number, key)
            )
        if key in values:
            raise ConfigurationError(
                "line %d: duplicate key %r" % (line_number, key)
            )
        parser = _SCHEMA[key][0]
        try:
            values[key] = parser(value.strip())
        except ValueError as e:
            raise ConfigurationError(
                "line %d: bad value for %r: %s" % (line_number, key, e)
            )
    return ExperimentConfig(values, logger=logger)


def load_config(path_or_name, logger=None):
    """
    Loads a configuration file. ``path_or_name`` is either a path or the name
    of one of the :data:`BUILTIN_CONFIGS
    <diffshape.config.BUILTIN_CONFIGS>`.
    """
    if path_or_name in BUILTIN_CONFIGS:
        path = os.path.join(_CONFIG_DIR, path_or_name + '.conf')
    else:
        path = path_or_name
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except (IOError, OSError) as e:
        raise ConfigurationError("Cannot read config %r: %s" % (path, e))
    return parse_config(text, logger=logger)
