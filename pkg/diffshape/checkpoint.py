# -*- coding: utf-8 -*-
"""
diffshape/checkpoint
~~~~~~~~~~~~~~~~~~~~

Persistence of trained denoisers.

A checkpoint is a UTF-8 JSON document::

    {"beta": [...], "embed_layers": [...], "layers": [{"b": [...],
     "w": [[...], ...]}, ...], "meta": {...}, "modulation_order": 16,
     "t_steps": 100, "time_embed": [[...], ...], "version": 1}

Weights are stored ``out x in``, row-major. Every float is written with 17
significant digits, so a load of a save reproduces each double exactly, and
keys are sorted, so saving the same model twice gives identical bytes.
"""
import json

import numpy as np

from .denoiser import DenoiserParams
from .diffusion import VarianceSchedule
from .exceptions import (
    CheckpointError, CheckpointVersionError, DiffShapeError
)

#: The checkpoint format version written by this release.
FORMAT_VERSION = 1

_REQUIRED_FIELDS = (
    'modulation_order', 't_steps', 'beta', 'layers', 'time_embed', 'meta',
)


def _encode(value):
    if isinstance(value, dict):
        items = sorted((str(k), v) for k, v in value.items())
        return '{' + ', '.join(
            '%s: %s' % (json.dumps(k), _encode(v)) for k, v in items
        ) + '}'
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if isinstance(value, (list, tuple)):
        return '[' + ', '.join(_encode(v) for v in value) + ']'
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            raise CheckpointError("cannot store non-finite value %r" % value)
        return '%.17g' % value
    if value is None or isinstance(value, str):
        return json.dumps(value)
    raise CheckpointError("cannot store value of type %s" %
                          type(value).__name__)


def save_checkpoint(params, sched, meta):
    """
    Serializes a trained model.

    :param params: The trained network.
    :type params: :class:`DenoiserParams
        <diffshape.denoiser.DenoiserParams>`
    :param sched: The schedule it was trained with.
    :type sched: :class:`VarianceSchedule
        <diffshape.diffusion.VarianceSchedule>`
    :param meta: Free-form metadata. Must hold an integer
        ``modulation_order``; everything else (seed, training options...) is
        stored as given.
    :type meta: ``dict``
    :rtype: ``bytes``
    """
    if params.t_steps != sched.t_steps:
        raise CheckpointError(
            "model has %d embedding rows but the schedule has %d steps" %
            (params.t_steps, sched.t_steps)
        )
    meta = dict(meta)
    try:
        order = meta.pop('modulation_order')
    except KeyError:
        raise CheckpointError("meta must include modulation_order")

    document = {
        'version': FORMAT_VERSION,
        'modulation_order': order,
        't_steps': sched.t_steps,
        'beta': sched.beta,
        'layers': [{'w': w, 'b': b} for w, b in params.layers],
        'time_embed': params.time_embed,
        'embed_layers': list(params.embed_layers),
        'meta': meta,
    }
    return (_encode(document) + '\n').encode('utf-8')


def load_checkpoint(payload):
    """
    Restores a model written by :func:`save_checkpoint
    <diffshape.checkpoint.save_checkpoint>`.

    :param payload: The checkpoint bytes.
    :returns: ``(params, sched, meta)``; ``meta`` includes
        ``modulation_order``.
    :raises CheckpointVersionError: If the payload has another format
        version.
    :raises CheckpointError: If the payload is malformed or its parts
        disagree.
    """
    try:
        document = json.loads(payload.decode('utf-8'))
    except (UnicodeDecodeError, ValueError) as e:
        raise CheckpointError("Malformed checkpoint: %s" % e)
    if not isinstance(document, dict):
        raise CheckpointError("Malformed checkpoint: not a JSON object")

    version = document.get('version')
    if version is None:
        raise CheckpointError("Malformed checkpoint: no version field")
    if version != FORMAT_VERSION:
        raise CheckpointVersionError(FORMAT_VERSION, version)
    missing = [f for f in _REQUIRED_FIELDS if f not in document]
    if missing:
        raise CheckpointError(
            "Malformed checkpoint: missing %s" % ', '.join(missing)
        )

    t_steps = document['t_steps']
    order = document['modulation_order']
    if not isinstance(t_steps, int) or not isinstance(order, int):
        raise CheckpointError("t_steps and modulation_order must be ints")
    if not isinstance(document['meta'], dict):
        raise CheckpointError("meta must be a JSON object")

    try:
        sched = VarianceSchedule(document['beta'])
        if sched.t_steps != t_steps:
            raise CheckpointError(
                "t_steps is %d but beta has %d entries" %
                (t_steps, sched.t_steps)
            )
        layers = [(layer['w'], layer['b']) for layer in document['layers']]
        params = DenoiserParams(
            layers, document['time_embed'], document.get('embed_layers')
        )
    except CheckpointError:
        raise
    except (DiffShapeError, KeyError, TypeError, ValueError) as e:
        raise CheckpointError("Invalid checkpoint contents: %s" % e)

    if params.t_steps != t_steps:
        raise CheckpointError(
            "schedule has %d steps but time_embed has %d rows" %
            (t_steps, params.t_steps)
        )

    meta = dict(document['meta'])
    meta['modulation_order'] = order
    return params.freeze(), sched, meta
