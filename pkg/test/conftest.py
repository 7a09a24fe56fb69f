# -*- coding: utf-8 -*-
from hypothesis import settings, HealthCheck

import numpy as np
import pytest
import helpers

import diffshape.constellation
import diffshape.denoiser
import diffshape.diffusion
from diffshape.config import TrainConfig

# Set up a CI profile that allows slow example generation.
settings.register_profile(
    "travis",
    settings(suppress_health_check=[HealthCheck.too_slow])
)


@pytest.fixture
def qam4():
    return diffshape.constellation.make_qam(4)


@pytest.fixture
def qam16():
    return diffshape.constellation.make_qam(16)


@pytest.fixture
def schedule():
    return diffshape.diffusion.make_linear_schedule()


@pytest.fixture
def short_schedule():
    return diffshape.diffusion.make_linear_schedule(10, 1e-3, 0.2)


@pytest.fixture
def small_model(short_schedule):
    """
    An untrained but non-trivial network over the short schedule.
    """
    return helpers.random_model(short_schedule.t_steps, seed=1234)


@pytest.fixture(scope='session')
def trained_16qam():
    """
    The 16-QAM denoiser trained with the default options, with its loss log.
    Shared by every test that needs a trained model.
    """
    sched = diffshape.diffusion.make_linear_schedule()
    losses = []
    params = diffshape.denoiser.train(
        diffshape.constellation.make_qam(16), sched, TrainConfig(),
        loss_log=losses,
    )
    return params, sched, np.array(losses)
