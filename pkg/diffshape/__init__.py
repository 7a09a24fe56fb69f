# -*- coding: utf-8 -*-
"""
diffshape
~~~~~~~~~

Probabilistic constellation shaping with denoising diffusion models.
"""
__version__ = '0.1.0'
