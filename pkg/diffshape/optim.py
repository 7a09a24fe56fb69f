# -*- coding: utf-8 -*-
"""
diffshape/optim
~~~~~~~~~~~~~~~

The Adam optimizer, over plain lists of numpy arrays.
"""
import numpy as np


class Adam(object):
    """
    Adaptive moment estimation. Parameters are updated in place, so the
    arrays handed in must be writeable and must stay the same objects for the
    life of the optimizer.

    :param params: The parameter arrays to optimize.
    :type params: ``list`` of ``numpy.ndarray``
    :param learning_rate: Step size.
    :param beta1: First-moment decay.
    :param beta2: Second-moment decay.
    :param eps: Denominator guard.
    """
    def __init__(self, params, learning_rate=1e-3, beta1=0.9, beta2=0.999,
                 eps=1e-8):
        self.params = list(params)
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self._m = [np.zeros_like(p) for p in self.params]
        self._v = [np.zeros_like(p) for p in self.params]

        #: Number of updates applied so far.
        self.steps = 0

    def step(self, grads):
        """
        Applies one update.

        :param grads: Gradients, one per parameter array and in the same
            order.
        :type grads: ``list`` of ``numpy.ndarray``
        """
        grads = list(grads)
        if len(grads) != len(self.params):
            raise ValueError(
                "expected %d gradients, got %d" %
                (len(self.params), len(grads))
            )
        self.steps += 1
        correction1 = 1.0 - self.beta1 ** self.steps
        correction2 = 1.0 - self.beta2 ** self.steps
        for p, g, m, v in zip(self.params, grads, self._m, self._v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= self.learning_rate * (m / correction1) / (
                np.sqrt(v / correction2) + self.eps
            )
