"""Monte Carlo estimates of the Bayesian predictive distribution."""
import logging

import numpy as np
from scipy.special import softmax

from ..nn import forward

logger = logging.getLogger(__name__)


class Predictive:
    """Summary of a predictive distribution on a set of inputs.

    Attributes
    ----------
    task: str
        ``classification`` or ``regression``.
    probabilities: :obj:`numpy.ndarray` or None
        Mean class probabilities ``(N, C)`` (classification).
    mean, std: :obj:`numpy.ndarray` or None
        Predictive mean and standard deviation ``(N, C)`` (regression).
    num_samples: int
        Number of parameter samples averaged.
    """

    def __init__(self, task, probabilities=None, mean=None, std=None,
                 num_samples=1):
        self.task = task
        self.probabilities = probabilities
        self.mean = mean
        self.std = std
        self.num_samples = num_samples

    def __repr__(self):
        return "Predictive(task={}, num_samples={})".format(
            self.task, self.num_samples)


def predictive_mc(arch, samples, inputs, lik, observation_noise=True):
    """Average the predictions of parameter samples.

    Parameters
    ----------
    arch: :obj:`bpcfl.nn.MlpArchitecture`
        Network architecture.
    samples: list or :obj:`numpy.ndarray`
        Parameter samples, at least one.
    inputs: :obj:`numpy.ndarray`
        Inputs ``(N, D)``.
    lik: :obj:`bpcfl.nn.LikelihoodSpec`
        Observation model.
    observation_noise: bool
        Add the Gaussian observation variance to the predictive variance.

    Returns
    -------
    :obj:`Predictive`
    """
    samples = np.asarray(samples, dtype=np.float64)
    if not samples.size:
        raise ValueError("predictive_mc needs at least one sample")
    samples = np.atleast_2d(samples)
    outputs = forward(arch, samples, inputs)
    if lik.is_gaussian:
        variance = outputs.var(axis=0)
        if observation_noise:
            variance = variance + lik.sigma**2
        return Predictive('regression',
                          mean=outputs.mean(axis=0),
                          std=np.sqrt(variance),
                          num_samples=len(samples))
    probabilities = softmax(outputs, axis=-1).mean(axis=0)
    return Predictive('classification',
                      probabilities=probabilities,
                      num_samples=len(samples))
