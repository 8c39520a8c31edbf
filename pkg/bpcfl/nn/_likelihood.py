"""Observation models and their gradients.

The log-likelihood of a batch is the sum over its points. All functions
accept a single parameter vector or a stack of them; with a stack they
return one value (or gradient) per row.
"""
import logging

import numpy as np
from scipy.special import log_softmax, softmax

from ._architecture import check_shape
from ._network import _backward, _forward, check_finite

logger = logging.getLogger(__name__)

LIKELIHOODS = ('gaussian', 'categorical')

# Default observation noise of the regression task.
DEFAULT_SIGMA = 0.3


class LikelihoodSpec:
    """Observation model p(y | f(x, theta)).

    Parameters
    ----------
    kind: str
        ``gaussian`` (isotropic, standard deviation `sigma`) or
        ``categorical`` (softmax over the outputs, soft labels allowed).
    sigma: float, optional
        Observation noise of the Gaussian likelihood.
    """

    def __init__(self, kind, sigma=None):
        if kind not in LIKELIHOODS:
            raise ValueError("Unknown likelihood '{}', choose from: {}".format(
                kind, ', '.join(LIKELIHOODS)))
        if kind == 'gaussian':
            sigma = DEFAULT_SIGMA if sigma is None else float(sigma)
            if not sigma > 0:
                raise ValueError(
                    "Gaussian likelihood needs sigma > 0, not {}".format(
                        sigma))
        else:
            sigma = None
        self.kind = kind
        self.sigma = sigma

    @property
    def is_gaussian(self):
        return self.kind == 'gaussian'

    def to_dict(self):
        """Return the settings as a dictionary."""
        return {'kind': self.kind, 'sigma': self.sigma}

    @classmethod
    def from_dict(cls, settings):
        """Create a likelihood from a dictionary."""
        return cls(settings['kind'], settings.get('sigma'))

    def __eq__(self, other):
        return (isinstance(other, LikelihoodSpec)
                and self.to_dict() == other.to_dict())

    def __repr__(self):
        return "LikelihoodSpec({})".format(self.to_dict())


def gaussian(sigma=DEFAULT_SIGMA):
    """Return a Gaussian likelihood with standard deviation `sigma`."""
    return LikelihoodSpec('gaussian', sigma)


def categorical():
    """Return a categorical likelihood with softmax link."""
    return LikelihoodSpec('categorical')


def for_task(task, sigma=DEFAULT_SIGMA):
    """Return the default likelihood of a task."""
    if task == 'classification':
        return categorical()
    return gaussian(sigma)


def check_targets(targets, lik, num_outputs):
    """Check the shape of `targets` and, if categorical, their rows."""
    targets = np.asarray(targets, dtype=np.float64)
    if targets.ndim != 2 or targets.shape[1] != num_outputs:
        raise ValueError(
            "Targets of shape {} do not match output dimension {}".format(
                targets.shape, num_outputs))
    if not lik.is_gaussian:
        row_sums = targets.sum(axis=1)
        bad = np.flatnonzero(np.abs(row_sums - 1.) > 1e-9)
        if bad.size:
            raise ValueError(
                "Categorical targets should be probability vectors, but "
                "row {} sums to {}".format(bad[0], row_sums[bad[0]]))
    return targets


def _evaluate(lik, outputs, targets):
    """Return the log-likelihood and its gradient w.r.t. the outputs."""
    num_points, num_outputs = outputs.shape[-2:]
    if lik.is_gaussian:
        variance = lik.sigma**2
        residual = targets - outputs
        value = (-0.5 * num_points * num_outputs *
                 np.log(2. * np.pi * variance) -
                 np.sum(residual**2, axis=(-2, -1)) / (2. * variance))
        grad_outputs = residual / variance
    else:
        log_probs = log_softmax(outputs, axis=-1)
        value = np.sum(targets * log_probs, axis=(-2, -1))
        grad_outputs = (targets - softmax(outputs, axis=-1) *
                        targets.sum(axis=-1, keepdims=True))
    return value, grad_outputs


def log_likelihood(arch, params, inputs, targets, lik):
    """Return the summed log-likelihood of `targets` given `inputs`.

    Parameters
    ----------
    arch: :obj:`bpcfl.nn.MlpArchitecture`
        Network architecture.
    params: :obj:`numpy.ndarray`
        Parameter vector ``(P,)`` or stack ``(B, P)``.
    inputs: :obj:`numpy.ndarray`
        Inputs ``(K, D)``.
    targets: :obj:`numpy.ndarray`
        Targets ``(K, C)``; probability rows for a categorical likelihood.
    lik: :obj:`LikelihoodSpec`
        Observation model.

    Returns
    -------
    float or :obj:`numpy.ndarray`
        The log-likelihood, one per row of a parameter stack.
    """
    check_shape(arch, params)
    targets = check_targets(targets, lik, arch.output_dim)
    outputs, _, _ = _forward(arch, params, inputs)
    check_finite(outputs, "network outputs")
    value, _ = _evaluate(lik, outputs, targets)
    check_finite(value, "log-likelihood")
    return value if np.ndim(value) else float(value)


def value_and_grad_params(arch, params, inputs, targets, lik):
    """Return the log-likelihood and its gradient w.r.t. the parameters."""
    check_shape(arch, params)
    targets = check_targets(targets, lik, arch.output_dim)
    outputs, layers, cache = _forward(arch, params, inputs)
    check_finite(outputs, "network outputs")
    value, grad_outputs = _evaluate(lik, outputs, targets)
    grad, _ = _backward(arch, layers, cache, grad_outputs)
    check_finite(value, "log-likelihood")
    check_finite(grad, "parameter gradient")
    return (value if np.ndim(value) else float(value)), grad


def grad_params(arch, params, inputs, targets, lik):
    """Return the gradient of :func:`log_likelihood` w.r.t. the parameters.

    The gradient has the shape of `params`.
    """
    _, grad = value_and_grad_params(arch, params, inputs, targets, lik)
    return grad


def grad_data(arch, params, inputs, targets, lik):
    """Return the gradient of :func:`log_likelihood` w.r.t. the data.

    Returns
    -------
    tuple of :obj:`numpy.ndarray`
        Gradients w.r.t. the inputs ``(K, D)`` and the targets ``(K, C)``;
        with a parameter stack both carry a leading ``B`` axis.
    """
    check_shape(arch, params)
    targets = check_targets(targets, lik, arch.output_dim)
    outputs, layers, cache = _forward(arch, params, inputs)
    check_finite(outputs, "network outputs")
    _, grad_outputs = _evaluate(lik, outputs, targets)
    _, grad_inputs = _backward(arch, layers, cache, grad_outputs)
    if lik.is_gaussian:
        grad_targets = -grad_outputs
    else:
        grad_targets = log_softmax(outputs, axis=-1)
    check_finite(grad_inputs, "input gradient")
    check_finite(grad_targets, "target gradient")
    return grad_inputs, grad_targets
