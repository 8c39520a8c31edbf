"""Unnormalized log-posteriors over network parameters."""
import collections
import logging

import numpy as np

from ..nn import (NumericalError, check_shape, log_likelihood,
                  value_and_grad_params)
from ..nn._likelihood import check_targets

logger = logging.getLogger(__name__)

LikelihoodTerm = collections.namedtuple(
    'LikelihoodTerm', ['inputs', 'targets', 'likelihood', 'weight'])


class PriorSpec:
    """Isotropic Gaussian prior N(0, 1 / precision) over the parameters."""

    def __init__(self, precision):
        precision = float(precision)
        if not precision >= 0:
            raise ValueError(
                "Prior precision should be non-negative, not {}".format(
                    precision))
        self.precision = precision

    def log_density(self, params):
        """Return ``-precision / 2 * |params|^2`` per parameter vector."""
        return -0.5 * self.precision * np.sum(params**2, axis=-1)

    def grad(self, params):
        return -self.precision * params

    def to_dict(self):
        return {'precision': self.precision}

    def __eq__(self, other):
        return (isinstance(other, PriorSpec)
                and self.precision == other.precision)

    def __repr__(self):
        return "PriorSpec(precision={})".format(self.precision)


class TargetDensity:
    """Prior times a product of weighted likelihood terms.

    Parameters
    ----------
    arch: :obj:`bpcfl.nn.MlpArchitecture` or None
        Network architecture; may be None for a prior-only density.
    prior: :obj:`PriorSpec`
        Prior over the parameters.
    terms: list of :obj:`LikelihoodTerm`, optional
        Data the density conditions on. Each term contributes
        ``weight * log p(targets | f(inputs, theta))``.
    """

    def __init__(self, arch, prior, terms=()):
        self.arch = arch
        self.prior = prior
        self.terms = []
        for term in terms:
            self.add_term(*term)

    def add_term(self, inputs, targets, likelihood, weight=1.):
        """Condition on another (weighted) batch of data."""
        if self.arch is None:
            raise ValueError(
                "A density without architecture cannot hold data terms")
        weight = float(weight)
        if not weight > 0:
            raise ValueError(
                "Term weights should be positive, not {}".format(weight))
        inputs = np.asarray(inputs, dtype=np.float64)
        if inputs.ndim != 2 or inputs.shape[1] != self.arch.input_dim:
            raise ValueError(
                "Inputs of shape {} do not match input dimension {}".format(
                    inputs.shape, self.arch.input_dim))
        targets = check_targets(targets, likelihood, self.arch.output_dim)
        if len(targets) != len(inputs):
            raise ValueError("Got {} inputs but {} targets".format(
                len(inputs), len(targets)))
        self.terms.append(LikelihoodTerm(inputs, targets, likelihood, weight))

    def _check(self, params):
        params = np.asarray(params, dtype=np.float64)
        if self.arch is not None:
            check_shape(self.arch, params)
        return params

    def log_unnorm(self, params):
        """Return the unnormalized log-density, see :func:`log_unnorm`."""
        params = self._check(params)
        value = self.prior.log_density(params)
        for term in self.terms:
            value = value + term.weight * log_likelihood(
                self.arch, params, term.inputs, term.targets, term.likelihood)
        if not np.all(np.isfinite(value)):
            raise NumericalError("Non-finite log-density")
        return value if np.ndim(value) else float(value)

    def value_and_grad(self, params):
        """Return the log-density and its gradient w.r.t. `params`."""
        params = self._check(params)
        value = self.prior.log_density(params)
        grad = self.prior.grad(params)
        for term in self.terms:
            term_value, term_grad = value_and_grad_params(
                self.arch, params, term.inputs, term.targets,
                term.likelihood)
            value = value + term.weight * term_value
            grad = grad + term.weight * term_grad
        if not np.all(np.isfinite(value)):
            raise NumericalError("Non-finite log-density")
        return (value if np.ndim(value) else float(value)), grad

    def __repr__(self):
        return "TargetDensity(arch={}, prior={}, weights={})".format(
            self.arch, self.prior, [term.weight for term in self.terms])


def log_unnorm(target, params):
    """Return ``log p0(theta) + sum_j w_j log p(y_j | f(X_j, theta))``.

    Parameters
    ----------
    target: :obj:`TargetDensity`
        The density.
    params: :obj:`numpy.ndarray`
        Parameter vector or stack of vectors.

    Returns
    -------
    float or :obj:`numpy.ndarray`
    """
    return target.log_unnorm(params)


def grad_log_unnorm(target, params):
    """Return the gradient of :func:`log_unnorm` w.r.t. `params`."""
    _, grad = target.value_and_grad(params)
    return grad
