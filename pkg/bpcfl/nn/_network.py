"""Forward pass and reverse-mode gradients of the fixed MLPs."""
import logging

import numpy as np
from scipy.special import expit

from ._architecture import check_shape, pack, unpack

logger = logging.getLogger(__name__)


class NumericalError(ArithmeticError):
    """A network computation produced non-finite values."""


def check_finite(values, what):
    """Raise :class:`NumericalError` if `values` contains inf or nan."""
    if not np.all(np.isfinite(values)):
        raise NumericalError(
            "Non-finite values encountered in {}".format(what))


def swish(values):
    """Return ``x * sigmoid(x)``."""
    return values * expit(values)


def _activate(name, values):
    if name == 'relu':
        return np.maximum(values, 0.)
    return swish(values)


def _activation_grad(name, values):
    if name == 'relu':
        return (values > 0.).astype(np.float64)
    sigmoid = expit(values)
    return sigmoid * (1. + values * (1. - sigmoid))


def group_norm(values, num_groups, epsilon):
    """Normalize the channels of each sample within groups.

    Parameters
    ----------
    values: :obj:`numpy.ndarray`
        Activations with channels on the last axis.
    num_groups: int
        Number of channel groups.
    epsilon: float
        Variance offset.

    Returns
    -------
    tuple of :obj:`numpy.ndarray`
        The normalized activations (before scale and shift) and the
        inverse standard deviation per sample and group.
    """
    shape = values.shape
    grouped = values.reshape(shape[:-1] + (num_groups, -1))
    mean = grouped.mean(axis=-1, keepdims=True)
    centered = grouped - mean
    variance = np.mean(centered**2, axis=-1, keepdims=True)
    inv_std = 1. / np.sqrt(variance + epsilon)
    return (centered * inv_std).reshape(shape), inv_std


def _group_norm_grad(grad_normed, normed, inv_std, num_groups):
    shape = grad_normed.shape
    grad = grad_normed.reshape(shape[:-1] + (num_groups, -1))
    normed = normed.reshape(grad.shape)
    grad_values = inv_std * (
        grad - grad.mean(axis=-1, keepdims=True) -
        normed * np.mean(grad * normed, axis=-1, keepdims=True))
    return grad_values.reshape(shape)


def _forward(arch, params, inputs):
    """Run the network and keep what the backward pass needs."""
    params = np.asarray(params, dtype=np.float64)
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.ndim != 2 or inputs.shape[1] != arch.input_dim:
        raise ValueError(
            "Inputs of shape {} do not match input dimension {}".format(
                inputs.shape, arch.input_dim))
    layers = unpack(arch, params)
    cache = []
    hidden = inputs
    last = arch.num_layers - 1
    for index, layer in enumerate(layers):
        pre = hidden @ layer['weight'] + layer['bias'][..., np.newaxis, :]
        entry = {'input': hidden, 'pre': pre}
        if index == last:
            hidden = pre
        else:
            if layer['scale'] is not None:
                normed, inv_std = group_norm(pre, arch.group_norm.num_groups,
                                             arch.group_norm.epsilon)
                entry['normed'] = normed
                entry['inv_std'] = inv_std
                pre = (normed * layer['scale'][..., np.newaxis, :] +
                       layer['shift'][..., np.newaxis, :])
            entry['activation_input'] = pre
            hidden = _activate(arch.activation, pre)
        cache.append(entry)
    return hidden, layers, cache


def _backward(arch, layers, cache, grad_outputs):
    """Propagate gradients w.r.t. the outputs back through the network.

    Returns the gradient w.r.t. the parameters and the inputs.
    """
    grads = [None] * len(layers)
    grad_pre = grad_outputs
    for index in reversed(range(len(layers))):
        layer = layers[index]
        entry = cache[index]
        if index != arch.num_layers - 1:
            grad_pre = grad_pre * _activation_grad(
                arch.activation, entry['activation_input'])
        grad = {'scale': None, 'shift': None}
        if layer['scale'] is not None:
            grad['scale'] = np.sum(grad_pre * entry['normed'], axis=-2)
            grad['shift'] = np.sum(grad_pre, axis=-2)
            grad_pre = _group_norm_grad(
                grad_pre * layer['scale'][..., np.newaxis, :],
                entry['normed'], entry['inv_std'],
                arch.group_norm.num_groups)
        grad['weight'] = np.swapaxes(entry['input'], -1, -2) @ grad_pre
        grad['bias'] = np.sum(grad_pre, axis=-2)
        grads[index] = grad
        grad_pre = grad_pre @ np.swapaxes(layer['weight'], -1, -2)
    return pack(arch, grads), grad_pre


def forward(arch, params, inputs):
    """Evaluate the network.

    Parameters
    ----------
    arch: :obj:`bpcfl.nn.MlpArchitecture`
        Network architecture.
    params: :obj:`numpy.ndarray`
        Parameter vector ``(P,)`` or stack of vectors ``(B, P)``.
    inputs: :obj:`numpy.ndarray`
        Inputs of shape ``(N, D)``.

    Returns
    -------
    :obj:`numpy.ndarray`
        Outputs of shape ``(N, C)``, or ``(B, N, C)`` for a stack.

    Raises
    ------
    NumericalError
        If the outputs are not finite.
    """
    check_shape(arch, params)
    outputs, _, _ = _forward(arch, params, inputs)
    check_finite(outputs, "network outputs")
    return outputs
