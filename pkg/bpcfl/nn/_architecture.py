"""Fixed multilayer perceptron architectures and their parameter layout.

A parameter vector is a flat array of 64-bit reals. Per linear layer it
holds the weight matrix (row-major, ``fan_in x fan_out``), the bias and,
for group-normalized layers, the per-channel scale and shift, in that
order. All functions also accept a stack of parameter vectors with shape
``(B, P)``.
"""
import collections
import logging

import numpy as np

logger = logging.getLogger(__name__)

ACTIVATIONS = ('swish', 'relu')
TASKS = ('regression', 'classification')

LayerSlices = collections.namedtuple('LayerSlices',
                                     ['weight', 'bias', 'scale', 'shift'])


class GroupNormSpec:
    """Group normalization applied after the first linear layers.

    Parameters
    ----------
    num_groups: int
        Number of channel groups per normalized layer.
    epsilon: float
        Variance offset of the normalization.
    num_layers: int
        Number of leading linear layers that are normalized.
    """

    def __init__(self, num_groups, epsilon=1e-5, num_layers=2):
        if int(num_groups) < 1:
            raise ValueError(
                "num_groups should be positive, not {}".format(num_groups))
        if not epsilon > 0:
            raise ValueError(
                "epsilon should be positive, not {}".format(epsilon))
        self.num_groups = int(num_groups)
        self.epsilon = float(epsilon)
        self.num_layers = int(num_layers)

    def to_dict(self):
        """Return the settings as a dictionary."""
        return {
            'num_groups': self.num_groups,
            'epsilon': self.epsilon,
            'num_layers': self.num_layers,
        }

    def __eq__(self, other):
        return (isinstance(other, GroupNormSpec)
                and self.to_dict() == other.to_dict())


class MlpArchitecture:
    """Fully connected network with a fixed activation.

    Parameters
    ----------
    layer_widths: list of int
        Widths from the input dimension to the output dimension.
    activation: str
        Either ``swish`` or ``relu``, applied after every hidden layer.
    task: str
        Either ``regression`` or ``classification``.
    group_norm: :obj:`GroupNormSpec` or dict, optional
        Group normalization of the leading hidden layers.
    """

    def __init__(self, layer_widths, activation, task, group_norm=None):
        widths = [int(width) for width in layer_widths]
        if len(widths) < 2:
            raise ValueError(
                "layer_widths needs at least an input and an output width, "
                "got {}".format(layer_widths))
        if any(width < 1 for width in widths):
            raise ValueError(
                "layer_widths should be positive, got {}".format(widths))
        if activation not in ACTIVATIONS:
            raise ValueError("Unknown activation '{}', choose from: {}".format(
                activation, ', '.join(ACTIVATIONS)))
        if task not in TASKS:
            raise ValueError("Unknown task '{}', choose from: {}".format(
                task, ', '.join(TASKS)))
        if isinstance(group_norm, dict):
            group_norm = GroupNormSpec(**group_norm)

        self.layer_widths = widths
        self.activation = activation
        self.task = task
        self.group_norm = group_norm

        if group_norm is not None:
            if group_norm.num_layers > self.num_layers - 1:
                raise ValueError(
                    "Cannot normalize {} layers of a network with {} hidden "
                    "layers".format(group_norm.num_layers,
                                    self.num_layers - 1))
            for index in range(group_norm.num_layers):
                width = widths[index + 1]
                if width % group_norm.num_groups:
                    raise ValueError(
                        "Width {} of layer {} is not divisible by {} "
                        "groups".format(width, index + 1,
                                        group_norm.num_groups))

        self.layout = self._build_layout()

    @property
    def input_dim(self):
        return self.layer_widths[0]

    @property
    def output_dim(self):
        return self.layer_widths[-1]

    @property
    def num_layers(self):
        """Number of linear layers."""
        return len(self.layer_widths) - 1

    @property
    def param_count(self):
        return param_count(self)

    def is_normalized(self, index):
        """Return True if linear layer `index` (0-based) is normalized."""
        return (self.group_norm is not None
                and index < self.group_norm.num_layers)

    def _build_layout(self):
        layout = []
        offset = 0
        for index in range(self.num_layers):
            fan_in = self.layer_widths[index]
            fan_out = self.layer_widths[index + 1]
            weight = slice(offset, offset + fan_in * fan_out)
            offset = weight.stop
            bias = slice(offset, offset + fan_out)
            offset = bias.stop
            scale = shift = None
            if self.is_normalized(index):
                scale = slice(offset, offset + fan_out)
                offset = scale.stop
                shift = slice(offset, offset + fan_out)
                offset = shift.stop
            layout.append(LayerSlices(weight, bias, scale, shift))
        return layout

    def to_dict(self):
        """Return the architecture as a dictionary."""
        return {
            'layer_widths': list(self.layer_widths),
            'activation': self.activation,
            'task': self.task,
            'group_norm': (None if self.group_norm is None else
                           self.group_norm.to_dict()),
        }

    @classmethod
    def from_dict(cls, settings):
        """Create an architecture from a dictionary."""
        return cls(**settings)

    def __eq__(self, other):
        return (isinstance(other, MlpArchitecture)
                and self.to_dict() == other.to_dict())

    def __repr__(self):
        return "MlpArchitecture({})".format(self.to_dict())


def regression_mlp(input_dim=1, output_dim=1, width=128, depth=3):
    """Swish network used for the interval regression task."""
    widths = [input_dim] + [width] * depth + [output_dim]
    return MlpArchitecture(widths, 'swish', 'regression')


def classification_mlp(input_dim=2, num_classes=2, width=50, depth=3,
                       num_groups=2):
    """ReLU network with two group-normalized layers for classification."""
    widths = [input_dim] + [width] * depth + [num_classes]
    return MlpArchitecture(
        widths,
        'relu',
        'classification',
        group_norm=GroupNormSpec(num_groups, epsilon=1e-5, num_layers=2))


def param_count(arch):
    """Return the number of scalars in a parameter vector of `arch`."""
    widths = arch.layer_widths
    count = 0
    for index in range(arch.num_layers):
        count += widths[index] * widths[index + 1] + widths[index + 1]
        if arch.is_normalized(index):
            count += 2 * widths[index + 1]
    return count


def init_params(arch, seed):
    """Draw initial parameters.

    Weights are normal with variance ``2 / fan_in``, biases and shifts
    are zero and scales are one.

    Parameters
    ----------
    arch: :obj:`MlpArchitecture`
        Network architecture.
    seed: int
        Seed of the random number generator.

    Returns
    -------
    :obj:`numpy.ndarray`
        Parameter vector of length `arch.param_count`.
    """
    rng = np.random.default_rng(seed)
    params = np.zeros(arch.param_count, dtype=np.float64)
    for index, layer in enumerate(arch.layout):
        fan_in = arch.layer_widths[index]
        size = layer.weight.stop - layer.weight.start
        params[layer.weight] = rng.normal(0., np.sqrt(2. / fan_in), size)
        if layer.scale is not None:
            params[layer.scale] = 1.
    return params


def unpack(arch, params):
    """Return per-layer views of the weights, biases, scales and shifts.

    The weight of layer `l` has shape ``(..., fan_in, fan_out)`` where the
    leading axes are those of `params` without its last axis.
    """
    check_shape(arch, params)
    batch = params.shape[:-1]
    layers = []
    for index, layer in enumerate(arch.layout):
        fan_in = arch.layer_widths[index]
        fan_out = arch.layer_widths[index + 1]
        unpacked = {
            'weight': params[..., layer.weight].reshape(
                batch + (fan_in, fan_out)),
            'bias': params[..., layer.bias],
            'scale': None,
            'shift': None,
        }
        if layer.scale is not None:
            unpacked['scale'] = params[..., layer.scale]
            unpacked['shift'] = params[..., layer.shift]
        layers.append(unpacked)
    return layers


def pack(arch, layers):
    """Inverse of :func:`unpack`, used to assemble gradients."""
    first = layers[0]['weight']
    batch = first.shape[:-2]
    params = np.empty(batch + (arch.param_count, ), dtype=np.float64)
    for layer, values in zip(arch.layout, layers):
        params[..., layer.weight] = values['weight'].reshape(batch + (-1, ))
        params[..., layer.bias] = values['bias']
        if layer.scale is not None:
            params[..., layer.scale] = values['scale']
            params[..., layer.shift] = values['shift']
    return params


def check_shape(arch, params):
    """Check that the last axis of `params` matches the architecture."""
    params = np.asarray(params)
    if params.ndim not in (1, 2) or params.shape[-1] != arch.param_count:
        raise ValueError(
            "Parameters of shape {} do not match an architecture with {} "
            "parameters".format(params.shape, arch.param_count))
