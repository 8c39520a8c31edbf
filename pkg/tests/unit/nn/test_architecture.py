"""Tests for :mod:`bpcfl.nn._architecture`."""
import numpy as np
import pytest

import tests
from bpcfl.nn import (GroupNormSpec, MlpArchitecture, check_shape,
                      classification_mlp, init_params, param_count,
                      regression_mlp, unpack)


def test_regression_param_count():
    """The swish regression network has 33409 parameters."""
    assert param_count(regression_mlp()) == 33409


def test_classification_param_count():
    """Group normalization adds a scale and a shift per channel."""
    arch = classification_mlp()
    plain = MlpArchitecture(arch.layer_widths, 'relu', 'classification')
    assert param_count(arch) == 5552
    assert param_count(arch) - param_count(plain) == 4 * 50


@pytest.mark.parametrize('widths,activation,task', [
    ([1], 'swish', 'regression'),
    ([1, 0, 1], 'swish', 'regression'),
    ([1, 4, 1], 'tanh', 'regression'),
    ([1, 4, 1], 'swish', 'density'),
])
def test_invalid_architecture(widths, activation, task):
    with pytest.raises(ValueError):
        MlpArchitecture(widths, activation, task)


def test_group_norm_width_not_divisible():
    with pytest.raises(ValueError):
        MlpArchitecture([2, 5, 5, 2], 'relu', 'classification',
                        GroupNormSpec(2))


def test_group_norm_from_dict():
    arch = MlpArchitecture([2, 4, 4, 2], 'relu', 'classification',
                           {'num_groups': 2})
    assert arch.group_norm == GroupNormSpec(2)
    assert MlpArchitecture.from_dict(arch.to_dict()) == arch


class TestInitParams(tests.Test):
    """Test initialization and the parameter layout."""

    def setUp(self):
        self.arch = MlpArchitecture([2, 4, 4, 2], 'relu', 'classification',
                                    GroupNormSpec(2))

    def test_deterministic(self):
        self.assertArrayEqual(init_params(self.arch, 3),
                              init_params(self.arch, 3))
        self.assertFalse(
            np.array_equal(init_params(self.arch, 3),
                           init_params(self.arch, 4)))

    def test_layout(self):
        params = init_params(self.arch, 0)
        self.assertEqual(params.shape, (self.arch.param_count, ))
        layers = unpack(self.arch, params)
        self.assertEqual(len(layers), 3)
        self.assertEqual(layers[0]['weight'].shape, (2, 4))
        self.assertArrayEqual(layers[0]['bias'], np.zeros(4))
        self.assertArrayEqual(layers[0]['scale'], np.ones(4))
        self.assertArrayEqual(layers[1]['shift'], np.zeros(4))
        self.assertIsNone(layers[2]['scale'])

    def test_unpack_stack(self):
        stack = np.stack([init_params(self.arch, seed) for seed in range(3)])
        layers = unpack(self.arch, stack)
        self.assertEqual(layers[1]['weight'].shape, (3, 4, 4))
        self.assertArrayEqual(layers[1]['weight'][2],
                              unpack(self.arch, stack[2])[1]['weight'])

    def test_check_shape(self):
        with self.assertRaises(ValueError):
            check_shape(self.arch, np.zeros(self.arch.param_count + 1))
        with self.assertRaises(ValueError):
            check_shape(self.arch, np.zeros((2, 2, self.arch.param_count)))


def _enumerated_count(arch):
    """Count parameters by walking the slice layout."""
    offset = 0
    for layer in arch.layout:
        for part in layer:
            if part is not None:
                assert part.start == offset
                offset = part.stop
    return offset


@pytest.mark.parametrize('arch', [
    MlpArchitecture([1, 2, 1], 'swish', 'regression'),
    classification_mlp(),
    regression_mlp(),
])
def test_param_count_matches_layout(arch):
    assert param_count(arch) == _enumerated_count(arch)


def test_tiny_param_count():
    assert param_count(MlpArchitecture([1, 2, 1], 'swish', 'regression')) == 7


def test_init_weight_variance():
    arch = regression_mlp()
    block = unpack(arch, init_params(arch, 0))[1]['weight']
    assert block.shape == (128, 128)
    assert abs(block.var() - 2. / 128) <= 0.3 * 2. / 128
