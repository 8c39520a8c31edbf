"""Tests for :mod:`bpcfl.nn._network`."""
import numpy as np
import pytest

import tests
from bpcfl.nn import (MlpArchitecture, NumericalError, forward, group_norm,
                      init_params, swish)


def test_swish():
    values = np.array([-40., 0., 1., 40.])
    result = swish(values)
    assert result[1] == 0.
    assert result[2] == pytest.approx(1. / (1. + np.exp(-1.)))
    assert result[3] == pytest.approx(40.)
    assert abs(result[0]) < 1e-15


class TestGroupNorm(tests.Test):
    """Test group normalization."""

    def test_groups_are_standardized(self):
        rng = np.random.default_rng(0)
        values = rng.normal(3., 2., size=(5, 8))
        normed, inv_std = group_norm(values, 2, 1e-5)
        grouped = normed.reshape(5, 2, 4)
        self.assertArrayAlmostEqual(grouped.mean(axis=-1), np.zeros((5, 2)))
        self.assertArrayAlmostEqual(grouped.var(axis=-1), np.ones((5, 2)),
                                    decimal=4)
        self.assertEqual(inv_std.shape, (5, 2, 1))

    def test_constant_group(self):
        normed, _ = group_norm(np.full((1, 4), 7.), 2, 1e-5)
        self.assertArrayEqual(normed, np.zeros((1, 4)))


class TestForward(tests.Test):
    """Test the forward pass."""

    def setUp(self):
        self.arch = MlpArchitecture([1, 3, 1], 'relu', 'regression')
        self.inputs = np.array([[-1.], [0.5], [2.]])

    def test_linear_network(self):
        arch = MlpArchitecture([2, 1], 'swish', 'regression')
        params = np.array([2., -1., 0.5])
        result = forward(arch, params, np.array([[1., 1.], [0., 2.]]))
        self.assertArrayEqual(result, [[1.5], [-1.5]])

    def test_stack_matches_rows(self):
        stack = np.stack([init_params(self.arch, seed) for seed in range(4)])
        result = forward(self.arch, stack, self.inputs)
        self.assertEqual(result.shape, (4, 3, 1))
        for index, params in enumerate(stack):
            self.assertArrayAlmostEqual(
                result[index], forward(self.arch, params, self.inputs),
                decimal=12)

    def test_wrong_input_dimension(self):
        with self.assertRaises(ValueError):
            forward(self.arch, init_params(self.arch, 0), np.zeros((3, 2)))

    def test_non_finite(self):
        params = init_params(self.arch, 0)
        params[0] = np.nan
        with self.assertRaises(NumericalError):
            forward(self.arch, params, self.inputs)


def test_zero_network():
    arch = MlpArchitecture([3, 2], 'swish', 'regression')
    result = forward(arch, np.zeros(arch.param_count), np.ones((4, 3)))
    np.testing.assert_array_equal(result, np.zeros((4, 2)))


def test_single_group_of_two():
    normed, _ = group_norm(np.array([[1., 5.], [-3., 0.]]), 1, 1e-5)
    np.testing.assert_allclose(normed.mean(axis=1), [0., 0.], atol=1e-12)
    np.testing.assert_allclose(normed.var(axis=1), [1., 1.], rtol=1e-5)
