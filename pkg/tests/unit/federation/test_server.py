"""Tests for :mod:`bpcfl.federation._server`."""
import tempfile

import numpy as np
import pytest

import tests
from bpcfl.bpc import Pseudocoreset
from bpcfl.federation import (ServerCoreset, aggregate, client_weights,
                              server_target)
from bpcfl.nn import MlpArchitecture, gaussian, init_params
from bpcfl.posterior import PriorSpec

ARCH = MlpArchitecture([1, 4, 1], 'swish', 'regression')
LIK = gaussian(0.3)


def coreset(owner, seed=0):
    rng = np.random.default_rng([owner, seed])
    return Pseudocoreset(rng.normal(size=(3, 1)), rng.normal(size=(3, 1)),
                         owner)


def test_equal_sizes():
    np.testing.assert_array_equal(client_weights([40, 40, 40, 40]),
                                  np.ones(4))


def test_weights_sum_to_num_clients():
    weights = client_weights([10, 30, 60])
    np.testing.assert_allclose(weights, [0.3, 0.9, 1.8])
    assert weights.sum() == pytest.approx(3.)


@pytest.mark.parametrize('sizes', [[], [3, 0]])
def test_invalid_sizes(sizes):
    with pytest.raises(ValueError):
        client_weights(sizes)


def test_single_client():
    result = aggregate([coreset(0)], [80])
    assert result.num_clients == 1
    assert result.weights == [1.]
    assert result.coresets[0] is not None
    assert result.total_data_size == 80


def test_aggregate_length_mismatch():
    with pytest.raises(ValueError):
        aggregate([coreset(0)], [1, 2])


class TestServerTarget(tests.Test):
    """Test the coreset posterior of the server."""

    def setUp(self):
        self.prior = PriorSpec(0.5)
        self.params = np.stack([init_params(ARCH, s) for s in range(4)])

    def log_unnorm(self, entries):
        target = server_target(ServerCoreset(entries, 10), ARCH, self.prior,
                               LIK)
        return target.log_unnorm(self.params)

    def test_empty_is_prior(self):
        result = self.log_unnorm([])
        self.assertArrayAllClose(result, self.prior.log_density(self.params))

    def test_additivity(self):
        first = coreset(0)
        doubled = self.log_unnorm([(first, 2.)])
        twice = self.log_unnorm([(first, 1.), (first, 1.)])
        self.assertArrayAllClose(doubled, twice, rtol=1e-12)

    def test_linearity(self):
        entries = [(coreset(0), 0.7), (coreset(1), 1.3)]
        prior = self.prior.log_density(self.params)
        data = self.log_unnorm(entries) - prior
        scaled = self.log_unnorm([(c, 3. * w) for c, w in entries]) - prior
        self.assertArrayAllClose(scaled, 3. * data, rtol=1e-10)

    def test_permutation_invariance(self):
        entries = [(coreset(0), 0.7), (coreset(1), 1.3), (coreset(2), 1.)]
        self.assertArrayAllClose(self.log_unnorm(entries),
                                 self.log_unnorm(entries[::-1]), rtol=1e-12)

    def test_json_round_trip(self):
        server = aggregate([coreset(0), coreset(3)], [16, 48])
        with tempfile.TemporaryDirectory() as directory:
            filename = directory + '/server/server_coreset.json'
            server.save(filename)
            loaded = ServerCoreset.load(filename)
        self.assertEqual(loaded, server)
        self.assertEqual(loaded.weights, [0.5, 1.5])
