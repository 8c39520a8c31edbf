"""Tests for :mod:`bpcfl.posterior._hmc` on a standard normal target."""
import numpy as np
import pytest

import tests
from bpcfl.nn import MlpArchitecture
from bpcfl.posterior import (HmcConfig, PriorSpec, TargetDensity,
                             hamiltonian, hmc_sample, kept_indices, leapfrog,
                             run_chain)

START = np.array([1., 0.5, -0.3, 0.2, 0.8])
MOMENTUM = np.array([0.2, -1., 0.5, 0.3, -0.4])


def standard_normal():
    """Prior-only density over the 5 parameters of a 4-to-1 layer."""
    return TargetDensity(MlpArchitecture([4, 1], 'swish', 'regression'),
                         PriorSpec(1.))


def effective_sample_size(chain):
    """Initial positive sequence estimate, capped at the chain length."""
    num = len(chain)
    centred = chain - chain.mean()
    autocov = np.correlate(centred, centred, mode='full')[num - 1:] / num
    rho = autocov / autocov[0]
    tau = -1.
    for lag in range(0, num - 1, 2):
        pair = rho[lag] + rho[lag + 1]
        if pair <= 0.:
            break
        tau += 2. * pair
    return num / max(tau, 1.)


def energy_error(step_size, num_steps):
    target = standard_normal()
    value = target.log_unnorm(START)
    params, momentum, new_value, _ = leapfrog(target.value_and_grad, START,
                                              MOMENTUM, step_size, num_steps,
                                              1.)
    return (hamiltonian(new_value, momentum, 1.) -
            hamiltonian(value, MOMENTUM, 1.))


def test_kept_indices():
    np.testing.assert_array_equal(kept_indices(10, 3), [5, 7, 9])
    np.testing.assert_array_equal(kept_indices(100, 50), np.arange(50, 100))
    np.testing.assert_array_equal(kept_indices(4, 10), np.arange(4))
    np.testing.assert_array_equal(kept_indices(10, 8), np.arange(2, 10))


def test_leapfrog_reversible():
    target = standard_normal()
    params, momentum, _, _ = leapfrog(target.value_and_grad, START, MOMENTUM,
                                      0.1, 25, 1.)
    back, back_momentum, _, _ = leapfrog(target.value_and_grad, params,
                                         -momentum, 0.1, 25, 1.)
    np.testing.assert_allclose(back, START, atol=1e-8)
    np.testing.assert_allclose(-back_momentum, MOMENTUM, atol=1e-8)


def test_energy_error_second_order():
    """Halving the step at fixed integration time quarters the error."""
    ratio = energy_error(0.1, 10) / energy_error(0.05, 20)
    assert 3. <= ratio <= 5.


@pytest.mark.parametrize('settings', [
    {'step_size': 0.},
    {'inverse_mass_diag': 0.},
    {'num_integration_steps': 0},
    {'num_samples_kept': 11},
])
def test_invalid_config(settings):
    values = dict(step_size=0.1, num_integration_steps=5,
                  inverse_mass_diag=1., num_steps=10, num_samples_kept=5)
    values.update(settings)
    with pytest.raises(ValueError):
        HmcConfig(**values)


class TestHmcSample(tests.Test):
    """Sample a 5-dimensional standard normal."""

    def setUp(self):
        self.cfg = HmcConfig(step_size=0.2, num_integration_steps=10,
                             inverse_mass_diag=1., num_steps=2000,
                             num_samples_kept=1000, seed=1)

    def test_moments(self):
        result = hmc_sample(standard_normal(), START, self.cfg)
        samples = np.stack(result.samples)
        self.assertEqual(samples.shape, (1000, 5))
        self.assertEqual(len(result.energy_errors), 2000)
        self.assertGreater(result.acceptance_rate, 0.8)
        for chain in samples.T:
            std_error = np.sqrt(chain.var() / effective_sample_size(chain))
            self.assertLess(abs(chain.mean()), 3. * std_error)
            self.assertTrue(0.7 <= chain.var() <= 1.3)

    def test_deterministic(self):
        cfg = HmcConfig(0.2, 10, 1., 50, 10, seed=3)
        first = hmc_sample(standard_normal(), START, cfg)
        second = hmc_sample(standard_normal(), START, cfg)
        self.assertArrayEqual(np.stack(first.samples),
                              np.stack(second.samples))

    def test_all_rejected(self):
        def value_and_grad(params):
            if np.any(params != START):
                return -np.inf, np.zeros_like(params)
            return 0., np.zeros_like(params)

        cfg = HmcConfig(0.2, 3, 1., 20, 5)
        result = run_chain(value_and_grad, START, cfg)
        self.assertEqual(result.acceptance_rate, 0.)
        for sample in result.samples:
            self.assertArrayEqual(sample, START)


def test_tiny_steps_always_accepted():
    cfg = HmcConfig(1e-6, 1, 1., 100, 10, seed=0)
    result = hmc_sample(standard_normal(), START, cfg)
    assert result.acceptance_rate == 1.


def test_effective_sample_size():
    rng = np.random.default_rng(0)
    independent = rng.normal(size=2000)
    assert effective_sample_size(independent) > 1000
    correlated = np.repeat(rng.normal(size=200), 10)
    assert effective_sample_size(correlated) < 400
