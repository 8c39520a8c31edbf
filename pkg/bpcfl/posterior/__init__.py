"""Posterior densities, MAP estimation, HMC and predictive averaging."""
from ._hmc import (HmcConfig, HmcResult, hamiltonian, hmc_sample,
                   kept_indices, leapfrog, run_chain)
from ._optimize import (Adam, DivergenceError, OptConfig, Sgd, ascend,
                        make_optimizer, map_optimize)
from ._predictive import Predictive, predictive_mc
from ._target import (LikelihoodTerm, PriorSpec, TargetDensity,
                      grad_log_unnorm, log_unnorm)

__all__ = [
    # Densities
    'PriorSpec',
    'LikelihoodTerm',
    'TargetDensity',
    'log_unnorm',
    'grad_log_unnorm',
    # Optimization
    'OptConfig',
    'Sgd',
    'Adam',
    'make_optimizer',
    'ascend',
    'map_optimize',
    'DivergenceError',
    # Sampling
    'HmcConfig',
    'HmcResult',
    'hamiltonian',
    'leapfrog',
    'kept_indices',
    'run_chain',
    'hmc_sample',
    # Prediction
    'Predictive',
    'predictive_mc',
]
