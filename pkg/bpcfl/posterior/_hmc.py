"""Hamiltonian Monte Carlo with a scalar inverse mass matrix."""
import collections
import logging

import numpy as np

from ..nn import NumericalError

logger = logging.getLogger(__name__)

HmcResult = collections.namedtuple(
    'HmcResult', ['samples', 'acceptance_rate', 'energy_errors'])


class HmcConfig:
    """Settings of an HMC chain.

    Parameters
    ----------
    step_size: float
        Leapfrog step size.
    num_integration_steps: int
        Leapfrog steps per proposal.
    inverse_mass_diag: float
        The inverse mass matrix is this value times the identity.
    num_steps: int
        Number of proposals.
    num_samples_kept: int
        Number of states returned, see :func:`kept_indices`.
    seed: int
        Seed of the momentum and acceptance draws.
    """

    def __init__(self, step_size, num_integration_steps, inverse_mass_diag,
                 num_steps, num_samples_kept, seed=0):
        if not step_size > 0:
            raise ValueError(
                "step_size should be positive, not {}".format(step_size))
        if not inverse_mass_diag > 0:
            raise ValueError("inverse_mass_diag should be positive, "
                             "not {}".format(inverse_mass_diag))
        if int(num_integration_steps) < 1 or int(num_steps) < 1:
            raise ValueError("HMC needs at least one proposal with at least "
                             "one integration step")
        if not 1 <= int(num_samples_kept) <= int(num_steps):
            raise ValueError(
                "num_samples_kept should be between 1 and num_steps ({}), "
                "not {}".format(num_steps, num_samples_kept))
        self.step_size = float(step_size)
        self.num_integration_steps = int(num_integration_steps)
        self.inverse_mass_diag = float(inverse_mass_diag)
        self.num_steps = int(num_steps)
        self.num_samples_kept = int(num_samples_kept)
        self.seed = int(seed)

    def to_dict(self):
        return {
            'step_size': self.step_size,
            'num_integration_steps': self.num_integration_steps,
            'inverse_mass_diag': self.inverse_mass_diag,
            'num_steps': self.num_steps,
            'num_samples_kept': self.num_samples_kept,
            'seed': self.seed,
        }

    @classmethod
    def from_dict(cls, settings):
        return cls(**settings)


def kept_indices(num_steps, num_samples_kept):
    """Return the chain positions whose states are kept.

    The first half of the chain is burn-in; the kept states are evenly
    spaced over the second half, ending with the final state. If more
    states are requested than the second half holds, the burn-in shrinks.

    >>> kept_indices(10, 3).tolist()
    [5, 7, 9]
    """
    if num_samples_kept >= num_steps:
        return np.arange(num_steps)
    start = min(num_steps // 2, num_steps - num_samples_kept)
    return np.round(np.linspace(start, num_steps - 1,
                                num_samples_kept)).astype(int)


def hamiltonian(log_prob, momentum, inverse_mass):
    """Return the total energy ``-log_prob + inverse_mass * |p|^2 / 2``."""
    return -log_prob + 0.5 * inverse_mass * np.sum(momentum**2)


def leapfrog(value_and_grad, params, momentum, step_size, num_steps,
             inverse_mass, grad=None):
    """Integrate Hamiltonian dynamics with the leapfrog scheme.

    Parameters
    ----------
    value_and_grad: callable
        Maps parameters to the log-density and its gradient.
    params, momentum: :obj:`numpy.ndarray`
        Starting position and momentum.
    step_size: float
        Integration step size.
    num_steps: int
        Number of leapfrog steps.
    inverse_mass: float
        Scalar inverse mass.
    grad: :obj:`numpy.ndarray`, optional
        Gradient at `params`, if already known.

    Returns
    -------
    tuple
        Final position, momentum, log-density and gradient.
    """
    if grad is None:
        _, grad = value_and_grad(params)
    momentum = momentum + 0.5 * step_size * grad
    value = None
    for step in range(num_steps):
        params = params + step_size * inverse_mass * momentum
        value, grad = value_and_grad(params)
        if step != num_steps - 1:
            momentum = momentum + step_size * grad
    momentum = momentum + 0.5 * step_size * grad
    return params, momentum, value, grad


def run_chain(value_and_grad, init, cfg):
    """Run HMC on any differentiable log-density.

    Parameters
    ----------
    value_and_grad: callable
        Maps parameters to the log-density and its gradient.
    init: :obj:`numpy.ndarray`
        Initial state.
    cfg: :obj:`HmcConfig`
        Chain settings.

    Returns
    -------
    :obj:`HmcResult`
    """
    rng = np.random.default_rng(cfg.seed)
    params = np.array(init, dtype=np.float64)
    value, grad = value_and_grad(params)
    momentum_std = 1. / np.sqrt(cfg.inverse_mass_diag)
    keep = set(kept_indices(cfg.num_steps, cfg.num_samples_kept).tolist())

    samples = []
    energy_errors = []
    accepted = 0
    for step in range(cfg.num_steps):
        momentum = rng.normal(0., momentum_std, size=params.shape)
        current = hamiltonian(value, momentum, cfg.inverse_mass_diag)
        try:
            proposal, new_momentum, new_value, new_grad = leapfrog(
                value_and_grad, params, momentum, cfg.step_size,
                cfg.num_integration_steps, cfg.inverse_mass_diag, grad)
            proposed = hamiltonian(new_value, new_momentum,
                                   cfg.inverse_mass_diag)
        except NumericalError:
            proposed = np.inf
        energy_error = proposed - current
        energy_errors.append(energy_error)
        log_uniform = np.log(rng.uniform())
        if np.isfinite(energy_error) and log_uniform < -energy_error:
            params, value, grad = proposal, new_value, new_grad
            accepted += 1
        else:
            logger.debug("HMC step %s rejected with energy error %s", step,
                         energy_error)
        if step in keep:
            samples.append(params.copy())

    acceptance_rate = accepted / cfg.num_steps
    if not accepted:
        logger.warning("All %s HMC proposals were rejected", cfg.num_steps)
    else:
        logger.debug("HMC acceptance rate %.3f", acceptance_rate)
    return HmcResult(samples, acceptance_rate, np.array(energy_errors))


def hmc_sample(target, init, cfg):
    """Sample a :class:`TargetDensity` with HMC.

    Returns
    -------
    :obj:`HmcResult`
        The kept samples, the acceptance rate and the energy error of
        every proposal.
    """
    logger.debug("Running HMC for %s steps, keeping %s samples",
                 cfg.num_steps, cfg.num_samples_kept)
    return run_chain(target.value_and_grad, init, cfg)
