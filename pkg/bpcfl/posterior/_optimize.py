"""First-order optimizers and MAP estimation."""
import logging

import numpy as np

from ..nn import NumericalError

logger = logging.getLogger(__name__)

OPTIMIZERS = ('sgd', 'adam')


class DivergenceError(NumericalError):
    """An iterate of an optimizer or sampler became non-finite."""


class OptConfig:
    """Settings of a first-order optimizer run.

    Parameters
    ----------
    optimizer: str
        ``sgd`` (optionally with momentum) or ``adam``.
    step_size: float
        Learning rate.
    num_steps: int
        Number of updates.
    momentum: float
        Heavy-ball momentum of SGD, in [0, 1).
    beta1, beta2, epsilon: float
        Adam moment decay rates and denominator offset.
    """

    def __init__(self, optimizer='adam', step_size=1e-2, num_steps=100,
                 momentum=0., beta1=0.9, beta2=0.999, epsilon=1e-8):
        if optimizer not in OPTIMIZERS:
            raise ValueError("Unknown optimizer '{}', choose from: {}".format(
                optimizer, ', '.join(OPTIMIZERS)))
        if not step_size > 0:
            raise ValueError(
                "step_size should be positive, not {}".format(step_size))
        if int(num_steps) < 0:
            raise ValueError(
                "num_steps should be non-negative, not {}".format(num_steps))
        if not 0 <= momentum < 1:
            raise ValueError(
                "momentum should be in [0, 1), not {}".format(momentum))
        self.optimizer = optimizer
        self.step_size = float(step_size)
        self.num_steps = int(num_steps)
        self.momentum = float(momentum)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.epsilon = float(epsilon)

    def to_dict(self):
        settings = {
            'optimizer': self.optimizer,
            'step_size': self.step_size,
            'num_steps': self.num_steps,
        }
        if self.optimizer == 'sgd':
            settings['momentum'] = self.momentum
        else:
            settings.update(beta1=self.beta1, beta2=self.beta2,
                            epsilon=self.epsilon)
        return settings

    @classmethod
    def from_dict(cls, settings):
        return cls(**settings)

    def __repr__(self):
        return "OptConfig({})".format(self.to_dict())


class Sgd:
    """Stochastic gradient descent with heavy-ball momentum."""

    def __init__(self, step_size, momentum=0.):
        self.step_size = step_size
        self.momentum = momentum
        self._velocity = None

    def step(self, params, grad):
        """Return `params` moved against `grad`."""
        if self.momentum:
            if self._velocity is None:
                self._velocity = np.zeros_like(grad)
            self._velocity = self.momentum * self._velocity + grad
            grad = self._velocity
        return params - self.step_size * grad


class Adam:
    """Adam with bias-corrected moment estimates."""

    def __init__(self, step_size, beta1=0.9, beta2=0.999, epsilon=1e-8):
        self.step_size = step_size
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self._first = None
        self._second = None
        self._count = 0

    def step(self, params, grad):
        """Return `params` moved against `grad`."""
        if self._first is None:
            self._first = np.zeros_like(grad)
            self._second = np.zeros_like(grad)
        self._count += 1
        self._first = self.beta1 * self._first + (1. - self.beta1) * grad
        self._second = (self.beta2 * self._second +
                        (1. - self.beta2) * grad**2)
        first = self._first / (1. - self.beta1**self._count)
        second = self._second / (1. - self.beta2**self._count)
        return params - self.step_size * first / (np.sqrt(second) +
                                                  self.epsilon)


def make_optimizer(cfg):
    """Return a fresh optimizer for an :class:`OptConfig`."""
    if cfg.optimizer == 'sgd':
        return Sgd(cfg.step_size, cfg.momentum)
    return Adam(cfg.step_size, cfg.beta1, cfg.beta2, cfg.epsilon)


def ascend(grad_fn, init, cfg, save_interval=None):
    """Run gradient ascent on an objective.

    Parameters
    ----------
    grad_fn: callable
        Maps parameters to the gradient of the objective to maximize.
    init: :obj:`numpy.ndarray`
        Starting point, a vector or a stack of vectors.
    cfg: :obj:`OptConfig`
        Optimizer settings.
    save_interval: int, optional
        If given, also return the iterates after every `save_interval`
        steps, starting with `init`.

    Returns
    -------
    :obj:`numpy.ndarray` or tuple
        The final iterate, and the list of checkpoints if requested.

    Raises
    ------
    DivergenceError
        If an iterate becomes non-finite.
    """
    optimizer = make_optimizer(cfg)
    params = np.array(init, dtype=np.float64)
    checkpoints = [params.copy()] if save_interval else None
    for step in range(1, cfg.num_steps + 1):
        try:
            grad = grad_fn(params)
        except NumericalError as exc:
            raise DivergenceError(
                "Optimization diverged at step {}: {}".format(step, exc))
        params = optimizer.step(params, -grad)
        if not np.all(np.isfinite(params)):
            raise DivergenceError(
                "Optimization diverged at step {}".format(step))
        if save_interval and step % save_interval == 0:
            checkpoints.append(params.copy())
    if save_interval:
        return params, checkpoints
    return params


def map_optimize(target, init, cfg):
    """Return a MAP estimate of a :class:`TargetDensity`.

    Ascends ``log_unnorm`` from `init` for `cfg.num_steps` steps and
    returns the final iterate.
    """
    logger.debug("Running %s for %s steps with step size %s", cfg.optimizer,
                 cfg.num_steps, cfg.step_size)

    def grad_fn(params):
        _, grad = target.value_and_grad(params)
        return grad

    return ascend(grad_fn, init, cfg)
