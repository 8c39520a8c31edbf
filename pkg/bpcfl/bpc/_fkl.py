"""Coreset learning with contrastive forward-KL gradients.

Every update contrasts the data-term gradient
``grad_C log p(y_hat | f(Z, theta_D))`` at parameters read ahead on an
expert trajectory with the same gradient at parameters fitted to the
coreset itself, both smoothed with Gaussian parameter noise, and moves
the coreset along the difference.
"""
import logging

import numpy as np

from ..nn import NumericalError, grad_data, grad_params
from ..posterior import OptConfig, ascend
from ._coreset import CoresetError, init_coreset
from ._trajectory import PretrainConfig, pretrain_bank

logger = logging.getLogger(__name__)


class BpcFklConfig:
    """Settings of client-side coreset learning.

    Parameters
    ----------
    num_points: int
        Coreset size K.
    sigma_z: float
        Standard deviation of the pseudo-input initialization.
    step_size_x, step_size_y: float
        Learning rates of the pseudo-inputs and pseudo-labels; labels are
        frozen when `step_size_y` is 0.
    num_updates: int
        Number of coreset updates.
    coreset_chain_length: int
        Sampler steps on the coreset likelihood per update (L_C).
    data_chain_length: int
        Optimizer steps between the start checkpoint and the data-side
        parameters (L_D); a multiple of the pretrain save interval.
    num_noise_samples: int
        Gaussian smoothing samples per contrast pair (S).
    noise_std: float
        Standard deviation of the smoothing noise.
    sampler: str
        Optimizer of the coreset sampler, ``adam`` or ``sgd``.
    sampler_step_size: float
        Step size of the coreset sampler.
    batch_trajectories: int
        Independent contrast pairs averaged per update.
    pretrain: :obj:`PretrainConfig` or dict
        Expert trajectory settings.
    max_abs: float
        Largest magnitude a pseudo-input or pseudo-label may reach before
        learning is stopped as diverged.
    """

    def __init__(self, num_points=6, sigma_z=1.0, step_size_x=0.01,
                 step_size_y=1.0, num_updates=400, coreset_chain_length=200,
                 data_chain_length=150, num_noise_samples=10, noise_std=1e-2,
                 sampler='adam', sampler_step_size=1e-2,
                 batch_trajectories=10, pretrain=None, max_abs=1e3):
        if pretrain is None:
            pretrain = PretrainConfig()
        elif isinstance(pretrain, dict):
            pretrain = PretrainConfig.from_dict(pretrain)
        if int(num_points) < 1:
            raise ValueError("num_points should be positive")
        if int(data_chain_length) < 1 or int(coreset_chain_length) < 1:
            raise ValueError("Chain lengths should be positive")
        if int(data_chain_length) % pretrain.save_interval:
            raise ValueError(
                "data_chain_length {} is not a multiple of the save interval "
                "{}".format(data_chain_length, pretrain.save_interval))
        if int(data_chain_length) > pretrain.num_steps:
            raise ValueError(
                "data_chain_length {} exceeds the {} pretraining "
                "steps".format(data_chain_length, pretrain.num_steps))
        if int(num_noise_samples) < 1 or int(batch_trajectories) < 1:
            raise ValueError(
                "num_noise_samples and batch_trajectories should be positive")
        if not noise_std >= 0:
            raise ValueError("noise_std should be non-negative")
        if not max_abs > 0:
            raise ValueError("max_abs should be positive, not {}".format(
                max_abs))
        self.num_points = int(num_points)
        self.sigma_z = float(sigma_z)
        self.step_size_x = float(step_size_x)
        self.step_size_y = float(step_size_y)
        self.num_updates = int(num_updates)
        self.coreset_chain_length = int(coreset_chain_length)
        self.data_chain_length = int(data_chain_length)
        self.num_noise_samples = int(num_noise_samples)
        self.noise_std = float(noise_std)
        self.sampler = sampler
        self.sampler_step_size = float(sampler_step_size)
        self.batch_trajectories = int(batch_trajectories)
        self.pretrain = pretrain
        self.max_abs = float(max_abs)
        # validates the sampler settings
        self.sampler_config

    @property
    def labels_frozen(self):
        return self.step_size_y == 0.

    @property
    def sampler_config(self):
        return OptConfig(self.sampler, self.sampler_step_size,
                         self.coreset_chain_length)

    @property
    def checkpoint_offset(self):
        """Checkpoints between the start and the data-side parameters."""
        return self.data_chain_length // self.pretrain.save_interval

    def to_dict(self):
        return {
            'num_points': self.num_points,
            'sigma_z': self.sigma_z,
            'step_size_x': self.step_size_x,
            'step_size_y': self.step_size_y,
            'num_updates': self.num_updates,
            'coreset_chain_length': self.coreset_chain_length,
            'data_chain_length': self.data_chain_length,
            'num_noise_samples': self.num_noise_samples,
            'noise_std': self.noise_std,
            'sampler': self.sampler,
            'sampler_step_size': self.sampler_step_size,
            'batch_trajectories': self.batch_trajectories,
            'pretrain': self.pretrain.to_dict(),
            'max_abs': self.max_abs,
        }

    @classmethod
    def from_dict(cls, settings):
        return cls(**settings)


def sample_starts(bank, cfg, rng, size):
    """Draw trajectories and start checkpoints for contrast pairs.

    A start index `r` is drawn uniformly among the checkpoints that still
    have a checkpoint `data_chain_length` steps ahead.

    Returns
    -------
    tuple of :obj:`numpy.ndarray`
        Trajectory indices and start checkpoint indices.
    """
    offset = cfg.checkpoint_offset
    num_starts = bank.num_checkpoints - offset
    if num_starts < 1:
        raise CoresetError(
            "Trajectories with {} checkpoints cannot reach {} steps "
            "ahead".format(bank.num_checkpoints, cfg.data_chain_length))
    trajectories = rng.integers(len(bank), size=size)
    starts = rng.integers(num_starts, size=size)
    return trajectories, starts


def fit_to_coreset(arch, coreset, params, cfg, lik):
    """Run the coreset sampler: ascend ``log p(y_hat | f(Z, theta))``."""

    def grad_fn(theta):
        return grad_params(arch, theta, coreset.inputs, coreset.labels, lik)

    return ascend(grad_fn, params, cfg.sampler_config)


def contrastive_gradient(arch, coreset, theta_data, theta_coreset, noise_data,
                         noise_coreset, lik):
    """Estimate the coreset gradient of the local objective.

    Parameters
    ----------
    arch: :obj:`bpcfl.nn.MlpArchitecture`
        Network architecture.
    coreset: :obj:`Pseudocoreset`
        Current coreset.
    theta_data, theta_coreset: :obj:`numpy.ndarray`
        Data-side and coreset-side parameters, ``(B, P)``.
    noise_data, noise_coreset: :obj:`numpy.ndarray`
        Smoothing noise, ``(B, S, P)``.
    lik: :obj:`bpcfl.nn.LikelihoodSpec`
        Observation model.

    Returns
    -------
    tuple of :obj:`numpy.ndarray`
        Gradient w.r.t. the pseudo-inputs and the pseudo-labels, averaged
        over all ``B * S`` noisy pairs.
    """
    num_params = theta_data.shape[-1]
    perturbed_data = (theta_data[:, np.newaxis, :] + noise_data).reshape(
        -1, num_params)
    perturbed_coreset = (theta_coreset[:, np.newaxis, :] +
                         noise_coreset).reshape(-1, num_params)
    data_inputs, data_labels = grad_data(arch, perturbed_data, coreset.inputs,
                                         coreset.labels, lik)
    coreset_inputs, coreset_labels = grad_data(arch, perturbed_coreset,
                                               coreset.inputs, coreset.labels,
                                               lik)
    return ((data_inputs - coreset_inputs).mean(axis=0),
            (data_labels - coreset_labels).mean(axis=0))


def gradient_scale(lik):
    """Return the preconditioner of the coreset gradient.

    The observation variance for a Gaussian likelihood, so that a unit
    label step moves a pseudo-label onto the data-side prediction.
    """
    return lik.sigma**2 if lik.is_gaussian else 1.


def check_bounded(coreset, cfg):
    """Raise :class:`CoresetError` if a coreset value exceeds `max_abs`."""
    largest = max(np.max(np.abs(coreset.inputs)),
                  np.max(np.abs(coreset.labels)))
    if not largest <= cfg.max_abs:
        raise CoresetError(
            "Coreset of client {} diverged: largest magnitude {:.3g} exceeds "
            "{:.3g}".format(coreset.owner, largest, cfg.max_abs))


def fkl_update(coreset, bank, arch, cfg, rng, lik):
    """Apply one contrastive update to a coreset.

    Parameters
    ----------
    coreset: :obj:`Pseudocoreset`
        Current coreset.
    bank: :obj:`TrajectoryBank`
        Expert trajectories of the owning client.
    arch: :obj:`bpcfl.nn.MlpArchitecture`
        Network architecture.
    cfg: :obj:`BpcFklConfig`
        Learning settings.
    rng: :obj:`numpy.random.Generator`
        Random stream of the owning client.
    lik: :obj:`bpcfl.nn.LikelihoodSpec`
        Observation model.

    Returns
    -------
    tuple
        The updated :obj:`Pseudocoreset` and the preconditioned gradient
        pair ``(g_Z, g_y)`` that produced it.

    Raises
    ------
    CoresetError
        If the gradient is not finite or the updated coreset is out of
        bounds; the coreset is left unchanged.
    """
    if bank.param_count != arch.param_count:
        raise CoresetError(
            "Trajectory bank with {} parameters does not match an "
            "architecture with {}".format(bank.param_count, arch.param_count))
    size = cfg.batch_trajectories
    trajectories, starts = sample_starts(bank, cfg, rng, size)
    theta_start = np.stack([
        bank.checkpoint(t, r) for t, r in zip(trajectories, starts)
    ])
    theta_data = np.stack([
        bank.checkpoint(t, r + cfg.checkpoint_offset)
        for t, r in zip(trajectories, starts)
    ])
    shape = (size, cfg.num_noise_samples, arch.param_count)
    try:
        theta_coreset = fit_to_coreset(arch, coreset, theta_start, cfg, lik)
        noise_data = rng.normal(0., cfg.noise_std, size=shape)
        noise_coreset = rng.normal(0., cfg.noise_std, size=shape)
        grad_inputs, grad_labels = contrastive_gradient(
            arch, coreset, theta_data, theta_coreset, noise_data,
            noise_coreset, lik)
    except NumericalError as exc:
        raise CoresetError(
            "Coreset update of client {} failed: {}".format(
                coreset.owner, exc))
    if not (np.all(np.isfinite(grad_inputs))
            and np.all(np.isfinite(grad_labels))):
        raise CoresetError(
            "Non-finite coreset gradient for client {}".format(coreset.owner))

    scale = gradient_scale(lik)
    grad_inputs = scale * grad_inputs
    grad_labels = scale * grad_labels
    inputs = coreset.inputs + cfg.step_size_x * grad_inputs
    labels = coreset.labels
    if not coreset.frozen and cfg.step_size_y:
        labels = labels + cfg.step_size_y * grad_labels
    updated = coreset.replace(inputs=inputs, labels=labels)
    check_bounded(updated, cfg)
    return updated, (grad_inputs, grad_labels)


def learn_coreset(shard, arch, prior, cfg, lik, seed=0, bank=None,
                  init=None):
    """Learn the pseudocoreset of one client.

    Pretrains a trajectory bank unless one is given, initializes the
    coreset unless `init` is given and applies `cfg.num_updates`
    contrastive updates. The result depends only on the shard, the
    settings, `init` and `seed`.

    Returns
    -------
    :obj:`Pseudocoreset`
    """
    init_seed, update_seed = np.random.SeedSequence(
        [int(seed), shard.client_id]).spawn(2)
    if bank is None:
        bank = pretrain_bank(shard, arch, prior, cfg, lik)
    label_mode = 'frozen' if cfg.labels_frozen else 'learnable'
    if init is None:
        coreset = init_coreset(shard, cfg.num_points, cfg.sigma_z,
                               arch.task, init_seed, label_mode)
    else:
        coreset = init
    rng = np.random.default_rng(update_seed)
    logger.info("Learning a coreset of %s points for client %s",
                cfg.num_points, shard.client_id)
    report_every = max(1, cfg.num_updates // 10)
    for update in range(1, cfg.num_updates + 1):
        coreset, (grad_inputs, grad_labels) = fkl_update(
            coreset, bank, arch, cfg, rng, lik)
        if update % report_every == 0:
            logger.debug(
                "Client %s update %s/%s: |g_Z| = %.3g, |g_y| = %.3g",
                shard.client_id, update, cfg.num_updates,
                np.linalg.norm(grad_inputs), np.linalg.norm(grad_labels))
    return coreset
