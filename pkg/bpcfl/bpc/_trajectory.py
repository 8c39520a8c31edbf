"""Banks of pretrained MAP trajectories on a client's local posterior."""
import glob
import logging
import os

import numpy as np

from ..nn import init_params
from ..posterior import DivergenceError, OptConfig, TargetDensity, ascend
from ._coreset import CoresetError

logger = logging.getLogger(__name__)

HEADER_DTYPE = np.dtype('<i8')
VALUE_DTYPE = np.dtype('<f8')


class PretrainConfig:
    """Settings of the expert trajectories.

    Parameters
    ----------
    num_trajectories: int
        Number of trajectories, one per seed.
    num_steps: int
        Optimizer steps per trajectory (T).
    save_interval: int
        Steps between checkpoints.
    step_size: float
        Optimizer step size.
    optimizer: str
        ``adam`` or ``sgd``.
    seeds: list of int, optional
        Initialization seeds shared by all clients; defaults to
        ``range(num_trajectories)``.
    batch_size: int, optional
        Minibatch size; full batch if None.
    """

    def __init__(self, num_trajectories=10, num_steps=300, save_interval=5,
                 step_size=1e-2, optimizer='adam', seeds=None,
                 batch_size=None):
        if int(save_interval) < 1:
            raise ValueError("save_interval should be positive, not "
                             "{}".format(save_interval))
        if seeds is None:
            seeds = list(range(int(num_trajectories)))
        seeds = [int(seed) for seed in seeds]
        if len(seeds) != int(num_trajectories):
            raise ValueError("Got {} seeds for {} trajectories".format(
                len(seeds), num_trajectories))
        self.num_trajectories = int(num_trajectories)
        self.num_steps = int(num_steps)
        self.save_interval = int(save_interval)
        self.step_size = float(step_size)
        self.optimizer = optimizer
        self.seeds = seeds
        self.batch_size = None if batch_size is None else int(batch_size)

    @property
    def opt_config(self):
        return OptConfig(self.optimizer, self.step_size, self.num_steps)

    def to_dict(self):
        return {
            'num_trajectories': self.num_trajectories,
            'num_steps': self.num_steps,
            'save_interval': self.save_interval,
            'step_size': self.step_size,
            'optimizer': self.optimizer,
            'seeds': list(self.seeds),
            'batch_size': self.batch_size,
        }

    @classmethod
    def from_dict(cls, settings):
        return cls(**settings)


class TrajectoryBank:
    """Checkpointed optimization trajectories.

    Parameters
    ----------
    trajectories: list of :obj:`numpy.ndarray`
        One array of shape ``(num_checkpoints, P)`` per trajectory, the
        checkpoints saved every `save_interval` steps from step 0.
    seeds: list of int
        Initialization seed of each trajectory.
    save_interval: int
        Steps between checkpoints.
    total_steps: int
        Optimizer steps per trajectory.
    """

    def __init__(self, trajectories, seeds, save_interval, total_steps):
        if not trajectories:
            raise CoresetError("A trajectory bank needs a trajectory")
        expected = total_steps // save_interval + 1
        trajectories = [np.asarray(t, dtype=np.float64) for t in trajectories]
        for seed, trajectory in zip(seeds, trajectories):
            if len(trajectory) != expected:
                raise ValueError(
                    "Trajectory of seed {} has {} checkpoints, expected "
                    "{}".format(seed, len(trajectory), expected))
        self.trajectories = trajectories
        self.seeds = [int(seed) for seed in seeds]
        self.save_interval = int(save_interval)
        self.total_steps = int(total_steps)

    def __len__(self):
        return len(self.trajectories)

    @property
    def num_checkpoints(self):
        return self.total_steps // self.save_interval + 1

    @property
    def param_count(self):
        return self.trajectories[0].shape[1]

    @property
    def checkpoint_steps(self):
        """Optimizer step of every checkpoint."""
        return [i * self.save_interval for i in range(self.num_checkpoints)]

    def checkpoint(self, trajectory, index):
        """Return checkpoint `index` of trajectory `trajectory`."""
        return self.trajectories[trajectory][index]

    def save(self, directory):
        """Spill the bank to one binary file per trajectory.

        Every file starts with four little-endian 64-bit integers
        ``(P, num_checkpoints, save_interval, seed)`` followed by the
        checkpoints as little-endian 64-bit reals.
        """
        if not os.path.exists(directory):
            os.makedirs(directory)
        for index, (seed, trajectory) in enumerate(
                zip(self.seeds, self.trajectories)):
            filename = os.path.join(directory,
                                    'trajectory_{:04d}.bin'.format(index))
            header = np.array([
                trajectory.shape[1],
                trajectory.shape[0],
                self.save_interval,
                seed,
            ], dtype=HEADER_DTYPE)
            with open(filename, 'wb') as file:
                file.write(header.tobytes())
                file.write(trajectory.astype(VALUE_DTYPE).tobytes())
        logger.debug("Saved %s trajectories to %s", len(self), directory)

    @classmethod
    def load(cls, directory):
        """Read a bank written by :meth:`save`."""
        filenames = sorted(
            glob.glob(os.path.join(directory, 'trajectory_*.bin')))
        if not filenames:
            raise FileNotFoundError(
                "No trajectory files found in {}".format(directory))
        trajectories = []
        seeds = []
        save_interval = None
        for filename in filenames:
            with open(filename, 'rb') as file:
                content = file.read()
            header = np.frombuffer(content[:4 * HEADER_DTYPE.itemsize],
                                   dtype=HEADER_DTYPE)
            num_params, num_checkpoints, interval, seed = (int(v)
                                                           for v in header)
            values = np.frombuffer(content[4 * HEADER_DTYPE.itemsize:],
                                   dtype=VALUE_DTYPE)
            trajectories.append(
                values.reshape(num_checkpoints, num_params).astype(
                    np.float64))
            seeds.append(seed)
            save_interval = interval
        total_steps = (len(trajectories[0]) - 1) * save_interval
        return cls(trajectories, seeds, save_interval, total_steps)


def _local_grad_fn(shard, arch, prior, lik, batch_size, rng):
    target = TargetDensity(arch, prior)
    target.add_term(shard.train_inputs, shard.train_targets, lik)
    if batch_size is None or batch_size >= shard.num_train:

        def grad_fn(params):
            _, grad = target.value_and_grad(params)
            return grad

        return grad_fn

    inputs = shard.train_inputs
    targets = shard.train_targets
    scale = len(inputs) / batch_size

    def minibatch_grad_fn(params):
        batch = rng.choice(len(inputs), size=batch_size, replace=False)
        minibatch = TargetDensity(arch, prior)
        minibatch.add_term(inputs[batch], targets[batch], lik, weight=scale)
        _, grad = minibatch.value_and_grad(params)
        return grad

    return minibatch_grad_fn


def pretrain_bank(shard, arch, prior, cfg, lik):
    """Pretrain MAP trajectories on a client's local posterior.

    All trajectories start from ``init_params(arch, seed)`` with the seeds
    shared by all clients and ascend the local log-posterior, saving a
    checkpoint every `save_interval` steps. Diverged trajectories are
    dropped.

    Parameters
    ----------
    shard: :obj:`bpcfl.federation.DatasetShard`
        Client data; only the training part is used.
    arch: :obj:`bpcfl.nn.MlpArchitecture`
        Network architecture.
    prior: :obj:`bpcfl.posterior.PriorSpec`
        Parameter prior.
    cfg: :obj:`BpcFklConfig` or :obj:`PretrainConfig`
        Pretraining settings.
    lik: :obj:`bpcfl.nn.LikelihoodSpec`
        Observation model.

    Returns
    -------
    :obj:`TrajectoryBank`
    """
    cfg = getattr(cfg, 'pretrain', cfg)
    if not shard.num_train:
        raise CoresetError("Client {} has no training data".format(
            shard.client_id))
    opt_cfg = cfg.opt_config
    logger.debug("Pretraining %s trajectories of %s steps for client %s",
                 cfg.num_trajectories, cfg.num_steps, shard.client_id)

    def run(seeds):
        init = np.stack([init_params(arch, seed) for seed in seeds])
        rng = np.random.default_rng([shard.client_id] + list(seeds))
        grad_fn = _local_grad_fn(shard, arch, prior, lik, cfg.batch_size,
                                 rng)
        _, checkpoints = ascend(grad_fn, init, opt_cfg,
                                save_interval=cfg.save_interval)
        return np.stack(checkpoints, axis=1)

    kept_seeds = list(cfg.seeds)
    try:
        trajectories = list(run(kept_seeds))
    except DivergenceError:
        logger.warning(
            "Pretraining diverged for client %s, retrying trajectories "
            "one by one", shard.client_id)
        trajectories = []
        kept_seeds = []
        for seed in cfg.seeds:
            try:
                trajectories.append(run([seed])[0])
            except DivergenceError as exc:
                logger.warning("Dropping trajectory of seed %s of client %s: "
                               "%s", seed, shard.client_id, exc)
            else:
                kept_seeds.append(seed)
    if not trajectories:
        raise CoresetError(
            "All pretraining trajectories of client {} diverged".format(
                shard.client_id))
    return TrajectoryBank(trajectories, kept_seeds, cfg.save_interval,
                          cfg.num_steps)
