"""Two interleaving half circles."""
import logging

import numpy as np

from ..federation._shard import DatasetShard

logger = logging.getLogger(__name__)


class MoonsGenConfig:
    """Settings of the moons generator.

    Parameters
    ----------
    points_per_client: int
        Points drawn by every client.
    num_clients: int
        Number of clients.
    noise_std: float
        Standard deviation of the isotropic Gaussian input noise.
    seed: int
        Seed of the generator.
    """

    def __init__(self, points_per_client=20, num_clients=5, noise_std=0.14,
                 seed=0):
        if not noise_std >= 0:
            raise ValueError(
                "noise_std should be non-negative, not {}".format(noise_std))
        self.points_per_client = int(points_per_client)
        self.num_clients = int(num_clients)
        self.noise_std = float(noise_std)
        self.seed = int(seed)

    def to_dict(self):
        return {
            'points_per_client': self.points_per_client,
            'num_clients': self.num_clients,
            'noise_std': self.noise_std,
            'seed': self.seed,
        }


def moon_points(angles, labels):
    """Return the noiseless points of the two arcs.

    Class 0 lies on ``(cos t, sin t)``, class 1 on
    ``(1 - cos t, 0.5 - sin t)``.
    """
    angles = np.asarray(angles, dtype=np.float64)
    labels = np.asarray(labels)
    outer = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    inner = np.stack([1. - np.cos(angles), 0.5 - np.sin(angles)], axis=-1)
    return np.where(labels[:, np.newaxis] == 0, outer, inner)


def one_hot(labels, num_classes):
    """Encode integer labels as one-hot rows."""
    return np.eye(num_classes)[np.asarray(labels, dtype=int)]


def sample_moons(rng, num_points, noise_std):
    """Draw a class-balanced moons sample.

    Returns
    -------
    tuple of :obj:`numpy.ndarray`
        Inputs ``(n, 2)`` and integer labels ``(n,)``.
    """
    labels = rng.permutation(np.arange(num_points) % 2)
    angles = rng.uniform(0., np.pi, size=num_points)
    inputs = moon_points(angles, labels)
    inputs = inputs + rng.normal(0., noise_std, size=inputs.shape)
    return inputs, labels


def gen_moons(cfg):
    """Generate one moons shard per client."""
    rng = np.random.default_rng(cfg.seed)
    shards = []
    for client_id in range(cfg.num_clients):
        inputs, labels = sample_moons(rng, cfg.points_per_client,
                                      cfg.noise_std)
        shards.append(DatasetShard(client_id, inputs, one_hot(labels, 2)))
    return shards


def gen_moons_test(num_points=1000, noise_std=0.14, seed=0):
    """Draw a fresh test set labelled by the arc that generated each point.

    Returns
    -------
    tuple of :obj:`numpy.ndarray`
        Inputs ``(n, 2)`` and one-hot targets ``(n, 2)``.
    """
    rng = np.random.default_rng(seed)
    inputs, labels = sample_moons(rng, num_points, noise_std)
    return inputs, one_hot(labels, 2)
