"""Interval regression with Dirichlet non-iid clients."""
import collections
import logging

import numpy as np

from ..federation._shard import DatasetShard

logger = logging.getLogger(__name__)

DEFAULT_INTERVALS = ((-0.8, -0.6), (-0.2, 0.0), (0.5, 0.8))

Grid = collections.namedtuple('Grid', ['inputs', 'targets'])


class RegressionGenConfig:
    """Settings of the interval regression generator.

    Parameters
    ----------
    intervals: list of (float, float)
        Input intervals the clients sample from.
    noise_std: float
        Standard deviation of the additive Gaussian output noise.
    num_clients: int
        Number of clients.
    points_per_client: int
        Points drawn by every client.
    dirichlet_alpha: list of float, optional
        Concentration of the per-client interval proportions, one per
        interval; defaults to all ones.
    seed: int
        Seed of the generator.
    grid_points: int
        Points per interval of the noiseless test grid.
    """

    def __init__(self, intervals=DEFAULT_INTERVALS, noise_std=0.3,
                 num_clients=5, points_per_client=100, dirichlet_alpha=None,
                 seed=0, grid_points=512):
        intervals = [tuple(float(v) for v in pair) for pair in intervals]
        for low, high in intervals:
            if not low < high:
                raise ValueError(
                    "Interval ({}, {}) should have lo < hi".format(low, high))
        if dirichlet_alpha is None:
            dirichlet_alpha = [1.] * len(intervals)
        dirichlet_alpha = [float(a) for a in dirichlet_alpha]
        if len(dirichlet_alpha) != len(intervals):
            raise ValueError("Need one Dirichlet concentration per interval, "
                             "got {} for {} intervals".format(
                                 len(dirichlet_alpha), len(intervals)))
        if any(not a > 0 for a in dirichlet_alpha):
            raise ValueError("Dirichlet concentrations should be positive, "
                             "got {}".format(dirichlet_alpha))
        if not noise_std >= 0:
            raise ValueError(
                "noise_std should be non-negative, not {}".format(noise_std))
        self.intervals = intervals
        self.noise_std = float(noise_std)
        self.num_clients = int(num_clients)
        self.points_per_client = int(points_per_client)
        self.dirichlet_alpha = dirichlet_alpha
        self.seed = int(seed)
        self.grid_points = int(grid_points)

    def to_dict(self):
        return {
            'intervals': [list(pair) for pair in self.intervals],
            'noise_std': self.noise_std,
            'num_clients': self.num_clients,
            'points_per_client': self.points_per_client,
            'dirichlet_alpha': list(self.dirichlet_alpha),
            'seed': self.seed,
            'grid_points': self.grid_points,
        }


def ground_truth(inputs):
    """Return ``1.5 sin(0.4 pi x) + 1.5 cos(2 pi x)``."""
    inputs = np.asarray(inputs, dtype=np.float64)
    return 1.5 * np.sin(0.4 * np.pi * inputs) + 1.5 * np.cos(
        2. * np.pi * inputs)


def in_support(inputs, intervals):
    """Return a mask of the inputs that lie inside any interval."""
    inputs = np.ravel(inputs)
    mask = np.zeros(inputs.shape, dtype=bool)
    for low, high in intervals:
        mask |= (inputs >= low) & (inputs <= high)
    return mask


def interval_proportions(cfg, rng=None):
    """Return the per-client interval proportions used by the generator.

    `rng` defaults to a fresh stream seeded with `cfg.seed`, which is the
    first draw :func:`gen_interval_regression` makes.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    return rng.dirichlet(cfg.dirichlet_alpha, size=cfg.num_clients)


def support_grid(intervals, points_per_interval=512):
    """Return an evenly spaced noiseless grid over every interval."""
    inputs = np.concatenate([
        np.linspace(low, high, points_per_interval)
        for low, high in intervals
    ])[:, np.newaxis]
    return Grid(inputs, ground_truth(inputs))


def full_grid(intervals, num_points=512, margin=0.):
    """Return a noiseless grid spanning the intervals and the gaps."""
    low = min(pair[0] for pair in intervals) - margin
    high = max(pair[1] for pair in intervals) + margin
    inputs = np.linspace(low, high, num_points)[:, np.newaxis]
    return Grid(inputs, ground_truth(inputs))


def gen_interval_regression(cfg):
    """Generate the federated interval regression task.

    Parameters
    ----------
    cfg: :obj:`RegressionGenConfig`
        Generator settings.

    Returns
    -------
    tuple
        List of :obj:`bpcfl.federation.DatasetShard` and the noiseless
        test :obj:`Grid` over the union of the intervals.
    """
    rng = np.random.default_rng(cfg.seed)
    proportions = interval_proportions(cfg, rng)
    bounds = np.array(cfg.intervals)
    shards = []
    for client_id in range(cfg.num_clients):
        chosen = rng.choice(len(bounds), size=cfg.points_per_client,
                            p=proportions[client_id])
        inputs = rng.uniform(bounds[chosen, 0], bounds[chosen, 1])
        noise = rng.normal(0., cfg.noise_std, size=cfg.points_per_client)
        targets = ground_truth(inputs) + noise
        logger.debug("Client %s interval proportions %s", client_id,
                     proportions[client_id])
        shards.append(
            DatasetShard(client_id, inputs[:, np.newaxis],
                         targets[:, np.newaxis]))
    return shards, support_grid(cfg.intervals, cfg.grid_points)
