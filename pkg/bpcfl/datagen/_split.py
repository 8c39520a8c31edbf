"""Train/test partitions of client shards."""
import logging

import numpy as np

logger = logging.getLogger(__name__)


def split_train_test(shard, fraction, seed=0):
    """Hold out a uniformly drawn fraction of a shard as test data.

    Parameters
    ----------
    shard: :obj:`bpcfl.federation.DatasetShard`
        Client data.
    fraction: float
        Fraction of points held out, in (0, 1).
    seed: int
        Seed of the split.

    Returns
    -------
    :obj:`bpcfl.federation.DatasetShard`
        Copy of `shard` whose test mask marks ``round(fraction * n)``
        points.
    """
    if not 0 < fraction < 1:
        raise ValueError(
            "Test fraction should be in (0, 1), not {}".format(fraction))
    num_test = int(np.floor(fraction * shard.num_points + 0.5))
    if num_test >= shard.num_points:
        raise ValueError(
            "Holding out {} of {} points of client {} leaves no training "
            "data".format(num_test, shard.num_points, shard.client_id))
    rng = np.random.default_rng(seed)
    test_mask = np.zeros(shard.num_points, dtype=bool)
    test_mask[rng.permutation(shard.num_points)[:num_test]] = True
    return shard.with_split(test_mask)


def split_all(shards, fraction, seed=0):
    """Split every shard with an independent stream per client."""
    return [
        split_train_test(shard, fraction, seed=[seed, shard.client_id])
        for shard in shards
    ]
