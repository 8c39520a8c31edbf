"""Reading and writing client shards as CSV."""
import logging

import numpy as np
import pandas as pd

from ..federation._shard import DatasetShard

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


def _columns(prefix, count):
    return ['{}_{}'.format(prefix, index) for index in range(count)]


def save_shards(shards, filename):
    """Write shards to one CSV file.

    The header is ``client_id,x_0..x_{D-1},y_0..y_{C-1},split``.
    """
    frames = []
    for shard in shards:
        frame = pd.DataFrame(
            np.hstack([shard.inputs, shard.targets]),
            columns=(_columns('x', shard.inputs.shape[1]) +
                     _columns('y', shard.targets.shape[1])))
        frame.insert(0, 'client_id', shard.client_id)
        frame['split'] = np.where(shard.test_mask, 'test', 'train')
        frames.append(frame)
    logger.debug("Writing %s shards to %s", len(shards), filename)
    pd.concat(frames, ignore_index=True).to_csv(
        filename, index=False, float_format=FLOAT_FORMAT)


def load_shards(filename):
    """Read shards written by :func:`save_shards`."""
    logger.debug("Reading shards from %s", filename)
    frame = pd.read_csv(filename, float_precision='round_trip')
    input_columns = [c for c in frame.columns if c.startswith('x_')]
    target_columns = [c for c in frame.columns if c.startswith('y_')]
    shards = []
    for client_id, group in frame.groupby('client_id', sort=True):
        shards.append(
            DatasetShard(client_id,
                         group[input_columns].to_numpy(dtype=np.float64),
                         group[target_columns].to_numpy(dtype=np.float64),
                         test_mask=(group['split'] == 'test').to_numpy()))
    return shards
