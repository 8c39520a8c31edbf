"""Client datasets."""
import logging

import numpy as np

logger = logging.getLogger(__name__)


class DatasetShard:
    """The local dataset of one client.

    Parameters
    ----------
    client_id: int
        Identifier of the owning client.
    inputs: :obj:`numpy.ndarray`
        Inputs ``(n, D)``.
    targets: :obj:`numpy.ndarray`
        Targets ``(n, C)``; one-hot rows for classification.
    test_mask: :obj:`numpy.ndarray`, optional
        Boolean mask of held-out points; the rest is the training set.
    """

    def __init__(self, client_id, inputs, targets, test_mask=None):
        inputs = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
        targets = np.atleast_2d(np.asarray(targets, dtype=np.float64))
        if len(inputs) < 1:
            raise ValueError(
                "Shard of client {} holds no data".format(client_id))
        if len(inputs) != len(targets):
            raise ValueError(
                "Shard of client {} has {} inputs but {} targets".format(
                    client_id, len(inputs), len(targets)))
        if test_mask is None:
            test_mask = np.zeros(len(inputs), dtype=bool)
        test_mask = np.asarray(test_mask, dtype=bool)
        if test_mask.shape != (len(inputs), ):
            raise ValueError("Test mask of shape {} does not match {} "
                             "points".format(test_mask.shape, len(inputs)))
        self.client_id = int(client_id)
        self.inputs = inputs
        self.targets = targets
        self.test_mask = test_mask

    @property
    def train_mask(self):
        return ~self.test_mask

    @property
    def num_points(self):
        return len(self.inputs)

    @property
    def num_train(self):
        return int(np.count_nonzero(self.train_mask))

    @property
    def train_inputs(self):
        return self.inputs[self.train_mask]

    @property
    def train_targets(self):
        return self.targets[self.train_mask]

    @property
    def test_inputs(self):
        return self.inputs[self.test_mask]

    @property
    def test_targets(self):
        return self.targets[self.test_mask]

    def with_split(self, test_mask):
        """Return a copy of the shard with a new train/test split."""
        return DatasetShard(self.client_id, self.inputs, self.targets,
                            test_mask)

    def __eq__(self, other):
        return (isinstance(other, DatasetShard)
                and self.client_id == other.client_id
                and np.array_equal(self.inputs, other.inputs)
                and np.array_equal(self.targets, other.targets)
                and np.array_equal(self.test_mask, other.test_mask))

    def __repr__(self):
        return "DatasetShard(client_id={}, n={}, n_train={})".format(
            self.client_id, self.num_points, self.num_train)


def pooled(shards, train=True):
    """Concatenate the training (or test) data of several shards."""
    if train:
        parts = [(s.train_inputs, s.train_targets) for s in shards]
    else:
        parts = [(s.test_inputs, s.test_targets) for s in shards]
    inputs = np.concatenate([p[0] for p in parts])
    targets = np.concatenate([p[1] for p in parts])
    return inputs, targets
