"""Pseudocoresets: learnable synthetic inputs and labels of one client."""
import logging
import os
import re

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

LABEL_MODES = ('learnable', 'frozen')
FLOAT_FORMAT = '%.17g'


class CoresetError(Exception):
    """Coreset learning failed."""


class Pseudocoreset:
    """Synthetic dataset ``(Z, y_hat)`` owned by one client.

    Parameters
    ----------
    inputs: :obj:`numpy.ndarray`
        Pseudo-inputs ``Z`` of shape ``(K, D)``.
    labels: :obj:`numpy.ndarray`
        Pseudo-labels ``y_hat`` of shape ``(K, C)``.
    owner: int
        Client id.
    label_mode: str
        ``learnable`` or ``frozen``.
    task: str
        ``regression`` or ``classification``; frozen classification
        labels must be one-hot.
    """

    def __init__(self, inputs, labels, owner, label_mode='learnable',
                 task='regression'):
        inputs = np.array(inputs, dtype=np.float64, ndmin=2)
        labels = np.array(labels, dtype=np.float64, ndmin=2)
        if label_mode not in LABEL_MODES:
            raise ValueError("Unknown label mode '{}', choose from: {}".format(
                label_mode, ', '.join(LABEL_MODES)))
        if len(inputs) != len(labels):
            raise ValueError("Coreset has {} inputs but {} labels".format(
                len(inputs), len(labels)))
        if not (np.all(np.isfinite(inputs)) and np.all(np.isfinite(labels))):
            raise CoresetError(
                "Coreset of client {} has non-finite entries".format(owner))
        if label_mode == 'frozen' and task == 'classification':
            one_hot = (np.all((labels == 0.) | (labels == 1.), axis=1)
                       & (labels.sum(axis=1) == 1.))
            if not np.all(one_hot):
                raise ValueError(
                    "Frozen classification labels of client {} should be "
                    "one-hot".format(owner))
        self.inputs = inputs
        self.labels = labels
        self.owner = int(owner)
        self.label_mode = label_mode
        self.task = task

    @property
    def size(self):
        return len(self.inputs)

    @property
    def frozen(self):
        return self.label_mode == 'frozen'

    def replace(self, inputs=None, labels=None):
        """Return a copy with new inputs and/or labels."""
        return Pseudocoreset(
            self.inputs if inputs is None else inputs,
            self.labels if labels is None else labels,
            self.owner,
            self.label_mode,
            self.task,
        )

    def __eq__(self, other):
        return (isinstance(other, Pseudocoreset)
                and self.owner == other.owner
                and self.label_mode == other.label_mode
                and self.task == other.task
                and np.array_equal(self.inputs, other.inputs)
                and np.array_equal(self.labels, other.labels))

    def __repr__(self):
        return "Pseudocoreset(owner={}, K={}, label_mode={})".format(
            self.owner, self.size, self.label_mode)


def _label_order(labels):
    """Return class indices sorted by descending count, ties by index."""
    classes, counts = np.unique(labels, return_counts=True)
    order = np.lexsort((classes, -counts))
    return classes[order]


def init_coreset(shard, num_points, sigma_z, task, seed, label_mode=None):
    """Initialize a pseudocoreset from a client's training data.

    Inputs are drawn from a Gaussian centred at the mean training input
    with standard deviation `sigma_z`. Classification labels cycle
    through the client's classes sorted by descending occurrence;
    regression labels start at the mean training output.

    Parameters
    ----------
    shard: :obj:`bpcfl.federation.DatasetShard`
        Client data; only the training part is used.
    num_points: int
        Coreset size K.
    sigma_z: float
        Standard deviation of the input initialization.
    task: str
        ``regression`` or ``classification``.
    seed: int or sequence of int
        Seed of the input initialization.
    label_mode: str, optional
        Defaults to ``frozen`` for classification and ``learnable`` for
        regression.

    Returns
    -------
    :obj:`Pseudocoreset`
    """
    if num_points < 1:
        raise ValueError(
            "Coreset size should be positive, not {}".format(num_points))
    inputs = shard.train_inputs
    targets = shard.train_targets
    if not len(inputs):
        raise CoresetError("Client {} has no training data".format(
            shard.client_id))
    if label_mode is None:
        label_mode = 'frozen' if task == 'classification' else 'learnable'

    rng = np.random.default_rng(seed)
    center = inputs.mean(axis=0)
    pseudo_inputs = center + sigma_z * rng.standard_normal(
        (num_points, inputs.shape[1]))

    if task == 'classification':
        classes = _label_order(np.argmax(targets, axis=1))
        cycled = classes[np.arange(num_points) % len(classes)]
        labels = np.eye(targets.shape[1])[cycled]
    else:
        labels = np.tile(targets.mean(axis=0), (num_points, 1))

    return Pseudocoreset(pseudo_inputs, labels, shard.client_id, label_mode,
                         task)


def save_coreset(coreset, filename):
    """Write a coreset as CSV with header ``k,z_0..z_{D-1},y_0..y_{C-1}``."""
    frame = pd.DataFrame(
        np.hstack([coreset.inputs, coreset.labels]),
        columns=(['z_{}'.format(i) for i in range(coreset.inputs.shape[1])] +
                 ['y_{}'.format(i) for i in range(coreset.labels.shape[1])]))
    frame.insert(0, 'k', np.arange(coreset.size))
    logger.debug("Writing coreset of client %s to %s", coreset.owner,
                 filename)
    frame.to_csv(filename, index=False, float_format=FLOAT_FORMAT)


def load_coreset(filename, owner=None, label_mode='learnable',
                 task='regression'):
    """Read a coreset written by :func:`save_coreset`.

    If `owner` is not given it is taken from a ``client_<id>`` file name.
    """
    if owner is None:
        match = re.search(r'client_(\d+)', os.path.basename(filename))
        if match is None:
            raise ValueError(
                "Cannot tell the owner of coreset file {}".format(filename))
        owner = int(match.group(1))
    frame = pd.read_csv(filename, float_precision='round_trip')
    frame = frame.sort_values('k')
    inputs = frame[[c for c in frame.columns if c.startswith('z_')]]
    labels = frame[[c for c in frame.columns if c.startswith('y_')]]
    return Pseudocoreset(inputs.to_numpy(dtype=np.float64),
                         labels.to_numpy(dtype=np.float64), owner,
                         label_mode, task)
