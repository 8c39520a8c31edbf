"""Server-side aggregation of client coresets."""
import json
import logging
import os

import numpy as np

from ..bpc import Pseudocoreset
from ..posterior import TargetDensity

logger = logging.getLogger(__name__)


def client_weights(sizes):
    """Return the weights ``w_m = M * n_m / N`` of clients of sizes `n_m`.

    >>> client_weights([10, 10, 10]).tolist()
    [1.0, 1.0, 1.0]
    """
    sizes = np.asarray(sizes, dtype=np.float64)
    if not len(sizes) or np.any(sizes <= 0):
        raise ValueError(
            "Client sizes should be positive, got {}".format(sizes.tolist()))
    return len(sizes) * sizes / sizes.sum()


class ServerCoreset:
    """Weighted concatenation of client coresets.

    Parameters
    ----------
    entries: list of (:obj:`bpcfl.bpc.Pseudocoreset`, float)
        Client coresets with their weights.
    total_data_size: int
        Number of training points over all clients (N).
    """

    def __init__(self, entries, total_data_size):
        entries = [(coreset, float(weight)) for coreset, weight in entries]
        for coreset, weight in entries:
            if not weight > 0:
                raise ValueError(
                    "Weight of client {} should be positive, not {}".format(
                        coreset.owner, weight))
        self.entries = entries
        self.total_data_size = int(total_data_size)

    @property
    def num_clients(self):
        return len(self.entries)

    @property
    def coresets(self):
        return [coreset for coreset, _ in self.entries]

    @property
    def weights(self):
        return [weight for _, weight in self.entries]

    def to_dict(self):
        return {
            'total_data_size': self.total_data_size,
            'num_clients': self.num_clients,
            'entries': [{
                'owner': coreset.owner,
                'weight': weight,
                'label_mode': coreset.label_mode,
                'task': coreset.task,
                'inputs': coreset.inputs.tolist(),
                'labels': coreset.labels.tolist(),
            } for coreset, weight in self.entries],
        }

    @classmethod
    def from_dict(cls, settings):
        entries = [(Pseudocoreset(entry['inputs'], entry['labels'],
                                  entry['owner'], entry['label_mode'],
                                  entry['task']), entry['weight'])
                   for entry in settings['entries']]
        return cls(entries, settings['total_data_size'])

    def save(self, filename):
        """Write the server coreset as JSON."""
        dirname = os.path.dirname(filename)
        if dirname and not os.path.exists(dirname):
            os.makedirs(dirname)
        with open(filename, 'w') as file:
            json.dump(self.to_dict(), file, indent=2)

    @classmethod
    def load(cls, filename):
        with open(filename) as file:
            return cls.from_dict(json.load(file))

    def __eq__(self, other):
        return (isinstance(other, ServerCoreset)
                and self.total_data_size == other.total_data_size
                and self.entries == other.entries)

    def __repr__(self):
        return "ServerCoreset(M={}, N={}, weights={})".format(
            self.num_clients, self.total_data_size, self.weights)


def aggregate(coresets, client_sizes):
    """Concatenate client coresets with weights proportional to data size.

    Parameters
    ----------
    coresets: list of :obj:`bpcfl.bpc.Pseudocoreset`
        One coreset per client.
    client_sizes: list of int
        Training set size ``n_m`` of every client, in the same order.

    Returns
    -------
    :obj:`ServerCoreset`
    """
    if len(coresets) != len(client_sizes):
        raise ValueError("Got {} coresets for {} client sizes".format(
            len(coresets), len(client_sizes)))
    if not coresets:
        return ServerCoreset([], 0)
    weights = client_weights(client_sizes)
    logger.debug("Server weights %s", weights.tolist())
    return ServerCoreset(list(zip(coresets, weights)), sum(client_sizes))


def server_target(server_coreset, arch, prior, lik):
    """Return the coreset posterior the server runs inference on.

    Every client coreset becomes one likelihood term with the client's
    weight; without entries the density is the prior alone.

    Returns
    -------
    :obj:`bpcfl.posterior.TargetDensity`
    """
    target = TargetDensity(arch, prior)
    for coreset, weight in server_coreset.entries:
        target.add_term(coreset.inputs, coreset.labels, lik, weight)
    return target
