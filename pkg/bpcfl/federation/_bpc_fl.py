"""One-shot federated learning with Bayesian pseudocoresets."""
import logging
from multiprocessing import Pool

from ..bpc import learn_coreset
from ._ledger import CommLedger, FederationError
from ._server import aggregate

logger = logging.getLogger(__name__)

METHOD = 'bpc-fl'


def upload_cost(coreset):
    """Return the floats and integers a client sends for its coreset.

    Frozen labels are one-hot rows and travel as class indices.
    """
    num_points, input_dim = coreset.inputs.shape
    if coreset.frozen:
        return num_points * input_dim, num_points
    return num_points * (input_dim + coreset.labels.shape[1]), 0


def _learn_client(args):
    shard, arch, prior, cfg, lik, seed, bank = args
    try:
        return learn_coreset(shard, arch, prior, cfg, lik, seed=seed,
                             bank=bank)
    except Exception as exc:
        raise FederationError("Client {} failed to learn its coreset: "
                              "{}: {}".format(shard.client_id,
                                              type(exc).__name__, exc))


def run_bpc_fl(shards, arch, prior, bpc_cfg, lik, seed=0, banks=None,
               max_parallel_clients=1):
    """Run the one-shot protocol.

    Every client learns a coreset on its training data and uploads it once;
    the server concatenates the coresets with weights ``M * n_m / N``.

    Parameters
    ----------
    shards: list of :obj:`DatasetShard`
        Client data.
    arch: :obj:`bpcfl.nn.MlpArchitecture`
        Network architecture.
    prior: :obj:`bpcfl.posterior.PriorSpec`
        Parameter prior.
    bpc_cfg: :obj:`bpcfl.bpc.BpcFklConfig`
        Coreset learning settings.
    lik: :obj:`bpcfl.nn.LikelihoodSpec`
        Observation model.
    seed: int
        Master seed; every client derives its stream from it and its id.
    banks: dict, optional
        Pretrained trajectory banks by client id.
    max_parallel_clients: int
        Number of clients learning at the same time.

    Returns
    -------
    tuple
        The :obj:`ServerCoreset` and the :obj:`CommLedger` of the run.

    Raises
    ------
    FederationError
        If a client fails; the message names the client.
    """
    if not shards:
        raise FederationError("BPC-FL needs at least one client")
    banks = banks or {}
    jobs = [(shard, arch, prior, bpc_cfg, lik, seed,
             banks.get(shard.client_id)) for shard in shards]
    logger.info("Learning coresets on %s clients", len(shards))
    if max_parallel_clients > 1 and len(shards) > 1:
        with Pool(processes=min(max_parallel_clients, len(shards))) as pool:
            coresets = pool.map(_learn_client, jobs)
    else:
        coresets = [_learn_client(job) for job in jobs]

    ledger = CommLedger()
    for coreset in coresets:
        floats, integers = upload_cost(coreset)
        ledger.record(0, 'up', coreset.owner, floats, integers, METHOD)
    server_coreset = aggregate(coresets,
                               [shard.num_train for shard in shards])
    logger.info("Server received %s floats and %s integers from %s clients",
                ledger.total_floats(METHOD), ledger.total_integers(METHOD),
                len(shards))
    return server_coreset, ledger
