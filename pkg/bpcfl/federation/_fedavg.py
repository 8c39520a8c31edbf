"""Federated averaging baseline, cold or warm started."""
import logging

import numpy as np

from ..nn import init_params
from ..posterior import (DivergenceError, OptConfig, PriorSpec, TargetDensity,
                         ascend, make_optimizer)
from ._ledger import CommLedger, FederationError

logger = logging.getLogger(__name__)

METHOD = 'fedavg'


def _opt_config(settings, default_step_size):
    if isinstance(settings, OptConfig):
        return settings
    settings = dict(settings or {})
    settings.setdefault('step_size', default_step_size)
    return OptConfig.from_dict(settings)


class FedAvgConfig:
    """Settings of the FedAvg baseline.

    Parameters
    ----------
    rounds: int
        Communication rounds R.
    clients_per_round: int
        Clients sampled without replacement every round.
    local_steps: int
        Optimizer steps every sampled client takes per round.
    client: :obj:`bpcfl.posterior.OptConfig` or dict
        Client optimizer; its ``num_steps`` is replaced by `local_steps`.
    server: :obj:`bpcfl.posterior.OptConfig` or dict
        Server optimizer applied to the averaged pseudo-gradient.
    init: :obj:`numpy.ndarray`, optional
        Warm start; defaults to ``init_params(arch, seed)``.
    batch_size: int, optional
        Client minibatch size; full batch if None.
    """

    def __init__(self, rounds=50, clients_per_round=5, local_steps=10,
                 client=None, server=None, init=None, batch_size=None):
        if int(rounds) < 0:
            raise ValueError("rounds should be non-negative")
        if int(clients_per_round) < 1 or int(local_steps) < 1:
            raise ValueError(
                "clients_per_round and local_steps should be positive")
        self.rounds = int(rounds)
        self.clients_per_round = int(clients_per_round)
        self.local_steps = int(local_steps)
        client = _opt_config(client, 1e-2)
        self.client = OptConfig.from_dict(
            dict(client.to_dict(), num_steps=self.local_steps))
        self.server = _opt_config(server, 0.1)
        self.init = None if init is None else np.array(init,
                                                       dtype=np.float64)
        self.batch_size = None if batch_size is None else int(batch_size)

    def with_init(self, init):
        """Return a copy of the settings starting from `init`."""
        return FedAvgConfig(self.rounds, self.clients_per_round,
                            self.local_steps, self.client, self.server, init,
                            self.batch_size)

    def to_dict(self):
        client = self.client.to_dict()
        client.pop('num_steps')
        server = self.server.to_dict()
        server.pop('num_steps')
        return {
            'rounds': self.rounds,
            'clients_per_round': self.clients_per_round,
            'local_steps': self.local_steps,
            'client': client,
            'server': server,
            'batch_size': self.batch_size,
        }

    @classmethod
    def from_dict(cls, settings):
        return cls(**settings)


def _client_update(shard, arch, lik, prior, params, cfg, rng):
    """Run the local steps of one client and return its pseudo-gradient."""
    inputs = shard.train_inputs
    targets = shard.train_targets
    batch_size = cfg.batch_size
    if batch_size is None or batch_size >= len(inputs):
        target = TargetDensity(arch, prior)
        target.add_term(inputs, targets, lik)

        def grad_fn(theta):
            return target.value_and_grad(theta)[1]
    else:
        scale = len(inputs) / batch_size

        def grad_fn(theta):
            batch = rng.choice(len(inputs), size=batch_size, replace=False)
            target = TargetDensity(arch, prior)
            target.add_term(inputs[batch], targets[batch], lik, weight=scale)
            return target.value_and_grad(theta)[1]

    return ascend(grad_fn, params, cfg.client) - params


def run_fedavg(shards, arch, lik, cfg, prior=None, seed=0, init_ledger=None,
               method=METHOD, callback=None):
    """Run FedAvg.

    Every round the server broadcasts its parameters to the sampled
    clients, each client ascends its local log-posterior for
    `cfg.local_steps` steps and returns ``theta_m - theta``, and the
    server feeds the ``n_m``-weighted average of these differences to its
    optimizer as an ascent direction. With SGD at step size 1 on the server
    this is ``theta + mean(delta)``.

    Parameters
    ----------
    shards: list of :obj:`DatasetShard`
        Client data.
    arch: :obj:`bpcfl.nn.MlpArchitecture`
        Network architecture.
    lik: :obj:`bpcfl.nn.LikelihoodSpec`
        Observation model.
    cfg: :obj:`FedAvgConfig`
        Baseline settings.
    prior: :obj:`bpcfl.posterior.PriorSpec`, optional
        L2 term of the local objectives; none if not given.
    seed: int
        Seed of the client sampling, the default initialization and the
        minibatches.
    init_ledger: :obj:`CommLedger`, optional
        Traffic that produced `cfg.init`; it is booked as round 0.
    method: str
        Tag of the ledger events.
    callback: callable, optional
        Called as ``callback(round, params, floats_cum)`` after the start
        and after every round.

    Returns
    -------
    tuple
        List of the server parameters after rounds ``0..R`` and the
        :obj:`CommLedger`.

    Raises
    ------
    FederationError
        If the server parameters diverge; the message names the round.
    """
    if cfg.clients_per_round > len(shards):
        raise FederationError(
            "Cannot sample {} of {} clients per round".format(
                cfg.clients_per_round, len(shards)))
    if prior is None:
        prior = PriorSpec(0.)
    rng = np.random.default_rng(seed)
    ledger = CommLedger()
    if cfg.init is None:
        params = init_params(arch, seed)
    else:
        params = cfg.init.copy()
        if init_ledger is not None:
            for event in init_ledger.events:
                ledger.record(0, event.direction, event.client_id,
                              event.floats, event.integers, method)
    num_params = arch.param_count
    server = make_optimizer(cfg.server)
    history = [params.copy()]
    if callback is not None:
        callback(0, params, ledger.total_floats(method))

    logger.info("Running %s for %s rounds with %s of %s clients per round",
                method, cfg.rounds, cfg.clients_per_round, len(shards))
    for round_number in range(1, cfg.rounds + 1):
        sampled = np.sort(
            rng.choice(len(shards), size=cfg.clients_per_round,
                       replace=False))
        sizes = np.array([shards[i].num_train for i in sampled],
                         dtype=np.float64)
        weights = sizes / sizes.sum()
        average = np.zeros_like(params)
        for index, weight in zip(sampled, weights):
            shard = shards[index]
            ledger.record(round_number, 'down', shard.client_id, num_params,
                          0, method)
            client_rng = np.random.default_rng(
                [seed, round_number, shard.client_id])
            try:
                delta = _client_update(shard, arch, lik, prior, params, cfg,
                                       client_rng)
            except DivergenceError as exc:
                raise FederationError(
                    "Client {} diverged in round {}: {}".format(
                        shard.client_id, round_number, exc))
            ledger.record(round_number, 'up', shard.client_id, num_params, 0,
                          method)
            average = average + weight * delta
        params = server.step(params, -average)
        if not np.all(np.isfinite(params)):
            raise FederationError(
                "Server parameters diverged in round {}".format(round_number))
        history.append(params.copy())
        logger.debug("%s round %s: |delta| = %.3g", method, round_number,
                     np.linalg.norm(average))
        if callback is not None:
            callback(round_number, params, ledger.total_floats(method))
    return history, ledger
