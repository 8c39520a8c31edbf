"""Simulated federated protocols and communication accounting."""
from ._bpc_fl import run_bpc_fl, upload_cost
from ._fedavg import FedAvgConfig, run_fedavg
from ._ledger import (CommLedger, FederationError, LedgerEvent, comm_totals,
                      floats_to_reach)
from ._server import ServerCoreset, aggregate, client_weights, server_target
from ._shard import DatasetShard, pooled

__all__ = [
    # Client data
    'DatasetShard',
    'pooled',
    # Communication
    'CommLedger',
    'LedgerEvent',
    'comm_totals',
    'floats_to_reach',
    'FederationError',
    # One-shot protocol
    'ServerCoreset',
    'client_weights',
    'aggregate',
    'server_target',
    'run_bpc_fl',
    'upload_cost',
    # Baseline
    'FedAvgConfig',
    'run_fedavg',
]
