"""Run small experiments through the whole pipeline."""
import json
import os

import numpy as np
import pandas as pd
import pytest
import yaml

from bpcfl._config import read_config_user_file
from bpcfl._experiment import (BPC_METHOD, COLD_METHOD, WARM_METHOD,
                               read_experiment_file, run_experiment)
from bpcfl.federation import CommLedger

TINY_BPC = {
    'num_points': 2,
    'num_updates': 2,
    'coreset_chain_length': 3,
    'data_chain_length': 2,
    'num_noise_samples': 2,
    'batch_trajectories': 2,
    'pretrain': {
        'num_trajectories': 2,
        'num_steps': 4,
        'save_interval': 2,
    },
}

TINY_DOWNSTREAM_HMC = {
    'step_size': 0.001,
    'num_integration_steps': 2,
    'num_steps': 4,
    'num_samples_kept': 2,
}

TINY_FEDAVG = {'rounds': 2, 'clients_per_round': 2, 'local_steps': 2}

TINY_REGRESSION = {
    'name': 'tiny_regression',
    'preset': 'regression_small',
    'seeds': [0],
    'dataset': {
        'num_clients': 2,
        'points_per_client': 10,
        'grid_points': 16,
    },
    'architecture': {'width': 8, 'depth': 1},
    'bpc': TINY_BPC,
    'downstream': {
        'adam': {'num_steps': 5},
        'hmc': TINY_DOWNSTREAM_HMC,
    },
    'fedavg': TINY_FEDAVG,
}

TINY_MOONS = {
    'name': 'tiny_moons',
    'preset': 'moons',
    'seeds': [0],
    'dataset': {
        'num_clients': 2,
        'points_per_client': 10,
        'test_points': 50,
    },
    'architecture': {'width': 4, 'depth': 2},
    'bpc': TINY_BPC,
    'downstream': {
        'sgd': {'num_steps': 5},
        'hmc': TINY_DOWNSTREAM_HMC,
    },
    'fedavg': TINY_FEDAVG,
}

# Parameters of the [1, 8, 1] regression network
REGRESSION_PARAMS = 8 + 8 + 8 + 1


def write_experiment(dirname, document, **changes):
    document = dict(document, **changes)
    filename = dirname / '{}.yml'.format(document['name'])
    filename.write_text(yaml.safe_dump(document))
    return str(filename)


def write_config_user_file(dirname, **changes):
    config_file = dirname / 'config-user.yml'
    cfg = {
        'output_dir': str(dirname / 'output_dir'),
        'log_level': 'debug',
        'max_parallel_tasks': 1,
    }
    cfg.update(changes)
    config_file.write_text(yaml.safe_dump(cfg))
    return str(config_file)


def run_tiny(tmp_path, document, out='out', **changes):
    experiment = read_experiment_file(
        write_experiment(tmp_path, document, **changes))
    cfg = read_config_user_file(write_config_user_file(tmp_path),
                                str(tmp_path / out))
    rows = run_experiment(experiment, cfg)
    return cfg['output_dir'], rows


def read_bytes(*path):
    with open(os.path.join(*path), 'rb') as file:
        return file.read()


def test_regression_pipeline(tmp_path):
    output_dir, rows = run_tiny(tmp_path, TINY_REGRESSION)
    directory = os.path.join(output_dir, 'seed_0')
    for name in ('shards.csv', 'server_coreset.json', 'downstream.json',
                 'map_adam.npy', 'ledger.csv', 'result.json',
                 'trace_bpc-fl-adam.csv', 'trace_bpc-fl-hmc.csv',
                 'trace_fedavg-cold.csv', 'trace_fedavg-warm.csv',
                 os.path.join('coresets', 'client_0.csv'),
                 os.path.join('coresets', 'client_1.csv')):
        assert os.path.exists(os.path.join(directory, name)), name

    methods = sorted(row['method'] for row in rows)
    assert methods == [
        'bpc-fl-adam', 'bpc-fl-hmc', COLD_METHOD, WARM_METHOD
    ]

    with open(os.path.join(directory, 'result.json')) as file:
        result = json.load(file)
    assert result['seed'] == 0
    assert result['config']['name'] == 'tiny_regression'
    hmc = result['downstream']['bpc-fl-hmc']
    assert hmc['hmc']['num_samples'] == 2
    assert 'uncertainty_gap_ratio' in hmc
    assert np.isfinite(result['downstream']['bpc-fl-adam']['metrics']['rmse'])

    # 2 clients send 2 points with one input and one output each
    ledger = CommLedger.load(os.path.join(directory, 'ledger.csv'))
    assert ledger.total_floats(BPC_METHOD, 'up') == 8
    assert ledger.total_floats(BPC_METHOD, 'down') == 0
    assert len(ledger.select(BPC_METHOD, 'up')) == 2
    fedavg_floats = 2 * 2 * 2 * REGRESSION_PARAMS
    assert ledger.total_floats(COLD_METHOD) == fedavg_floats
    assert ledger.total_floats(WARM_METHOD) == fedavg_floats + 8

    trace = pd.read_csv(os.path.join(directory, 'trace_fedavg-cold.csv'))
    assert list(trace['round']) == [0, 1, 2]
    assert list(trace['floats_cum']) == [
        0, 2 * 2 * REGRESSION_PARAMS, fedavg_floats
    ]
    warm = pd.read_csv(os.path.join(directory, 'trace_fedavg-warm.csv'))
    assert warm['floats_cum'].iloc[0] == 8

    aggregate = pd.read_csv(os.path.join(output_dir, 'aggregate.csv'))
    assert list(aggregate['method']) == methods
    assert (aggregate['num_seeds'] == 1).all()
    assert (aggregate['rmse_std'] == 0).all()
    for name in ('trace.csv', 'floats_to_threshold.csv',
                 'ledger_summary.csv'):
        assert os.path.exists(os.path.join(output_dir, 'report', name))


def test_moons_pipeline(tmp_path):
    output_dir, rows = run_tiny(tmp_path, TINY_MOONS)
    for row in rows:
        assert 0 <= row['accuracy'] <= 1
        assert 0 <= row['ece'] <= 1
        assert pd.isna(row['rmse'])
    ledger = CommLedger.load(os.path.join(output_dir, 'seed_0', 'ledger.csv'))
    # Frozen labels travel as class indices
    assert ledger.total_floats(BPC_METHOD, 'up') == 2 * 2 * 2
    assert ledger.total_integers(BPC_METHOD, 'up') == 2 * 2
    with open(os.path.join(output_dir, 'seed_0', 'result.json')) as file:
        result = json.load(file)
    assert 'uncertainty_gap_ratio' not in result['downstream']['bpc-fl-hmc']


@pytest.mark.parametrize('document', [TINY_REGRESSION, TINY_MOONS])
def test_rerun_is_byte_identical(tmp_path, document):
    first, _ = run_tiny(tmp_path, document, out='first')
    second, _ = run_tiny(tmp_path, document, out='second')
    names = [
        'aggregate.csv',
        os.path.join('report', 'trace.csv'),
        os.path.join('seed_0', 'ledger.csv'),
        os.path.join('seed_0', 'shards.csv'),
        os.path.join('seed_0', 'coresets', 'client_0.csv'),
        os.path.join('seed_0', 'trace_fedavg-warm.csv'),
    ]
    for name in names:
        assert read_bytes(first, name) == read_bytes(second, name), name


def test_seeds_in_parallel(tmp_path):
    experiment = read_experiment_file(
        write_experiment(tmp_path, TINY_REGRESSION, seeds=[0, 1, 2]))
    cfg = read_config_user_file(
        write_config_user_file(tmp_path, max_parallel_tasks=2))
    run_experiment(experiment, cfg)
    output_dir = cfg['output_dir']
    for seed in (0, 1, 2):
        assert os.path.exists(
            os.path.join(output_dir, 'seed_{}'.format(seed), 'result.json'))
    aggregate = pd.read_csv(os.path.join(output_dir, 'aggregate.csv'))
    assert (aggregate['num_seeds'] == 3).all()

    sequential, _ = run_tiny(tmp_path, TINY_REGRESSION, out='sequential',
                             seeds=[0, 1, 2])
    assert read_bytes(output_dir, 'aggregate.csv') == read_bytes(
        sequential, 'aggregate.csv')


def test_bank_spill_dir(tmp_path):
    experiment = read_experiment_file(
        write_experiment(tmp_path, TINY_REGRESSION))
    spill = tmp_path / 'banks'
    cfg = read_config_user_file(
        write_config_user_file(tmp_path, bank_spill_dir=str(spill)))
    run_experiment(experiment, cfg)
    assert (spill / 'seed_0' / 'banks' / 'client_0').is_dir()

    in_memory, _ = run_tiny(tmp_path, TINY_REGRESSION, out='in_memory')
    assert read_bytes(cfg['output_dir'], 'aggregate.csv') == read_bytes(
        in_memory, 'aggregate.csv')


# Full sized experiments, run with `pytest --slow`


@pytest.mark.slow
def test_regression_acceptance(tmp_path):
    experiment = read_experiment_file(
        write_experiment(tmp_path, {
            'name': 'regression',
            'preset': 'regression'
        }))
    cfg = read_config_user_file(
        write_config_user_file(tmp_path, max_parallel_tasks=None))
    run_experiment(experiment, cfg)
    aggregate = pd.read_csv(
        os.path.join(cfg['output_dir'], 'aggregate.csv')).set_index('method')
    assert aggregate.loc['bpc-fl-adam', 'rmse_mean'] <= 0.45
    assert aggregate.loc['bpc-fl-hmc', 'uncertainty_gap_ratio_mean'] > 1.2
    for seed in experiment.seeds:
        ledger = CommLedger.load(
            os.path.join(cfg['output_dir'], 'seed_{}'.format(seed),
                         'ledger.csv'))
        assert ledger.total_floats(BPC_METHOD) == 5 * 6 * 2


@pytest.mark.slow
def test_moons_acceptance(tmp_path):
    experiment = read_experiment_file(
        write_experiment(tmp_path, {
            'name': 'moons',
            'preset': 'moons'
        }))
    cfg = read_config_user_file(
        write_config_user_file(tmp_path, max_parallel_tasks=None))
    run_experiment(experiment, cfg)
    aggregate = pd.read_csv(
        os.path.join(cfg['output_dir'], 'aggregate.csv')).set_index('method')
    assert aggregate.loc['bpc-fl-sgd', 'accuracy_mean'] >= 0.85
    assert (aggregate.loc['bpc-fl-hmc', 'ece_mean'] <=
            aggregate.loc['bpc-fl-sgd', 'ece_mean'])
    assert (aggregate.loc[WARM_METHOD, 'floats_to_threshold_mean'] <
            aggregate.loc[COLD_METHOD, 'floats_to_threshold_mean'])
