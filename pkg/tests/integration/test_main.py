"""Test the `bpcfl` command line."""
import os

import numpy as np
import pytest
import yaml

from bpcfl._main import get_args, run
from bpcfl.bpc import load_coreset

from .test_pipeline import (TINY_REGRESSION, read_bytes,
                            write_config_user_file, write_experiment)


def bpcfl(*args):
    run(list(args))


@pytest.fixture
def experiment_file(tmp_path):
    return write_experiment(tmp_path, TINY_REGRESSION)


@pytest.fixture
def user_config(tmp_path):
    return write_config_user_file(tmp_path)


def test_get_args():
    args = get_args(['learn-coreset', '--config', 'e.yml', '--client', '1',
                     '--client', '3', '--seed', '2'])
    assert args.command == 'learn-coreset'
    assert args.client == [1, 3]
    assert args.seed == 2
    assert not args.dry_run


def test_command_required():
    with pytest.raises(SystemExit):
        get_args([])


def test_dry_run(tmp_path, experiment_file, capsys):
    out = tmp_path / 'out'
    bpcfl('run', '--config', experiment_file, '--out', str(out), '--dry-run')
    assert not out.exists()
    echo = yaml.safe_load(capsys.readouterr().out)
    assert echo['preset'] == 'regression_small'
    assert echo['bpc']['num_points'] == 2
    assert echo['bpc']['noise_std'] == 0.01


def test_invalid_experiment_exits_2(tmp_path):
    filename = write_experiment(tmp_path, TINY_REGRESSION,
                                fedavg={'clients_per_round': 3})
    with pytest.raises(SystemExit) as exc:
        bpcfl('run', '--config', filename, '--dry-run')
    assert exc.value.code == 2


def test_unknown_key_exits_2(tmp_path):
    filename = write_experiment(tmp_path, TINY_REGRESSION, bogus=1)
    with pytest.raises(SystemExit) as exc:
        bpcfl('run', '--config', filename, '--dry-run')
    assert exc.value.code == 2


def test_missing_artifact_exits_1(tmp_path, experiment_file, user_config):
    with pytest.raises(SystemExit) as exc:
        bpcfl('downstream', '--config', experiment_file, '--user-config',
              user_config, '--out', str(tmp_path / 'out'))
    assert exc.value.code == 1


def test_unknown_client_exits_2(tmp_path, experiment_file, user_config):
    with pytest.raises(SystemExit) as exc:
        bpcfl('learn-coreset', '--config', experiment_file, '--client', '7',
              '--user-config', user_config, '--out', str(tmp_path / 'out'))
    assert exc.value.code == 2


def test_output_dir_from_user_config(tmp_path, experiment_file, user_config):
    bpcfl('pretrain', '--config', experiment_file, '--user-config',
          user_config)
    output_dir = tmp_path / 'output_dir' / 'tiny_regression'
    assert (output_dir / 'seed_0' / 'shards.csv').exists()
    run_dir = output_dir / 'run'
    for name in ('main_log.txt', 'main_log_debug.txt', 'experiment.yml',
                 'resource_usage.txt'):
        assert (run_dir / name).exists(), name


def test_stages_match_run(tmp_path, experiment_file, user_config):
    staged = str(tmp_path / 'staged')
    options = ['--config', experiment_file, '--user-config', user_config,
               '--out', staged]
    bpcfl('pretrain', *options)
    directory = os.path.join(staged, 'seed_0')
    assert os.path.isdir(os.path.join(directory, 'banks', 'client_1'))

    bpcfl('learn-coreset', '--client', '0', *options)
    assert os.path.exists(os.path.join(directory, 'coresets', 'client_0.csv'))
    assert not os.path.exists(
        os.path.join(directory, 'coresets', 'client_1.csv'))
    with pytest.raises(SystemExit) as exc:
        bpcfl('aggregate', *options)
    assert exc.value.code == 1

    bpcfl('learn-coreset', '--client', '1', *options)
    bpcfl('aggregate', *options)
    bpcfl('downstream', *options)
    bpcfl('fedavg', *options)
    bpcfl('report', *options)
    assert os.path.exists(os.path.join(staged, 'report', 'trace.csv'))

    complete = str(tmp_path / 'complete')
    bpcfl('run', '--config', experiment_file, '--user-config', user_config,
          '--out', complete)
    names = [
        'shards.csv',
        os.path.join('coresets', 'client_0.csv'),
        os.path.join('coresets', 'client_1.csv'),
        'server_coreset.json',
        'ledger_bpc-fl.csv',
        'trace_bpc-fl-adam.csv',
        'trace_bpc-fl-hmc.csv',
        'trace_fedavg-cold.csv',
        'trace_fedavg-warm.csv',
    ]
    for name in names:
        assert read_bytes(directory, name) == read_bytes(
            complete, 'seed_0', name), name

    coreset = load_coreset(os.path.join(directory, 'coresets',
                                        'client_0.csv'))
    assert coreset.owner == 0
    assert coreset.inputs.shape == (2, 1)
    np.testing.assert_array_equal(
        np.load(os.path.join(directory, 'map_adam.npy')),
        np.load(os.path.join(complete, 'seed_0', 'map_adam.npy')))
