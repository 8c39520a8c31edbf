"""Tests for the per-method aggregation over seeds."""
import numpy as np
import pandas as pd
import pytest

from bpcfl._experiment import aggregate_seeds


def row(method, seed, nll, floats_to_threshold):
    return {
        'method': method,
        'seed': seed,
        'nll': nll,
        'floats_to_threshold': floats_to_threshold,
    }


def test_threshold_counts(tmp_path):
    rows = [
        row('fedavg-cold', 0, 1., None),
        row('fedavg-cold', 1, 3., 400.),
        row('fedavg-warm', 0, 0.5, 100.),
        row('fedavg-warm', 1, 0.5, 200.),
        row('fedavg-warm', 2, 0.5, None),
    ]
    summary = aggregate_seeds(rows, str(tmp_path)).set_index('method')
    assert summary.loc['fedavg-cold', 'num_seeds'] == 2
    assert summary.loc['fedavg-cold', 'reached_threshold'] == 1
    assert summary.loc['fedavg-warm', 'reached_threshold'] == 2
    assert summary.loc['fedavg-cold', 'nll_mean'] == pytest.approx(2.)
    assert summary.loc['fedavg-cold', 'nll_std'] == pytest.approx(1.)
    assert summary.loc['fedavg-warm', 'floats_to_threshold_mean'] == \
        pytest.approx(150.)

    written = pd.read_csv(tmp_path / 'aggregate.csv').set_index('method')
    assert list(written.columns[:2]) == ['num_seeds', 'reached_threshold']
    assert written.loc['fedavg-cold', 'reached_threshold'] == 1


def test_threshold_never_reached(tmp_path):
    rows = [row('bpc-fl', seed, 1., None) for seed in range(3)]
    summary = aggregate_seeds(rows, str(tmp_path)).set_index('method')
    assert summary.loc['bpc-fl', 'reached_threshold'] == 0
    assert np.isnan(summary.loc['bpc-fl', 'floats_to_threshold_mean'])


def test_without_threshold_column(tmp_path):
    rows = [{'method': 'bpc-fl', 'seed': 0, 'nll': 1.}]
    summary = aggregate_seeds(rows, str(tmp_path))
    assert 'reached_threshold' not in summary.columns
    assert summary['nll_mean'].tolist() == [1.]
