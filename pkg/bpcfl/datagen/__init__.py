"""Synthetic federated datasets."""
from ._io import load_shards, save_shards
from ._moons import (MoonsGenConfig, gen_moons, gen_moons_test, moon_points,
                     one_hot)
from ._regression import (DEFAULT_INTERVALS, Grid, RegressionGenConfig,
                          full_grid, gen_interval_regression, ground_truth,
                          in_support, interval_proportions, support_grid)
from ._split import split_all, split_train_test

__all__ = [
    # Interval regression
    'DEFAULT_INTERVALS',
    'RegressionGenConfig',
    'Grid',
    'ground_truth',
    'gen_interval_regression',
    'interval_proportions',
    'in_support',
    'support_grid',
    'full_grid',
    # Moons
    'MoonsGenConfig',
    'gen_moons',
    'gen_moons_test',
    'moon_points',
    'one_hot',
    # Splits
    'split_train_test',
    'split_all',
    # Files
    'save_shards',
    'load_shards',
]
