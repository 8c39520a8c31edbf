"""Client-side Bayesian pseudocoreset learning."""
from ._coreset import (CoresetError, Pseudocoreset, init_coreset,
                       load_coreset, save_coreset)
from ._fkl import (BpcFklConfig, check_bounded, contrastive_gradient,
                   fit_to_coreset, fkl_update, gradient_scale, learn_coreset,
                   sample_starts)
from ._trajectory import PretrainConfig, TrajectoryBank, pretrain_bank

__all__ = [
    # Coresets
    'Pseudocoreset',
    'init_coreset',
    'save_coreset',
    'load_coreset',
    'CoresetError',
    # Expert trajectories
    'PretrainConfig',
    'TrajectoryBank',
    'pretrain_bank',
    # Contrastive updates
    'BpcFklConfig',
    'sample_starts',
    'fit_to_coreset',
    'contrastive_gradient',
    'gradient_scale',
    'check_bounded',
    'fkl_update',
    'learn_coreset',
]
