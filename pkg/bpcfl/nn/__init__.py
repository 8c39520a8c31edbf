"""Fixed-architecture MLPs with analytic gradients."""
from ._architecture import (GroupNormSpec, MlpArchitecture, check_shape,
                            classification_mlp, init_params, param_count,
                            regression_mlp, unpack)
from ._likelihood import (LikelihoodSpec, categorical, for_task, gaussian,
                          grad_data, grad_params, log_likelihood,
                          value_and_grad_params)
from ._network import NumericalError, forward, group_norm, swish

__all__ = [
    # Architectures
    'MlpArchitecture',
    'GroupNormSpec',
    'regression_mlp',
    'classification_mlp',
    # Parameter vectors
    'param_count',
    'init_params',
    'unpack',
    'check_shape',
    # Network evaluation
    'forward',
    'group_norm',
    'swish',
    # Likelihoods
    'LikelihoodSpec',
    'gaussian',
    'categorical',
    'for_task',
    'log_likelihood',
    'value_and_grad_params',
    'grad_params',
    'grad_data',
    'NumericalError',
]
