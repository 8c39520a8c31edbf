"""Module with functions to check an experiment."""
import logging
import os

import yamale

logger = logging.getLogger(__name__)

SCHEMA_FILE = os.path.join(os.path.dirname(__file__),
                           'experiment_schema.yml')
MAP_METHODS = ('sgd', 'adam')


class ExperimentError(Exception):
    """Experiment configuration contains an error."""


class MissingArtifactError(Exception):
    """A stage input is missing from the output directory."""


def experiment_with_schema(document, filename='<experiment>'):
    """Check that an experiment document matches the schema.

    Unknown keys are errors.
    """
    logger.debug("Checking %s against schema %s", filename, SCHEMA_FILE)
    schema = yamale.make_schema(SCHEMA_FILE)
    try:
        yamale.validate(schema, [(document, filename)], strict=True)
    except ValueError as exc:
        raise ExperimentError(str(exc))


def artifact(path, stage):
    """Return `path` if it exists, raise :class:`MissingArtifactError`."""
    if not os.path.exists(path):
        raise MissingArtifactError(
            "Stage '{}' needs {}, which does not exist; run the stage that "
            "produces it first".format(stage, path))
    return path


def seeds(values):
    """Check the seed list."""
    if not values:
        raise ExperimentError("At least one seed is required")
    if len(set(values)) != len(values):
        raise ExperimentError("Duplicate seeds in {}".format(values))


def dataset(task, settings):
    """Check the dataset section against the task."""
    if task == 'regression':
        intervals = settings.get('intervals')
        if not intervals:
            raise ExperimentError("Regression needs input intervals")
        for low, high in intervals:
            if not low < high:
                raise ExperimentError(
                    "Interval [{}, {}] should have lo < hi".format(low, high))
        alpha = settings.get('dirichlet_alpha')
        if alpha is not None:
            if len(alpha) != len(intervals):
                raise ExperimentError(
                    "Got {} Dirichlet concentrations for {} intervals".format(
                        len(alpha), len(intervals)))
            if any(not a > 0 for a in alpha):
                raise ExperimentError(
                    "Dirichlet concentrations should be positive")
    else:
        for key in ('intervals', 'dirichlet_alpha'):
            if settings.get(key) is not None:
                raise ExperimentError(
                    "Key '{}' only applies to regression".format(key))
    fraction = settings['test_fraction']
    num_points = settings['points_per_client']
    if not 0 < fraction < 1:
        raise ExperimentError(
            "test_fraction should be in (0, 1), not {}".format(fraction))
    if int(fraction * num_points + 0.5) >= num_points:
        raise ExperimentError(
            "Holding out {} of {} points leaves no training data".format(
                fraction, num_points))


def likelihood(task, settings):
    """Check the observation model."""
    sigma = settings.get('sigma')
    if task == 'regression' and not (sigma is not None and sigma > 0):
        raise ExperimentError(
            "Regression needs a positive likelihood sigma, not {}".format(
                sigma))


def architecture(task, settings):
    """Check the network settings."""
    groups = settings.get('group_norm_groups')
    if groups is not None and settings['width'] % groups:
        raise ExperimentError(
            "Width {} is not divisible into {} groups".format(
                settings['width'], groups))


def bpc(task, settings):
    """Check the coreset learning settings."""
    pretrain = settings['pretrain']
    if settings['data_chain_length'] % pretrain['save_interval']:
        raise ExperimentError(
            "data_chain_length {} is not a multiple of save_interval "
            "{}".format(settings['data_chain_length'],
                        pretrain['save_interval']))
    if settings['data_chain_length'] > pretrain['num_steps']:
        raise ExperimentError(
            "data_chain_length {} exceeds the {} pretraining steps".format(
                settings['data_chain_length'], pretrain['num_steps']))
    if (pretrain.get('seeds') is not None
            and len(pretrain['seeds']) != pretrain['num_trajectories']):
        raise ExperimentError(
            "Got {} pretraining seeds for {} trajectories".format(
                len(pretrain['seeds']), pretrain['num_trajectories']))
    if task == 'classification' and settings['step_size_y'] != 0:
        raise ExperimentError(
            "Classification coresets keep one-hot labels, step_size_y "
            "should be 0")


def downstream(settings):
    """Check the downstream methods."""
    methods = settings.get('methods') or []
    if not methods:
        raise ExperimentError("At least one downstream method is required")
    if len(set(methods)) != len(methods):
        raise ExperimentError(
            "Duplicate downstream methods {}".format(methods))
    for method in methods:
        if method not in settings:
            raise ExperimentError(
                "No settings for downstream method '{}'".format(method))
    if 'hmc' in methods:
        hmc = settings['hmc']
        if hmc['num_samples_kept'] > hmc['num_steps']:
            raise ExperimentError(
                "Cannot keep {} HMC samples from {} steps".format(
                    hmc['num_samples_kept'], hmc['num_steps']))


def fedavg(settings, num_clients, methods):
    """Check the FedAvg baseline settings."""
    if settings['clients_per_round'] > num_clients:
        raise ExperimentError(
            "clients_per_round {} exceeds the {} clients".format(
                settings['clients_per_round'], num_clients))
    if settings.get('warm_start') and not any(m in MAP_METHODS
                                              for m in methods):
        raise ExperimentError(
            "A warm start needs a MAP downstream method ({})".format(
                ', '.join(MAP_METHODS)))


def resolved_experiment(cfg):
    """Check the cross-field invariants of a merged experiment."""
    task = cfg['task']
    if cfg['preset'] == 'moons' and task != 'classification':
        raise ExperimentError("The moons preset is a classification task")
    if cfg['preset'].startswith('regression') and task != 'regression':
        raise ExperimentError(
            "The {} preset is a regression task".format(cfg['preset']))
    seeds(cfg['seeds'])
    dataset(task, cfg['dataset'])
    likelihood(task, cfg['likelihood'])
    architecture(task, cfg['architecture'])
    bpc(task, cfg['bpc'])
    downstream(cfg['downstream'])
    fedavg(cfg['fedavg'], cfg['dataset']['num_clients'],
           cfg['downstream']['methods'])
