"""Experiment configuration and the per-seed pipeline.

An experiment runs, for every seed: data generation, one-shot BPC-FL,
the downstream methods on the server coreset and the FedAvg baseline,
cold and warm started. Every stage reads and writes files in a seed
directory so the command line stages can be run one by one.
"""
import collections
import copy
import glob
import json
import logging
import os
import re

import numpy as np
import pandas as pd
import yaml

from ._experiment_checks import (MAP_METHODS, ExperimentError,
                                 MissingArtifactError, artifact,
                                 experiment_with_schema, resolved_experiment)
from ._task import SeedTask, run_tasks
from ._version import __version__
from .bpc import (BpcFklConfig, TrajectoryBank, learn_coreset, load_coreset,
                  pretrain_bank, save_coreset)
from .datagen import (MoonsGenConfig, RegressionGenConfig, full_grid,
                      gen_interval_regression, gen_moons, gen_moons_test,
                      load_shards, save_shards, split_all)
from .evaluation import metrics_bundle, uncertainty_gap_ratio
from .federation import (CommLedger, FedAvgConfig, ServerCoreset, aggregate,
                         floats_to_reach, pooled, run_bpc_fl, run_fedavg,
                         server_target, upload_cost)
from .nn import GroupNormSpec, MlpArchitecture, for_task, init_params
from .posterior import (HmcConfig, OptConfig, PriorSpec, hmc_sample,
                        map_optimize, predictive_mc)

logger = logging.getLogger(__name__)

PRESET_DIR = os.path.join(os.path.dirname(__file__), 'experiments')
FLOAT_FORMAT = '%.17g'
TRACE_COLUMNS = ['round', 'floats_cum', 'nll', 'accuracy', 'ece', 'rmse']
METRICS = ['nll', 'accuracy', 'ece', 'rmse']
BPC_METHOD = 'bpc-fl'
COLD_METHOD = 'fedavg-cold'
WARM_METHOD = 'fedavg-warm'

EvalSet = collections.namedtuple('EvalSet',
                                 ['inputs', 'targets', 'gap_inputs'])


def load_document(filename):
    """Read a YAML or JSON experiment document."""
    try:
        with open(filename) as file:
            document = yaml.safe_load(file)
    except yaml.YAMLError as exc:
        raise ExperimentError("Cannot parse {}: {}".format(filename, exc))
    if not isinstance(document, dict):
        raise ExperimentError(
            "Experiment {} should be a mapping of settings".format(filename))
    return document


def merge_settings(base, update):
    """Return `base` with `update` merged in, recursing into mappings."""
    merged = copy.deepcopy(base)
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_settings(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def preset_file(name):
    return os.path.join(PRESET_DIR, '{}.yml'.format(name))


def read_experiment_file(filename):
    """Read, validate and resolve an experiment file.

    The document is merged over the preset it names, and the merged
    settings are checked against the schema and the cross-field
    invariants.

    Returns
    -------
    :obj:`Experiment`
    """
    if not os.path.isfile(filename):
        raise ExperimentError(
            "Experiment file {} does not exist".format(filename))
    document = load_document(filename)
    experiment_with_schema(document, filename)
    if 'preset' not in document:
        raise ExperimentError(
            "Experiment {} should name a preset: regression, "
            "regression_small or moons".format(filename))
    settings = merge_settings(load_document(preset_file(document['preset'])),
                              document)
    experiment_with_schema(settings, filename)
    resolved_experiment(settings)
    return Experiment(settings, filename)


class Experiment:
    """Resolved experiment settings and the objects built from them."""

    def __init__(self, settings, filename=None):
        self.settings = copy.deepcopy(settings)
        self.filename = filename
        try:
            self._build()
        except (ValueError, TypeError) as exc:
            raise ExperimentError(
                "Invalid experiment settings: {}".format(exc))

    def _build(self):
        settings = self.settings
        task = settings['task']
        network = settings['architecture']
        if task == 'regression':
            input_dim = output_dim = 1
        else:
            input_dim = output_dim = 2
        widths = ([input_dim] + [network['width']] * network['depth'] +
                  [output_dim])
        group_norm = None
        if network.get('group_norm_groups'):
            group_norm = GroupNormSpec(network['group_norm_groups'],
                                       num_layers=min(2, network['depth']))
        self.arch = MlpArchitecture(widths, network['activation'], task,
                                    group_norm)
        if task == 'regression':
            self.lik = for_task(task, settings['likelihood']['sigma'])
        else:
            self.lik = for_task(task)
        self.prior = PriorSpec(settings['prior']['precision'])
        self.bpc = BpcFklConfig.from_dict(settings['bpc'])
        fedavg = dict(settings['fedavg'])
        self.warm_start = bool(fedavg.pop('warm_start', False))
        self.fedavg = FedAvgConfig.from_dict(fedavg)
        downstream = settings['downstream']
        self.methods = list(downstream['methods'])
        self.opt_configs = {
            method: OptConfig.from_dict(downstream[method])
            for method in self.methods if method in MAP_METHODS
        }
        if 'hmc' in self.methods:
            self.hmc_config(0)

    @property
    def name(self):
        return self.settings.get('name') or self.settings['preset']

    @property
    def task(self):
        return self.settings['task']

    @property
    def seeds(self):
        return list(self.settings['seeds'])

    @property
    def map_method(self):
        """The first MAP method; it seeds HMC and the warm start."""
        for method in self.methods:
            if method in MAP_METHODS:
                return method
        return None

    @property
    def evaluation(self):
        defaults = {'num_bins': 10, 'eval_every': 1, 'threshold': None}
        return dict(defaults, **self.settings.get('evaluation', {}))

    @property
    def threshold_metric(self):
        return 'accuracy' if self.task == 'classification' else 'rmse'

    @property
    def higher_is_better(self):
        return self.task == 'classification'

    def hmc_config(self, seed):
        return HmcConfig(seed=seed, **self.settings['downstream']['hmc'])

    def echo(self):
        """Return the resolved settings, sufficient to rerun the experiment."""
        return copy.deepcopy(self.settings)

    def generate(self, seed):
        """Return the split client shards and the evaluation set of a seed."""
        data = self.settings['dataset']
        if self.task == 'regression':
            cfg = RegressionGenConfig(
                intervals=data['intervals'],
                noise_std=data['noise_std'],
                num_clients=data['num_clients'],
                points_per_client=data['points_per_client'],
                dirichlet_alpha=data.get('dirichlet_alpha'),
                seed=seed,
                grid_points=data.get('grid_points', 512))
            shards, grid = gen_interval_regression(cfg)
            gap_grid = full_grid(cfg.intervals,
                                 cfg.grid_points * len(cfg.intervals),
                                 data.get('gap_margin', 0.))
            eval_set = EvalSet(grid.inputs, grid.targets, gap_grid.inputs)
        else:
            cfg = MoonsGenConfig(points_per_client=data['points_per_client'],
                                 num_clients=data['num_clients'],
                                 noise_std=data['noise_std'],
                                 seed=seed)
            shards = gen_moons(cfg)
            inputs, targets = gen_moons_test(data.get('test_points', 1000),
                                             data['noise_std'],
                                             seed=[seed, 1])
            eval_set = EvalSet(inputs, targets, None)
        shards = split_all(shards, data['test_fraction'], seed)
        return shards, eval_set

    def __repr__(self):
        return "Experiment({}, seeds={})".format(self.name, self.seeds)


def seed_dir(output_dir, seed):
    return os.path.join(output_dir, 'seed_{}'.format(seed))


def _makedirs(path):
    if not os.path.exists(path):
        os.makedirs(path)
    return path


def _write_json(data, filename):
    with open(filename, 'w') as file:
        json.dump(data, file, indent=2, sort_keys=True)


def _write_csv(frame, filename):
    frame.to_csv(filename, index=False, float_format=FLOAT_FORMAT)


def _record_dict(record):
    return {
        key: (None if value is None else
              int(value) if key == 'floats_cum' else float(value))
        for key, value in record._asdict().items()
    }


def _evaluate(experiment, samples, inputs, targets, floats_cum=None):
    predictive = predictive_mc(experiment.arch, samples, inputs,
                               experiment.lik)
    return metrics_bundle(predictive, targets, experiment.task, floats_cum,
                          experiment.evaluation['num_bins'])


# Data


def stage_data(experiment, seed, directory):
    """Generate the data of a seed and write ``shards.csv``."""
    shards, eval_set = experiment.generate(seed)
    _makedirs(directory)
    save_shards(shards, os.path.join(directory, 'shards.csv'))
    logger.info("Generated %s client shards for seed %s", len(shards), seed)
    return shards, eval_set


def load_data(experiment, seed, directory):
    """Read ``shards.csv``; the evaluation set is regenerated."""
    shards = load_shards(artifact(os.path.join(directory, 'shards.csv'),
                                  'data'))
    _, eval_set = experiment.generate(seed)
    return shards, eval_set


# Coresets


def bank_dir(directory, client_id):
    return os.path.join(directory, 'banks', 'client_{}'.format(client_id))


def coreset_file(directory, client_id):
    return os.path.join(directory, 'coresets',
                        'client_{}.csv'.format(client_id))


def stage_pretrain(experiment, shards, directory=None):
    """Pretrain the trajectory banks of all clients.

    If `directory` is given the banks are written below it.
    """
    banks = {}
    for shard in shards:
        logger.info("Pretraining trajectories of client %s", shard.client_id)
        bank = pretrain_bank(shard, experiment.arch, experiment.prior,
                             experiment.bpc, experiment.lik)
        if directory is not None:
            bank.save(bank_dir(directory, shard.client_id))
        banks[shard.client_id] = bank
    return banks


def load_banks(directory, shards):
    """Read the banks written by :func:`stage_pretrain`, where present."""
    banks = {}
    for shard in shards:
        path = bank_dir(directory, shard.client_id)
        if glob.glob(os.path.join(path, 'trajectory_*.bin')):
            banks[shard.client_id] = TrajectoryBank.load(path)
    return banks


def _save_coresets(coresets, directory):
    _makedirs(os.path.join(directory, 'coresets'))
    for coreset in coresets:
        save_coreset(coreset, coreset_file(directory, coreset.owner))


def stage_coresets(experiment, shards, seed, directory, banks=None,
                   max_parallel_clients=1):
    """Run BPC-FL and write the coresets, the server coreset and ledger."""
    server_coreset, ledger = run_bpc_fl(
        shards, experiment.arch, experiment.prior, experiment.bpc,
        experiment.lik, seed=seed, banks=banks,
        max_parallel_clients=max_parallel_clients)
    _save_coresets(server_coreset.coresets, directory)
    server_coreset.save(os.path.join(directory, 'server_coreset.json'))
    ledger.save(os.path.join(directory, 'ledger_{}.csv'.format(BPC_METHOD)))
    return server_coreset, ledger


def stage_learn_client(experiment, shard, seed, directory, bank=None):
    """Learn and write the coreset of a single client."""
    coreset = learn_coreset(shard, experiment.arch, experiment.prior,
                            experiment.bpc, experiment.lik, seed=seed,
                            bank=bank)
    _save_coresets([coreset], directory)
    return coreset


def stage_aggregate(experiment, shards, directory):
    """Combine the coreset files of all clients into a server coreset."""
    label_mode = 'frozen' if experiment.bpc.labels_frozen else 'learnable'
    coresets = []
    for shard in shards:
        filename = artifact(coreset_file(directory, shard.client_id),
                            'aggregate')
        coresets.append(
            load_coreset(filename, shard.client_id, label_mode,
                         experiment.task))
    ledger = CommLedger()
    for coreset in coresets:
        floats, integers = upload_cost(coreset)
        ledger.record(0, 'up', coreset.owner, floats, integers, BPC_METHOD)
    server_coreset = aggregate(coresets, [s.num_train for s in shards])
    server_coreset.save(os.path.join(directory, 'server_coreset.json'))
    ledger.save(os.path.join(directory, 'ledger_{}.csv'.format(BPC_METHOD)))
    logger.info("Aggregated %s coresets with weights %s", len(coresets),
                server_coreset.weights)
    return server_coreset, ledger


def load_server_coreset(directory, stage):
    server_coreset = ServerCoreset.load(
        artifact(os.path.join(directory, 'server_coreset.json'), stage))
    ledger = CommLedger.load(
        artifact(os.path.join(directory, 'ledger_{}.csv'.format(BPC_METHOD)),
                 stage))
    return server_coreset, ledger


# Downstream inference


def _hmc_summary(target, result):
    log_densities = target.log_unnorm(np.stack(result.samples))
    energy_errors = np.abs(result.energy_errors[np.isfinite(
        result.energy_errors)])
    summary = {
        'num_samples': len(result.samples),
        'acceptance_rate': float(result.acceptance_rate),
        'log_density_mean': float(np.mean(log_densities)),
        'log_density_std': float(np.std(log_densities)),
        'num_diverging': int(np.count_nonzero(
            ~np.isfinite(result.energy_errors))),
    }
    if energy_errors.size:
        summary.update(abs_energy_error_median=float(np.median(energy_errors)),
                       abs_energy_error_max=float(np.max(energy_errors)))
    return summary


def stage_downstream(experiment, server_coreset, bpc_ledger, shards, seed,
                     directory, eval_set):
    """Run the downstream methods on the server coreset.

    Writes ``map_<method>.npy`` for every MAP method, a one-row trace per
    method and ``downstream.json``.

    Returns
    -------
    tuple
        The per-method results and the MAP parameters by method.
    """
    target = server_target(server_coreset, experiment.arch, experiment.prior,
                           experiment.lik)
    floats = bpc_ledger.total_floats(BPC_METHOD)
    test_inputs, test_targets = pooled(shards, train=False)
    results = collections.OrderedDict()
    map_params = {}
    for method in experiment.methods:
        logger.info("Running downstream %s on the server coreset", method)
        result = {}
        if method in MAP_METHODS:
            params = map_optimize(target, init_params(experiment.arch, seed),
                                  experiment.opt_configs[method])
            np.save(os.path.join(directory, 'map_{}.npy'.format(method)),
                    params)
            map_params[method] = params
            samples = params[np.newaxis]
        else:
            if experiment.map_method is None:
                start = init_params(experiment.arch, seed)
            else:
                start = map_params[experiment.map_method]
            hmc = hmc_sample(target, start, experiment.hmc_config(seed))
            samples = np.stack(hmc.samples)
            result['hmc'] = _hmc_summary(target, hmc)
            if experiment.task == 'regression':
                spread = predictive_mc(experiment.arch, samples,
                                       eval_set.gap_inputs, experiment.lik,
                                       observation_noise=False)
                result['uncertainty_gap_ratio'] = uncertainty_gap_ratio(
                    eval_set.gap_inputs, spread.std,
                    experiment.settings['dataset']['intervals'])
        record = _evaluate(experiment, samples, eval_set.inputs,
                           eval_set.targets, floats)
        result['metrics'] = _record_dict(record)
        result['held_out'] = _record_dict(
            _evaluate(experiment, samples, test_inputs, test_targets,
                      floats))
        trace = pd.DataFrame([dict(round=0, **result['metrics'])],
                             columns=TRACE_COLUMNS)
        _write_csv(
            trace,
            os.path.join(directory,
                         'trace_{}-{}.csv'.format(BPC_METHOD, method)))
        logger.info("Downstream %s: %s", method, result['metrics'])
        results['{}-{}'.format(BPC_METHOD, method)] = result
    _write_json(results, os.path.join(directory, 'downstream.json'))
    return results, map_params


def load_map_params(experiment, directory):
    method = experiment.map_method
    if method is None:
        return None
    return np.load(
        artifact(os.path.join(directory, 'map_{}.npy'.format(method)),
                 'fedavg'))


# Baseline


def _fedavg_trace(experiment, eval_set, rounds):
    rows = []
    every = experiment.evaluation['eval_every']

    def callback(round_number, params, floats_cum):
        if round_number % every and round_number != rounds:
            return
        record = _evaluate(experiment, params[np.newaxis], eval_set.inputs,
                           eval_set.targets, floats_cum)
        rows.append(dict(round=round_number, **_record_dict(record)))

    return rows, callback


def stage_fedavg(experiment, shards, seed, directory, eval_set,
                 warm_init=None, bpc_ledger=None):
    """Run FedAvg cold and, if configured, warm started from a MAP.

    Returns
    -------
    dict
        Per method the metric trace (a :obj:`pandas.DataFrame`) and the
        :obj:`CommLedger`.
    """
    runs = [(COLD_METHOD, experiment.fedavg, None)]
    if experiment.warm_start:
        if warm_init is None:
            raise MissingArtifactError(
                "A warm-started FedAvg needs the coreset MAP of method "
                "'{}'".format(experiment.map_method))
        runs.append((WARM_METHOD, experiment.fedavg.with_init(warm_init),
                     bpc_ledger))
    outputs = collections.OrderedDict()
    for method, cfg, init_ledger in runs:
        rows, callback = _fedavg_trace(experiment, eval_set, cfg.rounds)
        _, ledger = run_fedavg(shards, experiment.arch, experiment.lik, cfg,
                               prior=experiment.prior, seed=seed,
                               init_ledger=init_ledger, method=method,
                               callback=callback)
        trace = pd.DataFrame(rows, columns=TRACE_COLUMNS)
        _write_csv(trace,
                   os.path.join(directory, 'trace_{}.csv'.format(method)))
        ledger.save(os.path.join(directory, 'ledger_{}.csv'.format(method)))
        outputs[method] = (trace, ledger)
    return outputs


# Whole pipeline


def _method_trace(method, downstream, fedavg):
    if method in fedavg:
        return fedavg[method][0]
    return pd.DataFrame([dict(round=0, **downstream[method]['metrics'])],
                        columns=TRACE_COLUMNS)


def _summary_rows(experiment, seed, downstream, fedavg):
    threshold = experiment.evaluation['threshold']
    metric = experiment.threshold_metric
    rows = []
    for method, result in downstream.items():
        row = dict(seed=seed, method=method, **result['metrics'])
        row['uncertainty_gap_ratio'] = result.get('uncertainty_gap_ratio')
        rows.append(row)
    for method, (trace, ledger) in fedavg.items():
        final = trace.iloc[-1].to_dict()
        row = dict(seed=seed, method=method,
                   **{key: final[key] for key in METRICS})
        row['floats_cum'] = ledger.total_floats(method)
        rows.append(row)
    for row in rows:
        row['floats_to_threshold'] = None
        if threshold is not None:
            row['floats_to_threshold'] = floats_to_reach(
                _method_trace(row['method'], downstream, fedavg), metric,
                threshold, experiment.higher_is_better)
    return rows


def run_seed(experiment, seed, output_dir, bank_spill_dir=None,
             max_parallel_clients=1):
    """Run the complete pipeline of one seed.

    Returns
    -------
    list of dict
        Final metrics per method, the rows of ``aggregate.csv``.
    """
    directory = _makedirs(seed_dir(output_dir, seed))
    logger.info("Running seed %s in %s", seed, directory)
    shards, eval_set = stage_data(experiment, seed, directory)

    banks = None
    if bank_spill_dir is not None:
        spill = os.path.join(bank_spill_dir, 'seed_{}'.format(seed))
        banks = stage_pretrain(experiment, shards, spill)
    server_coreset, bpc_ledger = stage_coresets(
        experiment, shards, seed, directory, banks, max_parallel_clients)

    downstream, map_params = stage_downstream(experiment, server_coreset,
                                              bpc_ledger, shards, seed,
                                              directory, eval_set)
    warm_init = map_params.get(experiment.map_method)
    fedavg = stage_fedavg(experiment, shards, seed, directory, eval_set,
                          warm_init, bpc_ledger)

    ledger = CommLedger(bpc_ledger.raw_events)
    for _, method_ledger in fedavg.values():
        ledger.extend(method_ledger)
    ledger.save(os.path.join(directory, 'ledger.csv'))

    rows = _summary_rows(experiment, seed, downstream, fedavg)
    result = {
        'version': __version__,
        'seed': seed,
        'config': experiment.echo(),
        'downstream': downstream,
        'fedavg': {
            method: trace.to_dict(orient='records')
            for method, (trace, _) in fedavg.items()
        },
        'ledger': ledger.summary(),
        'floats_to_threshold': {
            row['method']: row['floats_to_threshold']
            for row in rows
        },
    }
    _write_json(_jsonable(result), os.path.join(directory, 'result.json'))
    return rows


def _jsonable(value):
    """Replace NaN by None and numpy scalars by Python numbers."""
    if isinstance(value, dict):
        return {key: _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return None if np.isnan(value) else float(value)
    return value


def aggregate_seeds(rows, output_dir):
    """Write mean and standard deviation over seeds to ``aggregate.csv``.

    Seeds that never reached the accuracy threshold are left out of the
    ``floats_to_threshold`` statistics; ``reached_threshold`` counts the
    seeds that did.
    """
    frame = pd.DataFrame(rows)
    columns = [
        c for c in METRICS + ['uncertainty_gap_ratio', 'floats_cum',
                              'floats_to_threshold'] if c in frame.columns
    ]
    frame[columns] = frame[columns].astype(np.float64)
    grouped = frame.groupby('method', sort=True)[columns]
    summary = grouped.mean().add_suffix('_mean').join(
        grouped.std(ddof=0).add_suffix('_std'))
    summary = summary[[
        '{}_{}'.format(c, stat) for c in columns for stat in ('mean', 'std')
    ]]
    summary.insert(0, 'num_seeds',
                   frame.groupby('method', sort=True).size())
    if 'floats_to_threshold' in columns:
        summary.insert(1, 'reached_threshold',
                       frame.groupby('method', sort=True)
                       ['floats_to_threshold'].count())
    summary = summary.reset_index()
    filename = os.path.join(output_dir, 'aggregate.csv')
    _write_csv(summary, filename)
    return summary


def run_experiment(experiment, config_user):
    """Run all seeds and write the aggregate and the report."""
    output_dir = _makedirs(config_user['output_dir'])
    max_parallel = config_user['max_parallel_tasks']
    seeds = experiment.seeds
    # Worker processes cannot start pools of their own
    if len(seeds) > 1 and max_parallel != 1:
        clients_parallel = 1
    else:
        clients_parallel = max_parallel or os.cpu_count()
    tasks = [
        SeedTask(run_seed,
                 (experiment, seed, output_dir,
                  config_user.get('bank_spill_dir'), clients_parallel),
                 name='seed_{}'.format(seed)) for seed in seeds
    ]
    results = run_tasks(tasks, max_parallel)
    rows = [row for seed_rows in results for row in seed_rows]
    aggregate_seeds(rows, output_dir)
    write_report(experiment, output_dir)
    return rows


# Report


def _seed_dirs(output_dir):
    found = []
    for path in glob.glob(os.path.join(output_dir, 'seed_*')):
        match = re.match(r'seed_(\d+)$', os.path.basename(path))
        if match and os.path.isdir(path):
            found.append((int(match.group(1)), path))
    return sorted(found)


def write_report(experiment, output_dir):
    """Collect the traces and ledgers of all seeds into ``report/``.

    Writes ``trace.csv`` (metric against cumulative floats per method and
    seed), ``floats_to_threshold.csv`` and ``ledger_summary.csv``.
    """
    seed_dirs = _seed_dirs(output_dir)
    if not seed_dirs:
        raise MissingArtifactError(
            "No seed_* directories found in {}".format(output_dir))
    traces = []
    ledgers = []
    for seed, path in seed_dirs:
        for filename in sorted(glob.glob(os.path.join(path, 'trace_*.csv'))):
            method = os.path.basename(filename)[len('trace_'):-len('.csv')]
            trace = pd.read_csv(filename, float_precision='round_trip')
            trace.insert(0, 'method', method)
            trace.insert(0, 'seed', seed)
            traces.append(trace)
        ledger_file = os.path.join(path, 'ledger.csv')
        if os.path.exists(ledger_file):
            for method, totals in CommLedger.load(
                    ledger_file).summary().items():
                ledgers.append(dict(seed=seed, method=method, **totals))
    if not traces:
        raise MissingArtifactError(
            "No trace_*.csv files found below {}".format(output_dir))
    report_dir = _makedirs(os.path.join(output_dir, 'report'))
    trace = pd.concat(traces, ignore_index=True)
    _write_csv(trace, os.path.join(report_dir, 'trace.csv'))

    threshold = experiment.evaluation['threshold']
    metric = experiment.threshold_metric
    rows = []
    if threshold is not None:
        for (seed, method), group in trace.groupby(['seed', 'method'],
                                                   sort=True):
            floats = floats_to_reach(group, metric, threshold,
                                     experiment.higher_is_better)
            rows.append({
                'seed': seed,
                'method': method,
                'metric': metric,
                'threshold': threshold,
                'reached': floats is not None,
                'floats': floats,
            })
    reach = pd.DataFrame(
        rows,
        columns=['seed', 'method', 'metric', 'threshold', 'reached',
                 'floats'])
    _write_csv(reach, os.path.join(report_dir, 'floats_to_threshold.csv'))
    _write_csv(
        pd.DataFrame(ledgers,
                     columns=['seed', 'method', 'floats_up', 'floats_down',
                              'integers_up', 'events']),
        os.path.join(report_dir, 'ledger_summary.csv'))
    logger.info("Wrote report to %s", report_dir)
    return reach
