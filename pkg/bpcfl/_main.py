"""bpcfl - one-shot Bayesian federated learning with pseudocoresets.

Every client compresses its data into a small synthetic coreset, the
server concatenates the coresets in a single round and runs MAP or HMC
on the coreset posterior. Predictive quality, calibration and the number
of communicated floats are compared with a FedAvg baseline.

Run ``bpcfl run --config <experiment>`` for the whole pipeline or one of
the stage commands to run and inspect it step by step.
"""
import argparse
import datetime
import logging
import os
import sys

import yaml

from . import __version__
from ._config import configure_logging, read_config_user_file
from ._experiment import (BPC_METHOD, COLD_METHOD, load_banks, load_data,
                          load_map_params, load_server_coreset,
                          read_experiment_file, run_experiment, seed_dir,
                          stage_aggregate, stage_data, stage_downstream,
                          stage_fedavg, stage_learn_client, stage_pretrain,
                          write_report)
from ._experiment_checks import ExperimentError, artifact
from ._task import resource_usage_logger
from .federation import CommLedger

# set up logging
logger = logging.getLogger(__name__)

HEADER = r"""
______________________________________________________________________
  _                __ _
 | |__  _ __   ___/ _| |
 | '_ \| '_ \ / __| |_| |
 | |_) | |_) | (__|  _| |
 |_.__/| .__/ \___|_| |_|
       |_|
______________________________________________________________________
""" + __doc__

SUBCOMMANDS = {
    'run': "Run every stage for every seed and write the report.",
    'pretrain': "Pretrain the expert trajectories of every client.",
    'learn-coreset': "Learn the coreset of one or all clients.",
    'aggregate': "Combine the client coresets into a server coreset.",
    'downstream': "Run the downstream methods on the server coreset.",
    'fedavg': "Run the FedAvg baseline, cold and warm started.",
    'report': "Collect traces and ledgers of all seeds into CSV tables.",
}


def get_args(argv=None):
    """Define the `bpcfl` command line."""
    parser = argparse.ArgumentParser(
        description=HEADER,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument(
        '-v',
        '--version',
        action='version',
        version=__version__,
        help="return bpcfl's version number and exit")
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True
    for name, help_text in SUBCOMMANDS.items():
        subparser = subparsers.add_parser(name, help=help_text,
                                          description=help_text)
        subparser.add_argument('--config', required=True,
                               help='Path to the experiment file')
        subparser.add_argument(
            '--seed',
            type=int,
            help='Seed of a stage command; defaults to the first seed of '
            'the experiment')
        subparser.add_argument(
            '--out',
            help='Output directory; defaults to <output_dir>/<name> from '
            'the user configuration')
        subparser.add_argument(
            '--dry-run',
            action='store_true',
            help='Validate the experiment, print the resolved settings and '
            'exit without writing anything')
        subparser.add_argument(
            '--user-config',
            default=None,
            help='User configuration file')
        if name == 'learn-coreset':
            subparser.add_argument(
                '--client',
                type=int,
                action='append',
                help='Client id; may be repeated, all clients if omitted')
    return parser.parse_args(argv)


def _stage_seed(args, experiment):
    if args.seed is None:
        return experiment.seeds[0]
    return args.seed


def _load_or_generate(experiment, seed, directory):
    if os.path.exists(os.path.join(directory, 'shards.csv')):
        return load_data(experiment, seed, directory)
    return stage_data(experiment, seed, directory)


def run_stage(command, args, experiment, cfg):
    """Run one command line stage."""
    output_dir = cfg['output_dir']
    if command == 'run':
        return run_experiment(experiment, cfg)
    if command == 'report':
        return write_report(experiment, output_dir)

    seed = _stage_seed(args, experiment)
    directory = seed_dir(output_dir, seed)
    if command == 'pretrain':
        shards, _ = _load_or_generate(experiment, seed, directory)
        return stage_pretrain(experiment, shards, directory)
    if command == 'learn-coreset':
        shards, _ = _load_or_generate(experiment, seed, directory)
        by_id = {shard.client_id: shard for shard in shards}
        clients = args.client or sorted(by_id)
        unknown = sorted(set(clients) - set(by_id))
        if unknown:
            raise ExperimentError("Unknown clients {}, the experiment has "
                                  "clients {}".format(unknown, sorted(by_id)))
        banks = load_banks(directory, shards)
        return [
            stage_learn_client(experiment, by_id[client], seed, directory,
                               banks.get(client)) for client in clients
        ]
    if command == 'aggregate':
        shards, _ = load_data(experiment, seed, directory)
        return stage_aggregate(experiment, shards, directory)
    if command == 'downstream':
        shards, eval_set = load_data(experiment, seed, directory)
        server_coreset, ledger = load_server_coreset(directory, command)
        return stage_downstream(experiment, server_coreset, ledger, shards,
                                seed, directory, eval_set)
    if command == 'fedavg':
        shards, eval_set = load_data(experiment, seed, directory)
        warm_init = bpc_ledger = None
        if experiment.warm_start:
            warm_init = load_map_params(experiment, directory)
            bpc_ledger = CommLedger.load(
                artifact(
                    os.path.join(directory,
                                 'ledger_{}.csv'.format(BPC_METHOD)),
                    command))
        outputs = stage_fedavg(experiment, shards, seed, directory, eval_set,
                               warm_init, bpc_ledger)
        logger.info("FedAvg sent %s floats",
                    outputs[COLD_METHOD][1].total_floats(COLD_METHOD))
        return outputs
    raise ExperimentError("Unknown command {}".format(command))


def main(args):
    """Define the `bpcfl` program."""
    config_file = os.path.abspath(
        os.path.expandvars(os.path.expanduser(args.config)))
    experiment = read_experiment_file(config_file)

    if args.dry_run:
        print(yaml.safe_dump(experiment.echo(), default_flow_style=False))
        return None

    cfg = read_config_user_file(args.user_config, args.out)
    if args.out is None:
        cfg['output_dir'] = os.path.join(cfg['output_dir'], experiment.name)
        cfg['run_dir'] = os.path.join(cfg['output_dir'], 'run')

    if not os.path.exists(cfg['run_dir']):
        os.makedirs(cfg['run_dir'])

    # configure logging
    log_files = configure_logging(
        output=cfg['run_dir'], console_log_level=cfg['log_level'])
    logger.info(HEADER)
    logger.info("Using user config file %s", cfg['config_file'])
    logger.info("Writing program log files to:\n%s", "\n".join(log_files))

    # keep the resolved experiment for future reference
    with open(os.path.join(cfg['run_dir'], 'experiment.yml'), 'w') as file:
        yaml.safe_dump(experiment.echo(), file, default_flow_style=False)

    timestamp_format = "%Y-%m-%d %H:%M:%S"
    start = datetime.datetime.utcnow()
    logger.info("Starting bpcfl v%s command '%s' at time: %s UTC",
                __version__, args.command, start.strftime(timestamp_format))
    logger.info(70 * "-")
    logger.info("EXPERIMENT = %s", config_file)
    logger.info("OUTPUTDIR  = %s", cfg['output_dir'])
    logger.info("RUNDIR     = %s", cfg['run_dir'])
    logger.info(70 * "-")

    resource_log = os.path.join(cfg['run_dir'], 'resource_usage.txt')
    with resource_usage_logger(pid=os.getpid(), filename=resource_log):
        run_stage(args.command, args, experiment, cfg)

    end = datetime.datetime.utcnow()
    logger.info("Ending bpcfl v%s at time: %s UTC", __version__,
                end.strftime(timestamp_format))
    logger.info("Time for running '%s' was: %s", args.command, end - start)
    return cfg


def run(argv=None):
    """Run the `bpcfl` program, logging any exceptions."""
    args = get_args(argv)
    try:
        main(args)
    except ExperimentError as exc:
        if not logger.handlers and not logging.getLogger().handlers:
            logging.basicConfig()
        logger.error("Invalid experiment: %s", exc)
        sys.exit(2)
    except:  # noqa
        if not logging.getLogger().handlers:
            # Add a logging handler if main failed to do so.
            logging.basicConfig()
        logger.exception(
            "Program terminated abnormally, see stack trace "
            "below for more information",
            exc_info=True)
        sys.exit(1)
    else:
        logger.info("Run was successful")


if __name__ == '__main__':
    run()
