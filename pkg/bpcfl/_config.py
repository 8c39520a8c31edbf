"""User configuration and logging setup."""
import logging
import logging.config
import os
import time

import yaml

logger = logging.getLogger(__name__)

DEFAULT_USER_CONFIG = os.path.join(os.path.dirname(__file__),
                                   'config-user.yml')
USER_DEFAULTS = {
    'log_level': 'info',
    'output_dir': './bpcfl_output',
    'max_parallel_tasks': 1,
    'bank_spill_dir': None,
}


def _normalize_path(path):
    """Expand ``~`` and environment variables and make `path` absolute."""
    if path is None:
        return None
    return os.path.abspath(os.path.expanduser(os.path.expandvars(path)))


def read_config_user_file(config_file=None, output_dir=None):
    """Read the user configuration and derive the run directories.

    Parameters
    ----------
    config_file: str, optional
        YAML file; the packaged ``config-user.yml`` if not given.
    output_dir: str, optional
        Overrides the ``output_dir`` of the file.

    Returns
    -------
    dict
    """
    if config_file is None:
        config_file = DEFAULT_USER_CONFIG
    config_file = _normalize_path(config_file)
    if not os.path.isfile(config_file):
        raise FileNotFoundError(
            "User configuration file {} does not exist".format(config_file))
    with open(config_file, 'r') as file:
        cfg = yaml.safe_load(file) or {}

    unknown = sorted(set(cfg) - set(USER_DEFAULTS))
    if unknown:
        logger.warning("Ignoring unknown keys in %s: %s", config_file,
                       ', '.join(unknown))
    for key in USER_DEFAULTS:
        if key not in cfg:
            logger.info(
                "No %s specification in config file, "
                "defaulting to %s", key, USER_DEFAULTS[key])
            cfg[key] = USER_DEFAULTS[key]

    if output_dir is not None:
        cfg['output_dir'] = output_dir
    cfg['output_dir'] = _normalize_path(cfg['output_dir'])
    cfg['bank_spill_dir'] = _normalize_path(cfg['bank_spill_dir'])
    cfg['run_dir'] = os.path.join(cfg['output_dir'], 'run')
    cfg['config_file'] = config_file
    return cfg


def configure_logging(cfg_file=None, output=None, console_log_level=None):
    """Set up logging from a YAML ``dictConfig`` file.

    Log files named relative in `cfg_file` are placed in `output`.

    Returns
    -------
    list of str
        The log files written.
    """
    if cfg_file is None:
        cfg_file = os.path.join(os.path.dirname(__file__),
                                'config-logging.yml')

    if output is None:
        output = os.getcwd()

    cfg_file = os.path.abspath(cfg_file)
    with open(cfg_file) as file_handler:
        cfg = yaml.safe_load(file_handler)

    log_files = []
    for handler in cfg['handlers'].values():
        if 'filename' in handler:
            if not os.path.isabs(handler['filename']):
                handler['filename'] = os.path.join(output, handler['filename'])
            log_files.append(handler['filename'])
        if console_log_level is not None and 'stream' in handler:
            if handler['stream'] in ('ext://sys.stdout', 'ext://sys.stderr'):
                handler['level'] = console_log_level.upper()

    logging.config.dictConfig(cfg)
    logging.Formatter.converter = time.gmtime
    logging.captureWarnings(True)

    return log_files
