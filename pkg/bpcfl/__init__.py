"""One-shot Bayesian federated learning with pseudocoresets."""
import logging

from ._version import __version__

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

__all__ = ['__version__']
