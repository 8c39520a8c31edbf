"""Predictive spread inside and outside the data support."""
import logging

import numpy as np

from ..datagen import in_support

logger = logging.getLogger(__name__)


def uncertainty_gap_ratio(inputs, std, intervals):
    """Return the mean predictive std off the support over the one on it.

    Parameters
    ----------
    inputs: :obj:`numpy.ndarray`
        One-dimensional grid inputs ``(N,)`` or ``(N, 1)``.
    std: :obj:`numpy.ndarray`
        Predictive standard deviation at the grid inputs.
    intervals: list of (float, float)
        Support of the training data.

    Returns
    -------
    float
        A value above 1 means the predictive is more uncertain between
        and beyond the intervals than inside them.
    """
    inside = in_support(inputs, intervals)
    std = np.ravel(np.asarray(std, dtype=np.float64))
    if std.shape != inside.shape:
        raise ValueError("Got {} standard deviations for {} inputs".format(
            std.size, inside.size))
    if inside.all():
        raise ValueError("The grid has no points outside the intervals")
    if not inside.any():
        raise ValueError("The grid has no points inside the intervals")
    ratio = float(std[~inside].mean() / std[inside].mean())
    logger.debug("Uncertainty gap ratio %.3f over %s gap points", ratio,
                 np.count_nonzero(~inside))
    return ratio
