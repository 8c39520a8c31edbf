"""Predictive quality metrics."""
import collections
import logging
import math

import numpy as np

logger = logging.getLogger(__name__)

MetricsRecord = collections.namedtuple(
    'MetricsRecord', ['nll', 'accuracy', 'rmse', 'ece', 'floats_cum'])
MetricsRecord.__new__.__defaults__ = (None, None, None, None, None)

DEFAULT_NUM_BINS = 10
ROW_SUM_TOLERANCE = 1e-6


def _class_indices(labels):
    labels = np.asarray(labels)
    if labels.ndim == 2:
        return np.argmax(labels, axis=1)
    return labels.astype(int)


def check_probabilities(probabilities):
    """Raise ValueError unless every row is a probability vector."""
    probabilities = np.asarray(probabilities, dtype=np.float64)
    if probabilities.ndim != 2:
        raise ValueError("Probabilities should be a (N, C) matrix, not of "
                         "shape {}".format(probabilities.shape))
    if np.any(probabilities < 0) or np.any(probabilities > 1):
        raise ValueError("Probabilities should lie in [0, 1]")
    row_sums = probabilities.sum(axis=1)
    bad = np.flatnonzero(np.abs(row_sums - 1.) > ROW_SUM_TOLERANCE)
    if bad.size:
        raise ValueError("Probability row {} sums to {}".format(
            bad[0], row_sums[bad[0]]))
    return probabilities


def confidence_bins(confidences, num_bins=DEFAULT_NUM_BINS):
    """Return the equal-width bin of every confidence.

    Bin ``b`` holds the confidences in ``(b / B, (b + 1) / B]``; a
    confidence of 0 goes to the first bin.

    >>> confidence_bins([0.05, 0.1, 0.55, 1.0]).tolist()
    [0, 0, 5, 9]
    """
    confidences = np.asarray(confidences, dtype=np.float64)
    bins = np.ceil(confidences * num_bins).astype(int) - 1
    return np.clip(bins, 0, num_bins - 1)


def ece(probabilities, labels, num_bins=DEFAULT_NUM_BINS):
    """Return the expected calibration error.

    ``sum_b |B_b| / N * |acc(B_b) - conf(B_b)|`` over equal-width bins of
    the top-class confidence; the predicted class is the first maximum.

    Parameters
    ----------
    probabilities: :obj:`numpy.ndarray`
        Predictive class probabilities ``(N, C)``.
    labels: :obj:`numpy.ndarray`
        One-hot rows ``(N, C)`` or class indices ``(N,)``.
    num_bins: int
        Number of bins.

    Returns
    -------
    float
    """
    probabilities = check_probabilities(probabilities)
    truth = _class_indices(labels)
    num_points = len(probabilities)
    if not num_points:
        raise ValueError("ECE needs at least one prediction")
    predicted = np.argmax(probabilities, axis=1)
    confidences = probabilities[np.arange(num_points), predicted]
    correct = (predicted == truth).astype(np.float64)
    bins = confidence_bins(confidences, num_bins)
    counts = np.bincount(bins, minlength=num_bins)
    correct_sums = np.bincount(bins, weights=correct, minlength=num_bins)
    confidence_sums = np.bincount(bins, weights=confidences,
                                  minlength=num_bins)
    terms = []
    for count, correct_sum, confidence_sum in zip(counts, correct_sums,
                                                  confidence_sums):
        if not count:
            continue
        gap = abs(correct_sum / count - confidence_sum / count)
        terms.append(count / num_points * gap)
    return math.fsum(terms)


def classification_metrics(probabilities, labels, num_bins=DEFAULT_NUM_BINS):
    """Return NLL, accuracy and ECE of class probabilities."""
    probabilities = check_probabilities(probabilities)
    truth = _class_indices(labels)
    true_probs = probabilities[np.arange(len(truth)), truth]
    tiny = np.finfo(np.float64).tiny
    nll = float(-np.mean(np.log(np.maximum(true_probs, tiny))))
    accuracy = float(np.mean(np.argmax(probabilities, axis=1) == truth))
    return nll, accuracy, ece(probabilities, truth, num_bins)


def regression_metrics(mean, std, targets):
    """Return the Gaussian NLL and the RMSE of a predictive mean and std."""
    mean = np.asarray(mean, dtype=np.float64)
    std = np.asarray(std, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64).reshape(mean.shape)
    if np.any(std <= 0):
        raise ValueError("Predictive standard deviations should be positive")
    residual = targets - mean
    nll = float(
        np.mean(0.5 * np.log(2. * np.pi * std**2) + residual**2 /
                (2. * std**2)))
    rmse = float(np.sqrt(np.mean(residual**2)))
    return nll, rmse


def metrics_bundle(predictive, targets, task, floats_cum=None,
                   num_bins=DEFAULT_NUM_BINS):
    """Evaluate a predictive summary against targets.

    Parameters
    ----------
    predictive: :obj:`bpcfl.posterior.Predictive`
        Predictive distribution on the test inputs.
    targets: :obj:`numpy.ndarray`
        One-hot rows for classification, real outputs for regression.
    task: str
        ``classification`` or ``regression``.
    floats_cum: int, optional
        Communication spent to obtain the predictive.

    Returns
    -------
    :obj:`MetricsRecord`
        Accuracy and ECE are None for regression, RMSE for classification.
    """
    if task == 'classification':
        nll, accuracy, error = classification_metrics(
            predictive.probabilities, targets, num_bins)
        return MetricsRecord(nll=nll, accuracy=accuracy, ece=error,
                             floats_cum=floats_cum)
    nll, rmse = regression_metrics(predictive.mean, predictive.std, targets)
    return MetricsRecord(nll=nll, rmse=rmse, floats_cum=floats_cum)
