"""Tests for :mod:`bpcfl.evaluation._metrics`."""
import math

import numpy as np
import pytest

from bpcfl.evaluation import (check_probabilities, classification_metrics,
                              confidence_bins, ece, metrics_bundle,
                              regression_metrics)
from bpcfl.posterior import Predictive


def brute_force_ece(probabilities, labels, num_bins):
    """Bin point by point in input order."""
    num_points = len(probabilities)
    counts = [0] * num_bins
    correct = [0.] * num_bins
    confidence = [0.] * num_bins
    for row, label in zip(probabilities, labels):
        predicted = int(np.argmax(row))
        top = row[predicted]
        index = min(max(int(math.ceil(top * num_bins)) - 1, 0), num_bins - 1)
        counts[index] += 1
        correct[index] += float(predicted == label)
        confidence[index] += top
    return math.fsum(
        count / num_points * abs(correct[b] / count - confidence[b] / count)
        for b, count in enumerate(counts) if count)


def test_hand_binned_example():
    probabilities = np.array([[0.6, 0.4], [0.2, 0.8]])
    assert ece(probabilities, [0, 1]) == pytest.approx(0.3, abs=1e-15)


def test_perfect_calibration():
    probabilities = np.eye(3)[[0, 2, 1, 1]]
    assert ece(probabilities, [0, 2, 1, 1]) == 0.


def test_confidence_bins_edges():
    np.testing.assert_array_equal(confidence_bins([0., 0.1, 0.1000001, 1.]),
                                  [0, 0, 1, 9])


@pytest.mark.parametrize('num_bins', [1, 10, 15])
def test_ece_matches_brute_force(num_bins):
    rng = np.random.default_rng(num_bins)
    for _ in range(1000):
        num_points = int(rng.integers(1, 30))
        num_classes = int(rng.integers(2, 5))
        probabilities = rng.dirichlet(np.ones(num_classes), size=num_points)
        labels = rng.integers(num_classes, size=num_points)
        assert ece(probabilities, labels, num_bins) == brute_force_ece(
            probabilities, labels, num_bins)


def test_one_hot_labels_match_indices():
    probabilities = np.array([[0.7, 0.3], [0.45, 0.55], [0.9, 0.1]])
    labels = [0, 0, 1]
    assert ece(probabilities, np.eye(2)[labels]) == ece(probabilities,
                                                        labels)


@pytest.mark.parametrize('probabilities', [
    [[0.5, 0.6]],
    [[1.2, -0.2]],
    [0.5, 0.5],
])
def test_invalid_probabilities(probabilities):
    with pytest.raises(ValueError):
        check_probabilities(probabilities)


def test_uniform_probabilities():
    """Ties go to the first class."""
    probabilities = np.full((4, 2), 0.5)
    nll, accuracy, error = classification_metrics(probabilities,
                                                  [0, 0, 0, 1])
    assert nll == pytest.approx(np.log(2.))
    assert accuracy == 0.75
    assert error == pytest.approx(0.25)


def test_classification_per_point():
    rng = np.random.default_rng(0)
    probabilities = rng.dirichlet(np.ones(3), size=50)
    labels = rng.integers(3, size=50)
    nll, accuracy, _ = classification_metrics(probabilities, labels)
    expected_nll = sum(-np.log(row[label])
                       for row, label in zip(probabilities, labels)) / 50
    expected_accuracy = sum(
        int(np.argmax(row) == label)
        for row, label in zip(probabilities, labels)) / 50
    assert nll == pytest.approx(expected_nll, rel=1e-12)
    assert accuracy == expected_accuracy


def test_zero_probability_is_finite():
    nll, _, _ = classification_metrics([[1., 0.]], [1])
    assert np.isfinite(nll)


def test_regression_exact_mean():
    targets = np.array([[0.5], [1.], [-2.]])
    nll, rmse = regression_metrics(targets, np.full((3, 1), 0.3), targets)
    assert rmse == 0.
    assert nll == pytest.approx(0.5 * np.log(2. * np.pi * 0.09))


def test_regression_per_point():
    rng = np.random.default_rng(1)
    mean = rng.normal(size=20)
    std = rng.uniform(0.1, 1., 20)
    targets = rng.normal(size=20)
    nll, rmse = regression_metrics(mean, std, targets)
    expected = np.mean([
        -math.log(1. / (math.sqrt(2. * math.pi) * s) *
                  math.exp(-(t - m)**2 / (2. * s**2)))
        for m, s, t in zip(mean, std, targets)
    ])
    assert nll == pytest.approx(expected, rel=1e-10)
    assert rmse == pytest.approx(np.sqrt(np.mean((targets - mean)**2)))


def test_bundle():
    classification = Predictive('classification',
                                probabilities=np.array([[0.6, 0.4],
                                                        [0.2, 0.8]]))
    record = metrics_bundle(classification, np.eye(2)[[1, 1]],
                            'classification', floats_cum=60)
    assert record.accuracy == 0.5
    assert record.rmse is None
    assert record.floats_cum == 60

    regression = Predictive('regression', mean=np.zeros((2, 1)),
                            std=np.ones((2, 1)))
    record = metrics_bundle(regression, np.array([[1.], [-1.]]),
                            'regression')
    assert record.nll == pytest.approx(0.5 * np.log(2. * np.pi) + 0.5)
    assert record.rmse == 1.
    assert record.accuracy is None and record.ece is None
