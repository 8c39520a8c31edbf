"""Predictive metrics and diagnostics."""
from ._metrics import (DEFAULT_NUM_BINS, MetricsRecord, check_probabilities,
                       classification_metrics, confidence_bins, ece,
                       metrics_bundle, regression_metrics)
from ._uncertainty import uncertainty_gap_ratio

__all__ = [
    'MetricsRecord',
    'DEFAULT_NUM_BINS',
    'check_probabilities',
    'confidence_bins',
    'ece',
    'classification_metrics',
    'regression_metrics',
    'metrics_bundle',
    'uncertainty_gap_ratio',
]
