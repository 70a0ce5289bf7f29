"""
Analog Distance Module
Handles feature vectors of impressions, their distance and migration budgets.
"""

from .budget import MigrationBudget
from .errors import AnalogDistanceError, DimensionMismatch
from .features import FeatureExtractor, FeatureVector, HISTOGRAM_BINS, distance, impression_digest

__all__ = [
    'FeatureExtractor',
    'FeatureVector',
    'MigrationBudget',
    'distance',
    'impression_digest',
    'HISTOGRAM_BINS',
    'DimensionMismatch',
    'AnalogDistanceError',
]
