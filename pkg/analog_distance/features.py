"""
Feature vectors over sensory impressions and the Euclidean distance between them.
Distances only bound how far a migrated image has drifted; they never decide identity.
"""

import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Sequence, Union

import numpy as np
import pandas as pd

from projection.carrier import SensoryImpression

from .errors import DimensionMismatch

logger = logging.getLogger(__name__)

HISTOGRAM_BINS = 16


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Grid-cell mean intensities followed by a normalized intensity histogram."""

    values: np.ndarray
    source_digest: str
    grid: tuple = (1, 1)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError("Feature vector must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise ValueError("Feature vector components must be finite")
        object.__setattr__(self, 'values', values)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def cell_means(self) -> np.ndarray:
        return self.values[:len(self.values) - HISTOGRAM_BINS]

    @property
    def histogram(self) -> np.ndarray:
        return self.values[len(self.values) - HISTOGRAM_BINS:]


def impression_digest(impression: SensoryImpression) -> str:
    pixels = np.rint(impression.pixels * 255).astype(np.uint8)
    header = f"{impression.height}x{impression.width}:".encode('ascii')
    return hashlib.sha256(header + pixels.tobytes()).hexdigest()


def distance(a: FeatureVector, b: FeatureVector) -> float:
    """
    Euclidean distance between two feature vectors.

    Raises:
        DimensionMismatch: vectors of different length
    """
    if len(a) != len(b):
        raise DimensionMismatch(len(a), len(b))
    return float(np.linalg.norm(a.values - b.values))


class FeatureExtractor:
    """
    Computes feature vectors with a fixed grid taken from config (`analog.grid_rows`,
    `analog.grid_cols`) unless overridden per call.
    """

    def __init__(self, config: Dict = None):
        self.config = config or {}
        analog = self.config.get('analog', {})
        self.grid_rows = int(analog.get('grid_rows', 4))
        self.grid_cols = int(analog.get('grid_cols', 4))

    def feature_vector(self, impression: SensoryImpression, grid_rows: int = None,
                       grid_cols: int = None) -> FeatureVector:
        """
        Mean intensity of each cell of an evenly partitioned grid, row by row, then a
        16-bin histogram of all intensities normalized to sum 1.

        Cells left empty because the grid is finer than the raster count as 0.
        """
        if grid_rows is None:
            grid_rows = self.grid_rows
        if grid_cols is None:
            grid_cols = self.grid_cols
        if grid_rows < 1 or grid_cols < 1:
            raise ValueError("Grid dimensions must be >= 1")

        pixels = impression.pixels
        means = []
        for band in np.array_split(pixels, grid_rows, axis=0):
            for cell in np.array_split(band, grid_cols, axis=1):
                means.append(float(cell.mean()) if cell.size else 0.0)

        counts, _ = np.histogram(pixels, bins=HISTOGRAM_BINS, range=(0.0, 1.0))
        total = counts.sum()
        histogram = counts / total if total else np.zeros(HISTOGRAM_BINS)

        vector = FeatureVector(np.concatenate([np.array(means), histogram]),
                               impression_digest(impression), (grid_rows, grid_cols))
        logger.debug(f"Feature vector of {impression.id}: {len(vector)} components")
        return vector

    def distance(self, a: FeatureVector, b: FeatureVector) -> float:
        return distance(a, b)

    @staticmethod
    def to_frame(vectors: Sequence[FeatureVector]) -> pd.DataFrame:
        return pd.DataFrame([vector.values for vector in vectors])

    def to_csv(self, vectors: Sequence[FeatureVector], path: Union[str, Path] = None) -> str:
        """Comma-separated lines, one vector per line, 17 significant digits."""
        text = self.to_frame(vectors).to_csv(header=False, index=False, float_format='%.17g',
                                             lineterminator='\n')
        if path is not None:
            Path(path).write_text(text, encoding='utf-8')
            logger.info(f"Wrote {len(vectors)} feature vectors to {path}")
        return text
