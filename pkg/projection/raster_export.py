"""
Raster and carrier exports: plain PGM (P2), PNG through Pillow and placement records.
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Union

import numpy as np
from PIL import Image

from .carrier import InformationCarrier, SensoryImpression

logger = logging.getLogger(__name__)

PGM_MAXVAL = 255
PLACEMENT_HEADER = "x\ty\twidth\theight\tfont\tstyles\ttype"


class RasterExporter:
    """Reads and writes impressions and carrier placements as files."""

    def __init__(self, config: Dict = None):
        self.config = config or {}

    @staticmethod
    def to_pgm(impression: SensoryImpression) -> str:
        """
        Plain PGM text: intensity written as round(255 * value), one raster row per line.
        A `# scale p/q` comment keeps the impression's resolution.
        """
        values = np.rint(impression.pixels * PGM_MAXVAL).astype(int)
        lines = ["P2", f"# scale {impression.scale}", f"{impression.width} {impression.height}", str(PGM_MAXVAL)]
        lines.extend(' '.join(str(v) for v in row) for row in values)
        return '\n'.join(lines) + '\n'

    def write_pgm(self, impression: SensoryImpression, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(self.to_pgm(impression).encode('utf-8'))
        logger.info(f"Wrote {impression.width}x{impression.height} raster to {path}")
        return path

    @staticmethod
    def parse_pgm(text: str, impression_id: str = "impression", scale=None) -> SensoryImpression:
        """
        Parse plain PGM. `scale` overrides the file's scale comment; without either the
        scale is 1.

        Raises:
            ValueError: on a malformed file
        """
        tokens: List[str] = []
        file_scale = None
        for line in text.splitlines():
            if line.startswith('#'):
                words = line[1:].split()
                if len(words) == 2 and words[0] == 'scale':
                    file_scale = Fraction(words[1])
                continue
            tokens.extend(line.split('#', 1)[0].split())
        if not tokens or tokens[0] != 'P2':
            raise ValueError("Not a plain PGM (P2) file")
        try:
            width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
            values = np.array([int(v) for v in tokens[4:]], dtype=np.float64)
        except (IndexError, ValueError) as e:
            raise ValueError(f"Malformed PGM header or data: {e}") from None
        if values.size != width * height:
            raise ValueError(f"PGM holds {values.size} values, expected {width * height}")
        if maxval < 1 or (values.size and values.max() > maxval):
            raise ValueError("PGM values exceed maxval")
        pixels = values.reshape((height, width)) / maxval
        chosen = scale if scale is not None else (file_scale if file_scale is not None else 1)
        return SensoryImpression(impression_id, pixels, Fraction(chosen))

    def read_pgm(self, path: Union[str, Path], scale=None) -> SensoryImpression:
        path = Path(path)
        return self.parse_pgm(path.read_text(encoding='utf-8'), path.stem, scale)

    @staticmethod
    def to_png(impression: SensoryImpression, path: Union[str, Path]) -> Path:
        """Grayscale PNG, same intensity mapping as the PGM export."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        values = np.rint(impression.pixels * PGM_MAXVAL).astype(np.uint8)
        Image.fromarray(values).save(path, format='PNG')
        return path

    @staticmethod
    def placements_to_lines(carrier: InformationCarrier) -> str:
        """One tab-separated record per placed glyph, in placement order."""
        lines = [PLACEMENT_HEADER]
        for placed in carrier.glyphs:
            styles = ','.join(sorted(k for k, v in placed.style_attrs.items() if v == 'true')) or '-'
            lines.append(f"{placed.x}\t{placed.y}\t{placed.width}\t{placed.height}\t"
                         f"{placed.font_id}\t{styles}\t{placed.source_type_id}")
        return '\n'.join(lines) + '\n'

    def write_placements(self, carrier: InformationCarrier, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_bytes(self.placements_to_lines(carrier).encode('utf-8'))
        return path
