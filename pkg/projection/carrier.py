"""
Carrier-side data types: written carriers, digital objects, sensory impressions and
projection methods.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np

from format_registry.glyph_ops import Scale, as_scale


@dataclass(frozen=True)
class Rect:
    x: int
    y: int
    width: int
    height: int

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"Rectangle needs a positive size, got {self.width}x{self.height}")

    def clip(self, width: int, height: int) -> Optional["Rect"]:
        """Part of the rectangle inside a width x height extent, or None."""
        x0, y0 = max(self.x, 0), max(self.y, 0)
        x1, y1 = min(self.x + self.width, width), min(self.y + self.height, height)
        if x1 <= x0 or y1 <= y0:
            return None
        return Rect(x0, y0, x1 - x0, y1 - y0)

    @classmethod
    def parse(cls, text: str) -> "Rect":
        """Parse "x,y,w,h"."""
        x, y, width, height = (int(part) for part in text.split(','))
        return cls(x, y, width, height)


@dataclass(eq=False)
class PlacedGlyph:
    """
    A glyph instance on a carrier surface. `source_type_id` is writer bookkeeping and is
    never read by recognition.
    """

    glyph: np.ndarray
    x: int
    y: int
    font_id: str
    style_attrs: Dict[str, str] = field(default_factory=dict)
    source_type_id: str = ""

    @property
    def width(self) -> int:
        return self.glyph.shape[1]

    @property
    def height(self) -> int:
        return self.glyph.shape[0]


@dataclass(frozen=True, eq=False)
class InformationCarrier:
    """Immutable written carrier. Corruption produces a new carrier."""

    id: str
    glyphs: Tuple[PlacedGlyph, ...]
    width: int
    height: int
    deterioration: Tuple[Rect, ...] = ()
    format_id: Optional[str] = None
    font_id: Optional[str] = None

    def __post_init__(self):
        for placed in self.glyphs:
            if (placed.x < 0 or placed.y < 0 or placed.x + placed.width > self.width
                    or placed.y + placed.height > self.height):
                raise ValueError(f"Glyph {placed.source_type_id} at ({placed.x},{placed.y}) "
                                 f"lies outside the {self.width}x{self.height} extent")

    @property
    def extent(self) -> Tuple[int, int]:
        return self.width, self.height


@dataclass(frozen=True)
class DigitalObject:
    """Byte content plus type tag; identity is byte and tag equality, the id is a label."""

    id: str = field(compare=False)
    data: bytes = b""
    type_tag: str = "text/plain;charset=ascii"

    @property
    def media_type(self) -> str:
        return self.type_tag.split(';', 1)[0].strip().lower()

    @property
    def params(self) -> Dict[str, str]:
        params: Dict[str, str] = {}
        for part in self.type_tag.split(';')[1:]:
            if '=' in part:
                key, value = part.split('=', 1)
                params[key.strip().lower()] = value.strip().strip('"').lower()
        return params


@dataclass(eq=False)
class SensoryImpression:
    """Raster signal with intensities in [0, 1]; `scale` is output px per carrier px."""

    id: str
    pixels: np.ndarray
    scale: Fraction = Fraction(1)
    source_id: Optional[str] = None

    def __post_init__(self):
        self.scale = as_scale(self.scale)
        self.pixels = np.asarray(self.pixels, dtype=np.float64)
        if self.pixels.ndim != 2:
            raise ValueError("Impression pixels must be a 2-D matrix")
        if self.pixels.size and (self.pixels.min() < 0 or self.pixels.max() > 1):
            raise ValueError("Impression intensities must lie in [0, 1]")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def same_pixels(self, other: "SensoryImpression") -> bool:
        return self.pixels.shape == other.pixels.shape and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True)
class PhysicalProjectionMethod:
    id: str
    scale: Fraction = Fraction(1)
    reveals_corrupted: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'scale', as_scale(self.scale))

    @classmethod
    def at(cls, scale: Scale, reveals_corrupted: bool = False) -> "PhysicalProjectionMethod":
        """Method named after its parameters, e.g. scan@3/5 or infrared@1."""
        scale = as_scale(scale)
        prefix = "infrared" if reveals_corrupted else "scan"
        return cls(f"{prefix}@{scale}", scale, reveals_corrupted)
