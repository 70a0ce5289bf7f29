"""
Glyph raster operations shared by validation, projection and recognition:
style transforms, integer magnification, nearest-neighbour resampling and trimming.
"""

import logging
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple, Union

import numpy as np

from .models import InformationFormat, STYLE_FLAGS, SymbolFont

logger = logging.getLogger(__name__)

MAX_PHASE_DENOMINATOR = 16

ShapeKey = Tuple[Tuple[int, int], bytes]
Scale = Union[Fraction, int, str]


def as_scale(value: Scale) -> Fraction:
    """Parse a positive rational scale ("3/5", 2, Fraction)."""
    scale = Fraction(value)
    if scale <= 0:
        raise ValueError(f"Scale must be positive, got {value}")
    return scale


def resample(pixels: np.ndarray, scale: Scale) -> np.ndarray:
    """
    Nearest-neighbour resampling: target cell (i, j) takes source pixel
    (min(floor((i + 0.5) / s), h - 1), min(floor((j + 0.5) / s), w - 1)).

    Output dimensions are ceil(h * s) x ceil(w * s). Values are copied, not thresholded.
    """
    scale = as_scale(scale)
    p, q = scale.numerator, scale.denominator
    height, width = pixels.shape
    out_height = -(-height * p // q)
    out_width = -(-width * p // q)
    rows = np.minimum(((2 * np.arange(out_height) + 1) * q) // (2 * p), max(height - 1, 0))
    cols = np.minimum(((2 * np.arange(out_width) + 1) * q) // (2 * p), max(width - 1, 0))
    return pixels[np.ix_(rows, cols)]


def binarize(pixels: np.ndarray) -> np.ndarray:
    """Ink where intensity >= 0.5."""
    return (pixels >= 0.5).astype(np.uint8)


def trim(bitmap: np.ndarray) -> np.ndarray:
    """Crop blank rows and columns on all four sides."""
    rows = np.flatnonzero(bitmap.any(axis=1))
    if rows.size == 0:
        return np.zeros((0, 0), dtype=np.uint8)
    cols = np.flatnonzero(bitmap.any(axis=0))
    return np.ascontiguousarray(bitmap[rows[0]:rows[-1] + 1, cols[0]:cols[-1] + 1], dtype=np.uint8)


def trim_columns(bitmap: np.ndarray) -> np.ndarray:
    cols = np.flatnonzero(bitmap.any(axis=0))
    if cols.size == 0:
        return bitmap[:, :0]
    return bitmap[:, cols[0]:cols[-1] + 1]


def shape_key(bitmap: np.ndarray) -> ShapeKey:
    bitmap = np.ascontiguousarray(bitmap, dtype=np.uint8)
    return bitmap.shape, bitmap.tobytes()


def magnify(bitmap: np.ndarray, scale_x: int, scale_y: int) -> np.ndarray:
    return np.repeat(np.repeat(bitmap, scale_y, axis=0), scale_x, axis=1)


def apply_styles(bitmap: np.ndarray, styles: Iterable[str]) -> np.ndarray:
    """
    Apply style transforms to a drawn glyph, in the order italic, bold, underline.

    italic shifts row r right by (h-1-r)//3; bold ORs the glyph with itself shifted one
    column right; underline adds a one-column overhang and a full ink row one blank row
    below the lowest ink row. The cell grows by two rows and blank columns are trimmed.
    """
    styles = frozenset(styles)
    unknown = styles - set(STYLE_FLAGS)
    if unknown:
        raise ValueError(f"Unknown style flags: {sorted(unknown)}")
    if not styles:
        return bitmap

    glyph = bitmap.astype(np.uint8)
    if 'italic' in styles:
        height, width = glyph.shape
        max_shift = (height - 1) // 3
        sheared = np.zeros((height, width + max_shift), dtype=np.uint8)
        for r in range(height):
            shift = (height - 1 - r) // 3
            sheared[r, shift:shift + width] = glyph[r]
        glyph = sheared
    if 'bold' in styles:
        height, width = glyph.shape
        emboldened = np.zeros((height, width + 1), dtype=np.uint8)
        emboldened[:, :width] |= glyph
        emboldened[:, 1:] |= glyph
        glyph = emboldened
    if 'underline' in styles:
        height, width = glyph.shape
        underlined = np.zeros((height + 2, width + 2), dtype=np.uint8)
        underlined[:height, 1:width + 1] = glyph
        ink_rows = np.flatnonzero(glyph.any(axis=1))
        rule_row = min(int(ink_rows[-1]) + 2, height + 1) if ink_rows.size else height + 1
        underlined[rule_row, :] = 1
        glyph = underlined
    return trim_columns(glyph)


def style_variants(font: SymbolFont) -> List[FrozenSet[str]]:
    """All style combinations a font renders, fewest flags first."""
    flags = sorted(font.styles)
    variants = []
    for size in range(len(flags) + 1):
        variants.extend(frozenset(combo) for combo in combinations(flags, size))
    return variants


class GlyphRasterizer:
    """
    Renders font glyphs with styles and builds the resampled shapes used to compare them.
    Results are cached per font/type/style/scale; fonts are immutable after loading.
    """

    def __init__(self, config: Dict = None):
        self.config = config or {}
        self._glyph_cache: Dict[tuple, np.ndarray] = {}
        self._phase_cache: Dict[tuple, FrozenSet[ShapeKey]] = {}

    def render(self, font: SymbolFont, type_id: str, styles: Iterable[str] = ()) -> np.ndarray:
        """
        Rendered glyph cell: styles applied to the drawn glyph, then the font's magnification.

        Raises:
            KeyError: if the font has no glyph for type_id
        """
        styles = frozenset(styles)
        key = (font.id, font.scale_x, font.scale_y, type_id, styles)
        cached = self._glyph_cache.get(key)
        if cached is not None:
            return cached

        glyph = font.glyph(type_id)
        if glyph is None:
            raise KeyError(type_id)
        rendered = magnify(apply_styles(glyph.to_array(), styles), font.scale_x, font.scale_y)
        rendered.setflags(write=False)
        self._glyph_cache[key] = rendered
        return rendered

    def shape_at(self, glyph: np.ndarray, scale: Scale, phase: Tuple[int, int] = (0, 0)) -> np.ndarray:
        """
        Trimmed binary shape of a glyph placed at a sub-pixel phase and resampled.
        The canvas has q blank pixels of padding so edge clamping never re-samples ink.
        """
        py, px = phase
        pad = as_scale(scale).denominator
        height, width = glyph.shape
        canvas = np.zeros((py + height + pad, px + width + pad), dtype=np.uint8)
        canvas[py:py + height, px:px + width] = glyph
        return trim(binarize(resample(canvas, scale)))

    def phase_shapes(self, font: SymbolFont, type_id: str, styles: FrozenSet[str], scale: Scale) -> FrozenSet[ShapeKey]:
        """Shape keys of a glyph at every phase (py, px) in [0, q)^2, q the scale's denominator."""
        scale = as_scale(scale)
        if scale.denominator > MAX_PHASE_DENOMINATOR:
            raise ValueError(f"Scale denominator {scale.denominator} exceeds {MAX_PHASE_DENOMINATOR}")
        key = (font.id, font.scale_x, font.scale_y, type_id, styles, scale)
        cached = self._phase_cache.get(key)
        if cached is not None:
            return cached

        glyph = self.render(font, type_id, styles)
        q = scale.denominator
        shapes: Set[ShapeKey] = set()
        for py in range(q):
            for px in range(q):
                shape = self.shape_at(glyph, scale, (py, px))
                if shape.size:
                    shapes.add(shape_key(shape))
        result = frozenset(shapes)
        self._phase_cache[key] = result
        return result

    def line_height(self, fmt: InformationFormat) -> int:
        """Tallest rendered glyph cell over the format's fonts and their style variants."""
        tallest = 0
        for font in fmt.fonts:
            sample = next(iter(font.glyphs), None)
            if sample is None:
                continue
            for styles in style_variants(font):
                tallest = max(tallest, self.render(font, sample, styles).shape[0])
        return tallest
