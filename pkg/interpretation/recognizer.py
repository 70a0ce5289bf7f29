"""
Exact template matching of glyph boxes against every glyph of a format.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from format_registry.glyph_ops import GlyphRasterizer, ShapeKey, binarize, shape_key, style_variants, trim
from format_registry.models import STYLE_FLAGS, InformationFormat

from .structure import GlyphBox, SymbolOccurrence

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TemplateMatch:
    type_id: str
    font_id: str
    styles: FrozenSet[str]


@dataclass
class BoxReading:
    """What one glyph box was read as; `fonts` lists the fonts of all matching templates."""

    occurrence: Optional[SymbolOccurrence]
    fonts: FrozenSet[str] = frozenset()
    gray: bool = False

    @property
    def matched(self) -> bool:
        return self.occurrence is not None and not self.occurrence.undefined


TemplateIndex = Dict[ShapeKey, List[TemplateMatch]]


class GlyphRecognizer:
    """
    Reads glyph boxes by exact bitmap equality with the format's templates.

    Templates cover every font, every style combination the font renders and every
    sub-pixel phase of the impression's scale.
    """

    def __init__(self, rasterizer: GlyphRasterizer = None, config: Dict = None):
        self.config = config or {}
        self.rasterizer = rasterizer or GlyphRasterizer(self.config)
        self._indexes: Dict[Tuple[str, Fraction], TemplateIndex] = {}

    def template_index(self, fmt: InformationFormat, scale: Fraction) -> TemplateIndex:
        key = (fmt.id, Fraction(scale))
        index = self._indexes.get(key)
        if index is not None:
            return index

        arrangement = fmt.arrangement_types()
        index = defaultdict(list)
        for font in fmt.fonts:
            for styles in style_variants(font):
                for type_id in fmt.source_types():
                    if type_id in arrangement or font.glyph(type_id) is None:
                        continue
                    match = TemplateMatch(fmt.canonical_type(type_id), font.id, styles)
                    for shape in self.rasterizer.phase_shapes(font, type_id, styles, scale):
                        if match not in index[shape]:
                            index[shape].append(match)
        self._indexes[key] = dict(index)
        logger.info(f"Built {len(index)} templates for {fmt.id} at scale {scale}")
        return self._indexes[key]

    @staticmethod
    def match(cells: np.ndarray, index: TemplateIndex) -> List[TemplateMatch]:
        """Templates equal to a box's binarized, trimmed pixels."""
        shape = trim(binarize(cells))
        if not shape.size:
            return []
        return index.get(shape_key(shape), [])

    def read_box(self, pixels: np.ndarray, box: GlyphBox, fmt: InformationFormat,
                 index: TemplateIndex) -> BoxReading:
        """
        Read one box. Gray boxes and boxes without a match give an UNDEFINED occurrence;
        several matching types give an ambiguous occurrence.
        """
        if box.gray:
            return BoxReading(SymbolOccurrence.unknown(), gray=True)
        cells = pixels[box.y:box.y + box.height, box.x:box.x + box.width]
        matches = self.match(cells, index)
        if not matches:
            logger.debug(f"No template matches box at ({box.x},{box.y}) {box.width}x{box.height}")
            return BoxReading(None)
        return BoxReading(self.occurrence_for(matches, fmt), frozenset(m.font_id for m in matches))

    def occurrence_for(self, matches: List[TemplateMatch], fmt: InformationFormat) -> SymbolOccurrence:
        """
        Occurrence for a set of matching templates. Per type the template with the fewest
        style flags wins; style attributes of an ambiguous occurrence are kept only when
        every candidate agrees on them.
        """
        font_order = {font_id: position for position, font_id in enumerate(fmt.font_ids)}
        best: Dict[str, TemplateMatch] = {}
        for match in matches:
            current = best.get(match.type_id)
            rank = (len(match.styles), font_order.get(match.font_id, 0), sorted(match.styles))
            if current is None or rank < (len(current.styles), font_order.get(current.font_id, 0), sorted(current.styles)):
                best[match.type_id] = match

        attrs = [self.style_attrs(match, fmt) for match in best.values()]
        if len(best) == 1:
            return SymbolOccurrence.of(next(iter(best)), attrs[0])
        agreed = attrs[0] if all(a == attrs[0] for a in attrs) else {}
        return SymbolOccurrence.ambiguous(best, agreed)

    @staticmethod
    def style_attrs(match: TemplateMatch, fmt: InformationFormat) -> Dict[str, str]:
        """Style attributes of a template, restricted to what the format marks meaningful."""
        meaningful = fmt.meaningful
        attrs: Dict[str, str] = {}
        if meaningful.font_family:
            attrs['fontFamily'] = match.font_id
        for flag in STYLE_FLAGS:
            if flag in match.styles and meaningful.is_meaningful(flag):
                attrs[flag] = 'true'
        if meaningful.size_pt:
            font = fmt.font(match.font_id)
            if font is not None and font.size_pt is not None:
                attrs['sizePt'] = str(font.size_pt)
        return attrs
