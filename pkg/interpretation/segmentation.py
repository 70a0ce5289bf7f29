"""
Segmentation of impressions into text lines and glyph boxes using projection profiles.
"""

import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from format_registry.models import ArrangementRuleSet

from .structure import ArrangedLine, GapClass, GlyphBox, SymbolArrangement

logger = logging.getLogger(__name__)

Run = Tuple[int, int]


def true_runs(mask: np.ndarray) -> List[Run]:
    """Half-open [start, end) runs of True values."""
    padded = np.concatenate(([False], np.asarray(mask, dtype=bool), [False]))
    edges = np.flatnonzero(padded[1:] != padded[:-1])
    return [(int(start), int(end)) for start, end in zip(edges[::2], edges[1::2])]


def merge_runs(runs: List[Run], min_gap: int) -> List[Run]:
    """Join runs separated by fewer than min_gap blank positions."""
    merged: List[Run] = []
    for start, end in runs:
        if merged and start - merged[-1][1] < min_gap:
            merged[-1] = (merged[-1][0], end)
        else:
            merged.append((start, end))
    return merged


def source_index(index: int, scale: Fraction) -> int:
    """Carrier pixel sampled by impression pixel `index` (nearest-neighbour rule)."""
    return ((2 * index + 1) * scale.denominator) // (2 * scale.numerator)


def break_class(empty_rows: int, paragraph_blank_lines: Optional[int]) -> GapClass:
    """Classify the number of empty grid rows between two lines."""
    if empty_rows <= 0:
        return GapClass.LINE_BREAK
    if paragraph_blank_lines is None:
        return GapClass.PAGE_BREAK
    if empty_rows <= paragraph_blank_lines:
        return GapClass.PARAGRAPH_BREAK
    if empty_rows <= 2 * paragraph_blank_lines:
        return GapClass.PAGE_BREAK
    return GapClass.PAGE_PARAGRAPH_BREAK


class Segmenter:
    """
    Finds line bands from the row profile and glyph boxes from each band's column profile.
    Any nonzero pixel counts as present; boxes holding intermediate intensities are
    flagged gray.
    """

    def __init__(self, config: Dict = None):
        self.config = config or {}

    def segment(self, impression, rules: ArrangementRuleSet, line_height_px: Optional[int] = None) -> SymbolArrangement:
        """
        Segment an impression into an arrangement.

        Args:
            impression: SensoryImpression to segment
            rules: Arrangement rules the carrier was written with
            line_height_px: Format line height in carrier pixels; estimated from the
                tallest band when omitted

        Returns:
            SymbolArrangement with lines in reading order
        """
        scale = Fraction(impression.scale)
        raw_lines = self.find_lines(impression.pixels, rules, scale)
        if line_height_px is None:
            line_height_px = max((math.ceil((bottom - top) / scale) for top, bottom, _ in raw_lines), default=0)
        return self.arrange(raw_lines, rules, scale, line_height_px)

    def find_lines(self, pixels: np.ndarray, rules: ArrangementRuleSet,
                   scale: Fraction) -> List[Tuple[int, int, List[GlyphBox]]]:
        """Line bands (top, bottom, boxes) with boxes in left-to-right order."""
        if pixels.size == 0:
            return []
        present = pixels > 0
        line_gap = max(1, math.floor(rules.inter_line_gap_min_px * scale))
        bands = merge_runs(true_runs(present.any(axis=1)), line_gap)

        lines = []
        for top, bottom in bands:
            band = pixels[top:bottom]
            if not (band >= 1).any():
                logger.debug(f"Skipping unreadable band at rows {top}-{bottom}")
                continue
            boxes = self._boxes(band, top, rules, scale, pixels.shape[1])
            if boxes:
                lines.append((top, bottom, boxes))
        logger.debug(f"Found {len(lines)} line bands")
        return lines

    @staticmethod
    def _boxes(band: np.ndarray, top: int, rules: ArrangementRuleSet, scale: Fraction, width: int) -> List[GlyphBox]:
        present = band > 0
        glyph_gap = max(1, math.floor(rules.inter_glyph_gap_px * scale))
        left_stripe = math.ceil(rules.margin_px * scale)
        right_stripe = width - math.floor(rules.margin_px * scale)

        boxes = []
        for start, end in merge_runs(true_runs(present.any(axis=0)), glyph_gap):
            rows = np.flatnonzero(present[:, start:end].any(axis=1))
            cells = band[rows[0]:rows[-1] + 1, start:end]
            has_ink = bool((cells >= 1).any())
            gray = bool(((cells > 0) & (cells < 1)).any())
            if not has_ink and (end <= left_stripe or start >= right_stripe):
                continue
            boxes.append(GlyphBox(start, top + int(rows[0]), end - start, int(rows[-1] - rows[0] + 1), gray))
        return boxes

    def arrange(self, raw_lines: List[Tuple[int, int, List[GlyphBox]]], rules: ArrangementRuleSet,
                scale: Fraction, line_height_px: int) -> SymbolArrangement:
        """Classify line breaks from grid rows and glyph gaps from column distances."""
        pitch = line_height_px + rules.inter_line_gap_min_px
        word_gap = rules.inter_word_gap_min_px * scale

        arrangement = SymbolArrangement(scale=scale, line_height_px=line_height_px)
        previous_row = None
        for index, (top, bottom, boxes) in enumerate(raw_lines):
            boxes = sorted(boxes, key=lambda box: box.x)
            ink_top = source_index(min(box.y for box in boxes), scale)
            grid_row = max(0, (ink_top - rules.margin_px) // pitch) if pitch > 0 else 0
            reverse = rules.direction == 'boustrophedon' and index % 2 == 1
            line = ArrangedLine(top, bottom, reversed=reverse, grid_row=grid_row,
                                left_px=source_index(boxes[0].x, scale))

            if previous_row is None:
                line.gap_classes.append(GapClass.LINE_BREAK)
            else:
                line.gap_classes.append(break_class(grid_row - previous_row - 1, rules.paragraph_blank_lines))
            previous_row = grid_row

            ordered = list(reversed(boxes)) if reverse else boxes
            for position, box in enumerate(ordered):
                line.boxes.append(box)
                if position == 0:
                    line.spaces.append(0)
                    continue
                before = ordered[position - 1]
                gap = before.x - (box.x + box.width) if reverse else box.x - (before.x + before.width)
                spaces = int((gap + 1) // word_gap)
                line.spaces.append(spaces)
                line.gap_classes.append(GapClass.INTER_WORD if spaces else GapClass.INTRA_WORD)
            arrangement.lines.append(line)
        return arrangement
