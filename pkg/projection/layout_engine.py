"""
Deterministic layout of symbol structures onto a carrier surface.

Lines sit on a grid whose pitch is the format's line height plus the inter-line gap.
Breaks between lines are encoded by the number of empty grid rows between them,
which is what the segmenter reads back.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from format_registry.glyph_ops import GlyphRasterizer
from format_registry.models import HTML_BLOCK_RANKS, STYLE_FLAGS, InformationFormat, SymbolFont
from interpretation.structure import Container, SymbolOccurrence, SymbolStructure

from .carrier import PlacedGlyph
from .errors import LayoutError, MissingGlyph, UnsupportedStyle

logger = logging.getLogger(__name__)

HTML_INLINE = ('a', 'br')


@dataclass
class LayoutToken:
    """A glyph to draw, or a run of `spaces` word gaps."""

    occurrence: Optional[SymbolOccurrence] = None
    spaces: int = 0
    font_id: Optional[str] = None


@dataclass
class LayoutLine:
    tokens: List[LayoutToken] = field(default_factory=list)
    empty_rows_before: int = 0
    indent_px: int = 0


def page_break_rows(paragraph_blank_lines: Optional[int], continues_paragraph: bool) -> int:
    """Empty grid rows encoding a page break."""
    if paragraph_blank_lines is None:
        return 1
    if continues_paragraph:
        return paragraph_blank_lines + 1
    return 2 * paragraph_blank_lines + 1


class LayoutEngine:
    """Turns a structure into placed glyphs following the format's arrangement rules."""

    def __init__(self, rasterizer: GlyphRasterizer = None, config: Dict = None):
        self.config = config or {}
        self.rasterizer = rasterizer or GlyphRasterizer(self.config)

    def layout(self, structure: SymbolStructure, fmt: InformationFormat, font: SymbolFont,
               page_width_px: int) -> Tuple[List[PlacedGlyph], int, int]:
        """
        Lay out a structure.

        Returns:
            (placed glyphs, carrier width, carrier height)
        """
        if fmt.rules is None:
            raise LayoutError(f"Format {fmt.id} has no arrangement rules")
        if fmt.rules.layout == 'html':
            lines = self.html_lines(structure, fmt)
        else:
            lines = self.text_lines(structure, fmt)
        return self.place(lines, fmt, font, page_width_px)

    # -- structure to lines ---------------------------------------------------

    def text_lines(self, structure: SymbolStructure, fmt: InformationFormat) -> List[LayoutLine]:
        root = structure.root
        if root.kind != 'document':
            raise LayoutError(f"Text layout expects a document root, got {root.kind}")

        blank = fmt.rules.paragraph_blank_lines
        overlaps = {pair for pair in structure.overlaps}
        lines: List[LayoutLine] = []
        previous: Optional[Tuple[str, str]] = None  # (page path, paragraph path)

        for page_path, paragraph_path, line in self._walk_text(root):
            tokens = self._line_tokens(line, fmt)
            if not any(token.occurrence is not None for token in tokens):
                continue
            rows = 0
            if previous is not None:
                previous_page, previous_paragraph = previous
                if page_path != previous_page:
                    continues = tuple(sorted((previous_paragraph, paragraph_path))) in overlaps
                    rows = page_break_rows(blank, continues or paragraph_path == '')
                elif paragraph_path != previous_paragraph:
                    rows = blank or 0
            lines.append(LayoutLine(tokens, rows))
            previous = (page_path, paragraph_path)
        return lines

    def _walk_text(self, root: Container):
        """Yield (page path, paragraph path, line container) in reading order."""
        for index, child in enumerate(root.children):
            path = str(index)
            if not isinstance(child, Container):
                raise LayoutError("Occurrences must sit inside line containers")
            if child.kind == 'page':
                for sub_index, sub in enumerate(child.children):
                    sub_path = f"{path}.{sub_index}"
                    if isinstance(sub, Container) and sub.kind == 'paragraph':
                        for line in sub.containers():
                            yield path, sub_path, self._expect_line(line)
                    elif isinstance(sub, Container):
                        yield path, '', self._expect_line(sub)
                    else:
                        raise LayoutError("Occurrences must sit inside line containers")
            elif child.kind == 'paragraph':
                for line in child.containers():
                    yield '', path, self._expect_line(line)
            else:
                yield '', '', self._expect_line(child)

    @staticmethod
    def _expect_line(container: Container) -> Container:
        if container.kind != 'line':
            raise LayoutError(f"Unexpected container {container.kind} in a text structure")
        return container

    def _line_tokens(self, container: Container, fmt: InformationFormat, font_id: Optional[str] = None) -> List[LayoutToken]:
        arrangement = fmt.arrangement_types()
        tokens: List[LayoutToken] = []
        for child in container.children:
            if isinstance(child, Container):
                if child.kind not in ('word', 'a'):
                    raise LayoutError(f"Unexpected container {child.kind} inside {container.kind}")
                child_font = fmt.rules.link_font if child.kind == 'a' else font_id
                tokens.extend(self._line_tokens(child, fmt, child_font))
            elif child.type_id in arrangement:
                if tokens and tokens[-1].occurrence is None:
                    tokens[-1].spaces += 1
                else:
                    tokens.append(LayoutToken(spaces=1))
            else:
                tokens.append(LayoutToken(occurrence=child, font_id=font_id))
        return tokens

    def html_lines(self, structure: SymbolStructure, fmt: InformationFormat) -> List[LayoutLine]:
        root = structure.root
        if root.kind != 'html':
            raise LayoutError(f"Html layout expects an html root, got {root.kind}")

        blocks: List[Tuple[str, Container]] = []
        for section in root.containers():
            if section.kind == 'head':
                blocks.extend(('title', title) for title in section.containers() if title.kind == 'title')
            elif section.kind == 'body':
                blocks.extend(self._body_blocks(section))
            else:
                raise LayoutError(f"Unexpected container {section.kind} under html")

        indent_step = fmt.rules.block_indent_px
        blank = fmt.rules.paragraph_blank_lines or 0
        lines: List[LayoutLine] = []
        for kind, block in blocks:
            indent = indent_step * HTML_BLOCK_RANKS[kind]
            first = True
            for tokens in self._split_at_breaks(block, fmt):
                if not any(token.occurrence is not None for token in tokens):
                    continue
                rows = blank if first and lines else 0
                lines.append(LayoutLine(tokens, rows, indent))
                first = False
        return lines

    @staticmethod
    def _body_blocks(body: Container) -> List[Tuple[str, Container]]:
        """Blocks of a body; runs of inline content become anonymous body blocks."""
        blocks: List[Tuple[str, Container]] = []
        run: Optional[Container] = None
        for child in body.children:
            if isinstance(child, Container) and child.kind in HTML_BLOCK_RANKS and child.kind not in ('title', 'body'):
                blocks.append((child.kind, child))
                run = None
                continue
            if isinstance(child, Container) and child.kind not in HTML_INLINE:
                raise LayoutError(f"Unexpected container {child.kind} in body")
            if run is None:
                run = Container('body')
                blocks.append(('body', run))
            run.children.append(child)
        return blocks

    def _split_at_breaks(self, block: Container, fmt: InformationFormat) -> List[List[LayoutToken]]:
        lines: List[List[LayoutToken]] = [[]]
        segment = Container(block.kind)
        for child in block.children:
            if isinstance(child, Container) and child.kind == 'br':
                lines[-1] = self._line_tokens(segment, fmt)
                lines.append([])
                segment = Container(block.kind)
            else:
                segment.children.append(child)
        lines[-1] = self._line_tokens(segment, fmt)
        return lines

    # -- lines to glyphs --------------------------------------------------------

    def place(self, lines: List[LayoutLine], fmt: InformationFormat, font: SymbolFont,
              page_width_px: int) -> Tuple[List[PlacedGlyph], int, int]:
        rules = fmt.rules
        line_height = self.rasterizer.line_height(fmt)
        pitch = line_height + rules.inter_line_gap_min_px
        margin = rules.margin_px

        placed: List[PlacedGlyph] = []
        widest = 0
        row = -1
        for index, line in enumerate(lines):
            row += 1 + (line.empty_rows_before if index else 0)
            tokens = line.tokens
            if rules.direction == 'boustrophedon' and index % 2 == 1:
                tokens = list(reversed(tokens))
            y = margin + row * pitch
            x = margin + line.indent_px
            pending = 0
            has_glyph = False
            for token in tokens:
                if token.occurrence is None:
                    pending += token.spaces
                    continue
                if pending:
                    x += pending * rules.inter_word_gap_min_px
                elif has_glyph:
                    x += rules.inter_glyph_gap_px
                glyph = self._placed(token, fmt, font, x, y)
                placed.append(glyph)
                x += glyph.width
                pending = 0
                has_glyph = True
            widest = max(widest, x)
            if x + margin > page_width_px:
                logger.warning(f"Line {index} overflows the page: {x + margin}px > {page_width_px}px")

        width = max(page_width_px, widest + margin if lines else 0)
        height = 2 * margin + (row * pitch + line_height if lines else 0)
        return placed, width, height

    def _placed(self, token: LayoutToken, fmt: InformationFormat, default_font: SymbolFont, x: int, y: int) -> PlacedGlyph:
        occurrence = token.occurrence
        font = self._font_for(token, fmt, default_font)
        styles = frozenset(flag for flag in STYLE_FLAGS if occurrence.style_attrs.get(flag) == 'true')
        if not styles <= font.styles:
            raise UnsupportedStyle(font.id, styles - font.styles)
        type_id = occurrence.type_id
        try:
            bitmap = self.rasterizer.render(font, fmt.glyph_type(type_id), styles)
        except KeyError:
            raise MissingGlyph(type_id, font.id) from None
        return PlacedGlyph(bitmap, x, y, font.id, dict(occurrence.style_attrs), type_id)

    @staticmethod
    def _font_for(token: LayoutToken, fmt: InformationFormat, default_font: SymbolFont) -> SymbolFont:
        font_id = token.font_id or token.occurrence.style_attrs.get('fontFamily')
        if font_id is None or font_id == default_font.id:
            return default_font
        font = fmt.font(font_id)
        if font is None:
            raise MissingGlyph(token.occurrence.type_id, font_id)
        return font
