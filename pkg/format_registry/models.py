"""
Data model of information formats: symbol types and type sets, bitmap fonts,
arrangement rules and the format that binds them together.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

STYLE_FLAGS = ('bold', 'italic', 'underline')

DIRECTIONS = ('left-to-right-top-to-bottom', 'boustrophedon')
LAYOUTS = ('lines', 'html')

# Left-indent rank of each block kind under the html layout
HTML_BLOCK_RANKS = {
    'title': 0, 'h1': 1, 'h2': 2, 'h3': 3, 'h4': 4, 'h5': 5, 'h6': 6,
    'p': 7, 'body': 8, 'pre': 9,
}


@dataclass(frozen=True)
class SymbolType:
    """An individual symbol type of a type set."""

    id: str
    display_name: str
    set_id: str


@dataclass
class SymbolTypeSet:
    """Finite set of mutually distinct symbol types."""

    id: str
    members: Dict[str, SymbolType] = field(default_factory=dict)
    arrangement_types: Tuple[str, ...] = ()
    description: str = ""

    def type_ids(self) -> List[str]:
        return list(self.members)

    def __contains__(self, type_id: str) -> bool:
        return type_id in self.members


@dataclass(frozen=True)
class GlyphBitmap:
    """Binary glyph image, rows top to bottom, 1 = ink."""

    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise ValueError("Glyph bitmap must be at least 1x1")
        width = len(self.rows[0])
        if any(len(row) != width for row in self.rows):
            raise ValueError("Glyph rows must have equal width")

    @property
    def width(self) -> int:
        return len(self.rows[0])

    @property
    def height(self) -> int:
        return len(self.rows)

    @classmethod
    def from_strings(cls, lines: Iterable[str]) -> "GlyphBitmap":
        return cls(tuple(tuple(1 if ch == '#' else 0 for ch in line) for line in lines))

    @classmethod
    def from_array(cls, array: np.ndarray) -> "GlyphBitmap":
        return cls(tuple(tuple(int(v) for v in row) for row in array))

    def to_strings(self) -> List[str]:
        return [''.join('#' if v else '.' for v in row) for row in self.rows]

    def to_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.uint8)


@dataclass
class SymbolFont:
    """
    Map from symbol types to glyph bitmaps.

    A derived font shares its source's glyphs and magnifies them by integer factors
    when rendered; `em` is the height of the drawn glyphs, `em_px` the rendered cell height.
    """

    id: str
    type_set_ids: Tuple[str, ...]
    glyphs: Dict[str, GlyphBitmap]
    em: int
    styles: FrozenSet[str] = frozenset()
    size_pt: Optional[int] = None
    derived_from: Optional[str] = None
    scale_x: int = 1
    scale_y: int = 1

    @property
    def em_px(self) -> int:
        return self.em * self.scale_y

    def glyph(self, type_id: str) -> Optional[GlyphBitmap]:
        return self.glyphs.get(type_id)


@dataclass
class ArrangementRuleSet:
    """Rules turning relative glyph positions into lines, words and paragraphs."""

    id: str
    direction: str = 'left-to-right-top-to-bottom'
    inter_glyph_gap_px: int = 1
    inter_word_gap_min_px: int = 4
    inter_line_gap_min_px: int = 4
    paragraph_blank_lines: Optional[int] = 1
    margin_px: int = 0
    layout: str = 'lines'
    block_indent_px: int = 0
    link_font: Optional[str] = None

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"Unknown direction: {self.direction}")
        if self.layout not in LAYOUTS:
            raise ValueError(f"Unknown layout: {self.layout}")
        if self.inter_glyph_gap_px < 0:
            raise ValueError("inter_glyph_gap_px must be >= 0")
        if self.inter_word_gap_min_px < 1 or self.inter_line_gap_min_px < 1:
            raise ValueError("Word and line gaps must be >= 1")
        if self.inter_word_gap_min_px <= self.inter_glyph_gap_px:
            raise ValueError("inter_word_gap_min_px must exceed inter_glyph_gap_px")
        if self.paragraph_blank_lines is not None and self.paragraph_blank_lines < 1:
            raise ValueError("paragraph_blank_lines must be >= 1 or none")
        if self.margin_px < 0 or self.block_indent_px < 0:
            raise ValueError("Margins and indents must be >= 0")


# File name of each flag -> attribute name
FLAG_NAMES = {
    'fontFamily': 'font_family',
    'bold': 'bold',
    'italic': 'italic',
    'underline': 'underline',
    'sizePt': 'size_pt',
    'caseSensitive': 'case_sensitive',
    'wordSeparators': 'word_separators',
    'paragraphs': 'paragraphs',
    'hyperlinks': 'hyperlinks',
}


@dataclass(frozen=True)
class MeaningfulFlags:
    """Which rendering features carry meaning under a format."""

    font_family: bool = False
    bold: bool = False
    italic: bool = False
    underline: bool = False
    size_pt: bool = False
    case_sensitive: bool = False
    word_separators: bool = False
    paragraphs: bool = False
    hyperlinks: bool = False

    @classmethod
    def from_names(cls, names: Iterable[str]) -> "MeaningfulFlags":
        values = {}
        for name in names:
            if name not in FLAG_NAMES:
                raise ValueError(f"Unknown meaningful flag: {name}")
            values[FLAG_NAMES[name]] = True
        return cls(**values)

    def names(self) -> List[str]:
        return [name for name, attr in FLAG_NAMES.items() if getattr(self, attr)]

    def is_meaningful(self, name: str) -> bool:
        return getattr(self, FLAG_NAMES[name])

    def style_flags(self) -> FrozenSet[str]:
        """Style flags (bold/italic/underline) recorded on occurrences."""
        return frozenset(flag for flag in STYLE_FLAGS if getattr(self, flag))


@dataclass(frozen=True)
class MergeDeclaration:
    """Source types that are one symbol type under a format (e.g. U and V -> UV)."""

    sources: Tuple[str, ...]
    target: str


@dataclass
class InformationFormat:
    """Type sets, fonts, arrangement rules and meaningful flags of a discrete format."""

    id: str
    type_sets: Tuple[SymbolTypeSet, ...] = ()
    fonts: Tuple[SymbolFont, ...] = ()
    rules: Optional[ArrangementRuleSet] = None
    meaningful: MeaningfulFlags = field(default_factory=MeaningfulFlags)
    merges: Tuple[MergeDeclaration, ...] = ()
    description: str = ""

    def __post_init__(self):
        self._merge_map = {source: merge.target for merge in self.merges for source in merge.sources}
        self._char_map: Dict[str, str] = {}
        self._type_chars: Dict[str, str] = {}
        for type_set in self.type_sets:
            for symbol in type_set.members.values():
                self._char_map.setdefault(symbol.display_name, symbol.id)
                self._type_chars.setdefault(symbol.id, symbol.display_name)

    @property
    def type_set_ids(self) -> Tuple[str, ...]:
        return tuple(type_set.id for type_set in self.type_sets)

    @property
    def font_ids(self) -> Tuple[str, ...]:
        return tuple(font.id for font in self.fonts)

    @property
    def is_discrete(self) -> bool:
        return bool(self.type_sets) and bool(self.fonts) and self.rules is not None

    def font(self, font_id: str) -> Optional[SymbolFont]:
        for font in self.fonts:
            if font.id == font_id:
                return font
        return None

    def arrangement_types(self) -> FrozenSet[str]:
        return frozenset(t for type_set in self.type_sets for t in type_set.arrangement_types)

    def source_types(self) -> List[str]:
        """Declared type ids in type-set order, before merging."""
        seen: Dict[str, None] = {}
        for type_set in self.type_sets:
            for type_id in type_set.members:
                seen.setdefault(type_id, None)
        return list(seen)

    def canonical_type(self, type_id: str) -> str:
        """Apply case folding (when case is not meaningful) and merges."""
        if not self.meaningful.case_sensitive:
            char = self._type_chars.get(type_id)
            if char is not None:
                folded = self._char_map.get(char.upper())
                if folded is not None:
                    type_id = folded
        return self._merge_map.get(type_id, type_id)

    def alphabet(self) -> FrozenSet[str]:
        """Effective symbol types: merged sources replaced by their merged type."""
        return frozenset(self.canonical_type(type_id) for type_id in self.source_types())

    def char_to_type(self, char: str) -> Optional[str]:
        """Canonical type for one decoded character, or None if outside the format."""
        type_id = self._char_map.get(char)
        if type_id is None and not self.meaningful.case_sensitive:
            type_id = self._char_map.get(char.upper())
        if type_id is None:
            return None
        return self.canonical_type(type_id)

    def type_to_char(self, type_id: str) -> Optional[str]:
        """Character used to write a canonical type as text."""
        return self._type_chars.get(self.glyph_type(type_id))

    def glyph_type(self, type_id: str) -> str:
        """Type whose glyph is drawn for a canonical type (first source of a merge)."""
        for merge in self.merges:
            if merge.target == type_id:
                return merge.sources[0]
        return type_id
