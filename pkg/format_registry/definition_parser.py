"""
Parser and serializer for format-definition documents (.fmt files).

A document is a sequence of [typeset], [font], [rules] and [format] sections holding
`key = value` lines and inline glyph bitmaps. References resolve against the ids already
known to the caller plus everything declared in the same document.
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import FormatSyntaxError, UnresolvedReference
from .models import (
    ArrangementRuleSet,
    GlyphBitmap,
    InformationFormat,
    MeaningfulFlags,
    MergeDeclaration,
    STYLE_FLAGS,
    SymbolFont,
    SymbolType,
    SymbolTypeSet,
)

logger = logging.getLogger(__name__)

SECTION_RE = re.compile(r'^\[(\w+)\s+([A-Za-z0-9_]+)\]$')
SYMBOL_RE = re.compile(r'^symbol\s+([A-Za-z0-9_]+)\s*=\s?(.*)$')
GLYPH_RE = re.compile(r'^glyph\s+([A-Za-z0-9_]+)\s*\{$')
KEY_RE = re.compile(r'^([a-z_]+)\s*=\s*(.*)$')
MERGE_RE = re.compile(r'^([A-Za-z0-9_]+(?:\s*\+\s*[A-Za-z0-9_]+)+)\s*->\s*([A-Za-z0-9_]+)$')
CODEPOINT_RE = re.compile(r'^U\+([0-9A-Fa-f]{4,6})$')
ROW_RE = re.compile(r'^[.#]+$')

SECTION_KEYS = {
    'typeset': {'description', 'arrangement'},
    'font': {'typesets', 'em', 'size_pt', 'styles', 'derive', 'scale_x', 'scale_y'},
    'rules': {'direction', 'inter_glyph_gap_px', 'inter_word_gap_min_px', 'inter_line_gap_min_px',
              'paragraph_blank_lines', 'margin_px', 'layout', 'block_indent_px', 'link_font'},
    'format': {'typesets', 'fonts', 'rules', 'meaningful', 'merge', 'description'},
}

INT_RULE_KEYS = ('inter_glyph_gap_px', 'inter_word_gap_min_px', 'inter_line_gap_min_px',
                 'margin_px', 'block_indent_px')


@dataclass
class _Section:
    kind: str
    id: str
    line: int
    entries: List[Tuple[str, str, int]] = field(default_factory=list)
    symbols: List[Tuple[str, str, int]] = field(default_factory=list)
    glyphs: List[Tuple[str, List[str], int]] = field(default_factory=list)

    def values(self, key: str) -> List[Tuple[str, int]]:
        return [(value, line) for k, value, line in self.entries if k == key]

    def value(self, key: str) -> Optional[Tuple[str, int]]:
        found = self.values(key)
        if len(found) > 1:
            raise FormatSyntaxError(found[1][1], f"duplicate key '{key}' in [{self.kind} {self.id}]")
        return found[0] if found else None


@dataclass
class ParsedDocument:
    """Constituents declared by one document, in declaration order."""

    type_sets: Dict[str, SymbolTypeSet] = field(default_factory=dict)
    fonts: Dict[str, SymbolFont] = field(default_factory=dict)
    rules: Dict[str, ArrangementRuleSet] = field(default_factory=dict)
    formats: Dict[str, InformationFormat] = field(default_factory=dict)


def _split_list(value: str) -> List[str]:
    return [item.strip() for item in value.split(',') if item.strip()]


def _parse_int(value: str, line: int, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise FormatSyntaxError(line, f"'{key}' expects an integer, got '{value}'") from None


def _decode_symbol(value: str, line: int) -> str:
    match = CODEPOINT_RE.match(value)
    if match:
        return chr(int(match.group(1), 16))
    if len(value) != 1:
        raise FormatSyntaxError(line, f"symbol value must be one character or U+hhhh, got '{value}'")
    return value


def _encode_symbol(char: str) -> str:
    if len(char) == 1 and char.isprintable() and not char.isspace():
        return char
    return f"U+{ord(char):04X}"


class FormatDefinitionParser:
    """
    Parses format-definition documents into resolved format objects.

    Args:
        type_sets, fonts, rules: already-registered constituents that documents may reference
    """

    def __init__(self, type_sets: Dict[str, SymbolTypeSet] = None, fonts: Dict[str, SymbolFont] = None,
                 rules: Dict[str, ArrangementRuleSet] = None):
        self.known_type_sets = type_sets or {}
        self.known_fonts = fonts or {}
        self.known_rules = rules or {}

    # Parsing

    def parse(self, text: str) -> ParsedDocument:
        """
        Parse a whole document. Nothing is returned for a document with any error.

        Raises:
            FormatSyntaxError: grammar violations, unknown keys, malformed glyphs
            UnresolvedReference: references to undeclared ids
        """
        sections = self._read_sections(text)
        document = ParsedDocument()

        seen = set()
        for section in sections:
            if (section.kind, section.id) in seen:
                raise FormatSyntaxError(section.line, f"duplicate {section.kind} id '{section.id}'")
            seen.add((section.kind, section.id))

        for section in sections:
            if section.kind == 'typeset':
                document.type_sets[section.id] = self._build_type_set(section)

        font_sections = [s for s in sections if s.kind == 'font']
        pending = list(font_sections)
        while pending:
            progressed = False
            for section in list(pending):
                source = self._value(section, 'derive')
                if source and source[0] not in document.fonts and source[0] not in self.known_fonts:
                    continue
                document.fonts[section.id] = self._build_font(section, document)
                pending.remove(section)
                progressed = True
            if not progressed:
                section = pending[0]
                name, line = self._value(section, 'derive')
                raise UnresolvedReference(name, line)
        # keep declaration order
        document.fonts = {s.id: document.fonts[s.id] for s in font_sections}

        for section in sections:
            if section.kind == 'rules':
                document.rules[section.id] = self._build_rules(section, document)

        for section in sections:
            if section.kind == 'format':
                document.formats[section.id] = self._build_format(section, document)

        logger.debug(f"Parsed {len(document.type_sets)} type sets, {len(document.fonts)} fonts, "
                     f"{len(document.rules)} rule sets, {len(document.formats)} formats")
        return document

    def _read_sections(self, text: str) -> List[_Section]:
        sections: List[_Section] = []
        current: Optional[_Section] = None
        glyph: Optional[Tuple[str, List[str], int]] = None

        for number, raw in enumerate(text.split('\n'), start=1):
            line = raw.rstrip('\r').rstrip()

            if glyph is not None:
                stripped = line.strip()
                if stripped == '}':
                    if not glyph[1]:
                        raise FormatSyntaxError(number, f"glyph {glyph[0]} has no rows")
                    current.glyphs.append(glyph)
                    glyph = None
                elif ROW_RE.match(stripped):
                    if glyph[1] and len(stripped) != len(glyph[1][0]):
                        raise FormatSyntaxError(number, f"glyph {glyph[0]} rows have unequal width")
                    glyph[1].append(stripped)
                else:
                    raise FormatSyntaxError(number, f"invalid glyph row in {glyph[0]}: '{stripped}'")
                continue

            stripped = line.strip()
            if not stripped or stripped.startswith('#'):
                continue

            match = SECTION_RE.match(stripped)
            if match:
                kind, section_id = match.groups()
                if kind not in SECTION_KEYS:
                    raise FormatSyntaxError(number, f"unknown section kind '{kind}'")
                current = _Section(kind, section_id, number)
                sections.append(current)
                continue

            if current is None:
                raise FormatSyntaxError(number, "content before the first section header")

            match = GLYPH_RE.match(stripped)
            if match:
                if current.kind != 'font':
                    raise FormatSyntaxError(number, "glyph blocks are only allowed in font sections")
                glyph = (match.group(1), [], number)
                continue

            match = SYMBOL_RE.match(stripped)
            if match:
                if current.kind != 'typeset':
                    raise FormatSyntaxError(number, "symbol lines are only allowed in typeset sections")
                current.symbols.append((match.group(1), _decode_symbol(match.group(2).strip(), number), number))
                continue

            match = KEY_RE.match(stripped)
            if not match:
                raise FormatSyntaxError(number, f"expected 'key = value', got '{stripped}'")
            key, value = match.group(1), match.group(2).strip()
            if key not in SECTION_KEYS[current.kind]:
                raise FormatSyntaxError(number, f"unknown key '{key}' in [{current.kind} {current.id}]")
            current.entries.append((key, value, number))

        if glyph is not None:
            raise FormatSyntaxError(glyph[2], f"glyph {glyph[0]} is not closed")
        return sections

    @staticmethod
    def _value(section: _Section, key: str) -> Optional[Tuple[str, int]]:
        return section.value(key)

    def _build_type_set(self, section: _Section) -> SymbolTypeSet:
        members: Dict[str, SymbolType] = {}
        for type_id, char, line in section.symbols:
            if type_id in members:
                raise FormatSyntaxError(line, f"duplicate symbol type '{type_id}' in {section.id}")
            members[type_id] = SymbolType(type_id, char, section.id)
        if not members:
            raise FormatSyntaxError(section.line, f"type set {section.id} declares no symbols")

        arrangement: List[str] = []
        for value, line in section.values('arrangement'):
            for type_id in _split_list(value):
                if type_id not in members:
                    raise UnresolvedReference(type_id, line)
                arrangement.append(type_id)

        description = section.value('description')
        return SymbolTypeSet(section.id, members, tuple(arrangement), description[0] if description else "")

    def _type_set(self, name: str, line: int, document: ParsedDocument) -> SymbolTypeSet:
        found = document.type_sets.get(name) or self.known_type_sets.get(name)
        if found is None:
            raise UnresolvedReference(name, line)
        return found

    def _font(self, name: str, line: int, document: ParsedDocument) -> SymbolFont:
        found = document.fonts.get(name) or self.known_fonts.get(name)
        if found is None:
            raise UnresolvedReference(name, line)
        return found

    def _build_font(self, section: _Section, document: ParsedDocument) -> SymbolFont:
        derive = section.value('derive')
        styles_entry = section.value('styles')
        styles = frozenset(_split_list(styles_entry[0])) if styles_entry else frozenset()
        unknown_styles = styles - set(STYLE_FLAGS)
        if unknown_styles:
            raise FormatSyntaxError(styles_entry[1], f"unknown styles {sorted(unknown_styles)}")
        size_entry = section.value('size_pt')
        size_pt = _parse_int(size_entry[0], size_entry[1], 'size_pt') if size_entry else None

        typesets_entry = section.value('typesets')
        type_set_ids: Tuple[str, ...] = ()
        if typesets_entry:
            type_set_ids = tuple(_split_list(typesets_entry[0]))
            for name in type_set_ids:
                self._type_set(name, typesets_entry[1], document)

        if derive:
            source = self._font(derive[0], derive[1], document)
            if section.glyphs:
                raise FormatSyntaxError(section.glyphs[0][2], "a derived font may not declare glyphs")
            if section.value('em'):
                raise FormatSyntaxError(section.value('em')[1], "a derived font takes its em from the source")
            scale_x = self._scale(section, 'scale_x')
            scale_y = self._scale(section, 'scale_y')
            for name in type_set_ids:
                type_set = self._type_set(name, typesets_entry[1], document)
                for type_id in type_set.members:
                    if type_id not in type_set.arrangement_types and type_id not in source.glyphs:
                        raise FormatSyntaxError(section.line, f"font {section.id} has no glyph for {type_id}")
            return SymbolFont(
                id=section.id,
                type_set_ids=type_set_ids or source.type_set_ids,
                glyphs=source.glyphs,
                em=source.em,
                styles=styles,
                size_pt=size_pt,
                derived_from=source.id,
                scale_x=source.scale_x * scale_x,
                scale_y=source.scale_y * scale_y,
            )

        for key in ('scale_x', 'scale_y'):
            if section.value(key):
                raise FormatSyntaxError(section.value(key)[1], f"'{key}' requires 'derive'")
        em_entry = section.value('em')
        if not em_entry:
            raise FormatSyntaxError(section.line, f"font {section.id} needs 'em' or 'derive'")
        em = _parse_int(em_entry[0], em_entry[1], 'em')
        if em < 1:
            raise FormatSyntaxError(em_entry[1], "em must be >= 1")
        if not type_set_ids:
            raise FormatSyntaxError(section.line, f"font {section.id} needs 'typesets'")

        covered = [self._type_set(name, typesets_entry[1], document) for name in type_set_ids]
        known_types = {t for type_set in covered for t in type_set.members}
        glyphs: Dict[str, GlyphBitmap] = {}
        for type_id, rows, line in section.glyphs:
            if type_id not in known_types:
                raise UnresolvedReference(type_id, line)
            if type_id in glyphs:
                raise FormatSyntaxError(line, f"duplicate glyph '{type_id}'")
            if len(rows) != em:
                raise FormatSyntaxError(line, f"glyph {type_id} has {len(rows)} rows, em is {em}")
            glyphs[type_id] = GlyphBitmap.from_strings(rows)

        for type_set in covered:
            for type_id in type_set.members:
                if type_id not in type_set.arrangement_types and type_id not in glyphs:
                    raise FormatSyntaxError(section.line, f"font {section.id} has no glyph for {type_id}")

        return SymbolFont(section.id, type_set_ids, glyphs, em, styles, size_pt)

    @staticmethod
    def _scale(section: _Section, key: str) -> int:
        entry = section.value(key)
        if not entry:
            return 1
        value = _parse_int(entry[0], entry[1], key)
        if value < 1:
            raise FormatSyntaxError(entry[1], f"'{key}' must be >= 1")
        return value

    def _build_rules(self, section: _Section, document: ParsedDocument) -> ArrangementRuleSet:
        kwargs = {}
        for key in INT_RULE_KEYS:
            entry = section.value(key)
            if entry:
                kwargs[key] = _parse_int(entry[0], entry[1], key)
        for key in ('direction', 'layout'):
            entry = section.value(key)
            if entry:
                kwargs[key] = entry[0]
        entry = section.value('paragraph_blank_lines')
        if entry:
            kwargs['paragraph_blank_lines'] = None if entry[0] == 'none' else _parse_int(
                entry[0], entry[1], 'paragraph_blank_lines')
        entry = section.value('link_font')
        if entry:
            kwargs['link_font'] = self._font(entry[0], entry[1], document).id

        try:
            return ArrangementRuleSet(section.id, **kwargs)
        except ValueError as e:
            raise FormatSyntaxError(section.line, f"rules {section.id}: {e}") from None

    def _build_format(self, section: _Section, document: ParsedDocument) -> InformationFormat:
        type_sets: Tuple[SymbolTypeSet, ...] = ()
        entry = section.value('typesets')
        if entry:
            type_sets = tuple(self._type_set(name, entry[1], document) for name in _split_list(entry[0]))

        fonts: Tuple[SymbolFont, ...] = ()
        entry = section.value('fonts')
        if entry:
            fonts = tuple(self._font(name, entry[1], document) for name in _split_list(entry[0]))
            for font in fonts:
                missing = [t.id for t in type_sets if t.id not in font.type_set_ids]
                if missing:
                    raise FormatSyntaxError(entry[1], f"font {font.id} does not cover {', '.join(missing)}")

        rules = None
        entry = section.value('rules')
        if entry:
            rules = document.rules.get(entry[0]) or self.known_rules.get(entry[0])
            if rules is None:
                raise UnresolvedReference(entry[0], entry[1])
            if rules.link_font and rules.link_font not in {font.id for font in fonts}:
                raise FormatSyntaxError(entry[1], f"link font {rules.link_font} is not one of the format's fonts")

        meaningful = MeaningfulFlags()
        entry = section.value('meaningful')
        if entry:
            try:
                meaningful = MeaningfulFlags.from_names(_split_list(entry[0]))
            except ValueError as e:
                raise FormatSyntaxError(entry[1], str(e)) from None

        declared = {t for type_set in type_sets for t in type_set.members}
        merges: List[MergeDeclaration] = []
        for value, line in section.values('merge'):
            match = MERGE_RE.match(value)
            if not match:
                raise FormatSyntaxError(line, f"merge expects 'A + B -> T', got '{value}'")
            sources = tuple(name.strip() for name in match.group(1).split('+'))
            for name in sources:
                if name not in declared:
                    raise UnresolvedReference(name, line)
            merges.append(MergeDeclaration(sources, match.group(2)))

        description = section.value('description')
        return InformationFormat(
            id=section.id,
            type_sets=type_sets,
            fonts=fonts,
            rules=rules,
            meaningful=meaningful,
            merges=tuple(merges),
            description=description[0] if description else "",
        )

    # Serialization

    def serialize(self, fmt: InformationFormat) -> str:
        """
        Write a format and all its constituents as one self-contained document.
        Sources of derived fonts are written first, in canonical key order.
        """
        out: List[str] = [f"# Format {fmt.id}", ""]

        font_order: List[SymbolFont] = []
        for font in fmt.fonts:
            chain = []
            current = font
            while current is not None and current.id not in {f.id for f in font_order}:
                chain.append(current)
                current = self._source_of(current)
            for item in reversed(chain):
                if item.id not in {f.id for f in font_order}:
                    font_order.append(item)

        type_sets: Dict[str, SymbolTypeSet] = {t.id: t for t in fmt.type_sets}
        for font in font_order:
            for name in font.type_set_ids:
                if name not in type_sets:
                    found = self.known_type_sets.get(name)
                    if found is not None:
                        type_sets[name] = found

        for type_set in type_sets.values():
            out.extend(self._serialize_type_set(type_set))
        for font in font_order:
            out.extend(self._serialize_font(font, {f.id: f for f in font_order}))
        if fmt.rules is not None:
            out.extend(self._serialize_rules(fmt.rules))

        out.append(f"[format {fmt.id}]")
        if fmt.description:
            out.append(f"description = {fmt.description}")
        if fmt.type_sets:
            out.append(f"typesets = {', '.join(fmt.type_set_ids)}")
        if fmt.fonts:
            out.append(f"fonts = {', '.join(fmt.font_ids)}")
        if fmt.rules is not None:
            out.append(f"rules = {fmt.rules.id}")
        if fmt.meaningful.names():
            out.append(f"meaningful = {', '.join(fmt.meaningful.names())}")
        for merge in fmt.merges:
            out.append(f"merge = {' + '.join(merge.sources)} -> {merge.target}")
        out.append("")
        return "\n".join(out)

    def _source_of(self, font: SymbolFont) -> Optional[SymbolFont]:
        if font.derived_from is None:
            return None
        known = self.known_fonts.get(font.derived_from)
        if known is not None:
            return known
        # Source not registered here: stand in with an underived font holding the same glyphs
        return SymbolFont(font.derived_from, font.type_set_ids, font.glyphs, font.em)

    @staticmethod
    def _serialize_type_set(type_set: SymbolTypeSet) -> List[str]:
        lines = [f"[typeset {type_set.id}]"]
        if type_set.description:
            lines.append(f"description = {type_set.description}")
        for symbol in type_set.members.values():
            lines.append(f"symbol {symbol.id} = {_encode_symbol(symbol.display_name)}")
        if type_set.arrangement_types:
            lines.append(f"arrangement = {', '.join(type_set.arrangement_types)}")
        lines.append("")
        return lines

    @staticmethod
    def _serialize_font(font: SymbolFont, fonts: Dict[str, SymbolFont]) -> List[str]:
        lines = [f"[font {font.id}]", f"typesets = {', '.join(font.type_set_ids)}"]
        if font.derived_from is None:
            lines.append(f"em = {font.em}")
        else:
            source = fonts[font.derived_from]
            lines.append(f"derive = {font.derived_from}")
            lines.append(f"scale_x = {font.scale_x // source.scale_x}")
            lines.append(f"scale_y = {font.scale_y // source.scale_y}")
        if font.size_pt is not None:
            lines.append(f"size_pt = {font.size_pt}")
        lines.append(f"styles = {', '.join(sorted(font.styles))}".rstrip())
        if font.derived_from is None:
            for type_id, glyph in font.glyphs.items():
                lines.append("")
                lines.append(f"glyph {type_id} {{")
                lines.extend(glyph.to_strings())
                lines.append("}")
        lines.append("")
        return lines

    @staticmethod
    def _serialize_rules(rules: ArrangementRuleSet) -> List[str]:
        blank_lines = 'none' if rules.paragraph_blank_lines is None else rules.paragraph_blank_lines
        lines = [
            f"[rules {rules.id}]",
            f"direction = {rules.direction}",
            f"inter_glyph_gap_px = {rules.inter_glyph_gap_px}",
            f"inter_word_gap_min_px = {rules.inter_word_gap_min_px}",
            f"inter_line_gap_min_px = {rules.inter_line_gap_min_px}",
            f"paragraph_blank_lines = {blank_lines}",
            f"margin_px = {rules.margin_px}",
            f"layout = {rules.layout}",
            f"block_indent_px = {rules.block_indent_px}",
        ]
        if rules.link_font:
            lines.append(f"link_font = {rules.link_font}")
        lines.append("")
        return lines
