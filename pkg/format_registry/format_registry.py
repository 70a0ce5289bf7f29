"""
Registry of information formats and their constituents.
Loads .fmt definition files from a config directory and validates formats.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Set, Tuple, Union

from ontology_core.errors import DuplicateId
from ontology_core.models import Entity, EntityKind
from ontology_core.ontology_store import OntologyStore

from .definition_parser import FormatDefinitionParser, ParsedDocument
from .errors import FormatSyntaxError, UnknownFont, UnknownFormat
from .glyph_ops import GlyphRasterizer, ShapeKey, style_variants
from .models import ArrangementRuleSet, InformationFormat, SymbolFont, SymbolTypeSet

logger = logging.getLogger(__name__)


@dataclass
class ValidationReport:
    """Result of validate_format. Empty violation lists mean valid at that resolution."""

    format_id: str
    at_resolution: Optional[int] = None
    disjointness_violations: List[Tuple[str, str, str]] = field(default_factory=list)
    collisions: List[Tuple[str, str]] = field(default_factory=list)
    collision_details: Dict[Tuple[str, str], List[str]] = field(default_factory=dict)
    rule_warnings: List[str] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.disjointness_violations and not self.collisions

    def collides(self, type_a: str, type_b: str) -> bool:
        return tuple(sorted((type_a, type_b))) in self.collisions

    def to_dict(self) -> Dict[str, Any]:
        return {
            'format_id': self.format_id,
            'at_resolution': self.at_resolution,
            'valid': self.is_valid,
            'disjointness_violations': [list(v) for v in self.disjointness_violations],
            'collisions': [list(pair) for pair in self.collisions],
            'warnings': list(self.rule_warnings),
        }


@dataclass
class FormatEntities:
    """Entity ids under which a format and its constituents are registered in a store."""

    format: str
    type_sets: List[str]
    fonts: Dict[str, str]
    font_encodings: Dict[str, str]
    rules: Optional[str]


def entity_id(kind: str, name: str) -> str:
    return f"{kind}:{name}"


class FormatRegistry:
    """
    Serves registered formats, fonts, type sets and rule sets.

    The registry is filled during a load phase and then only read.
    """

    def __init__(self, formats_path: Optional[str] = "./config/formats", config: Dict = None):
        self.config = config or {}
        self.formats_path = Path(formats_path) if formats_path else None
        self.type_sets: Dict[str, SymbolTypeSet] = {}
        self.fonts: Dict[str, SymbolFont] = {}
        self.rules: Dict[str, ArrangementRuleSet] = {}
        self.formats: Dict[str, InformationFormat] = {}
        self.load_errors: List[str] = []
        self.rasterizer = GlyphRasterizer(self.config)

        if self.formats_path is not None:
            self.load_definitions()

    def load_definitions(self) -> int:
        """
        Load every *.fmt file of the formats directory in file-name order.

        Returns:
            Number of formats registered
        """
        if not self.formats_path.exists():
            logger.error(f"Formats directory not found: {self.formats_path}")
            self.load_errors.append(f"missing directory {self.formats_path}")
            return 0

        loaded = 0
        for definition_file in sorted(self.formats_path.glob("*.fmt")):
            try:
                text = definition_file.read_text(encoding='utf-8')
                formats = self.register_document(text)
                loaded += len(formats)
                logger.info(f"Loaded {definition_file.name}: {', '.join(f.id for f in formats) or 'no formats'}")
            except Exception as e:
                logger.error(f"Failed to load format definitions {definition_file}: {e}")
                self.load_errors.append(f"{definition_file.name}: {e}")

        logger.info(f"Loaded {len(self.formats)} formats from {self.formats_path}")
        return loaded

    def _parser(self) -> FormatDefinitionParser:
        return FormatDefinitionParser(self.type_sets, self.fonts, self.rules)

    def register_document(self, text: str) -> List[InformationFormat]:
        """
        Parse a definition document and register everything it declares.
        The document is registered completely or not at all.
        """
        document = self._parser().parse(text)
        self._commit(document)
        return list(document.formats.values())

    def _commit(self, document: ParsedDocument):
        self._check_conflicts(document)
        self.type_sets.update(document.type_sets)
        self.fonts.update(document.fonts)
        self.rules.update(document.rules)
        self.formats.update(document.formats)

    def _check_conflicts(self, document: ParsedDocument):
        for registered, declared in ((self.type_sets, document.type_sets), (self.fonts, document.fonts),
                                     (self.rules, document.rules), (self.formats, document.formats)):
            for name in declared:
                if name in registered:
                    raise DuplicateId(name)

    def parse_format_definition(self, text: str) -> InformationFormat:
        """
        Parse and register a document; returns its first format.

        Raises:
            FormatSyntaxError, UnresolvedReference, DuplicateId
        """
        document = self._parser().parse(text)
        if not document.formats:
            raise FormatSyntaxError(0, "document declares no [format] section")
        self._commit(document)
        return next(iter(document.formats.values()))

    def get_format(self, format_id: str) -> InformationFormat:
        try:
            return self.formats[format_id]
        except KeyError:
            raise UnknownFormat(format_id) from None

    def get_font(self, font_id: str) -> SymbolFont:
        try:
            return self.fonts[font_id]
        except KeyError:
            raise UnknownFont(font_id) from None

    def list_formats(self) -> List[str]:
        return list(self.formats)

    def serialize(self, format_id: str) -> str:
        return self._parser().serialize(self.get_format(format_id))

    def line_height(self, fmt: InformationFormat) -> int:
        return self.rasterizer.line_height(fmt)

    def validate_format(self, fmt: Union[str, InformationFormat], at_resolution: Optional[int] = None) -> ValidationReport:
        """
        Check type-set disjointness and glyph collisions.

        Args:
            fmt: Format or format id
            at_resolution: pixels per em to downscale every font to; None compares glyphs
                at their native size

        Returns:
            ValidationReport listing violations, collision pairs and rule warnings
        """
        if isinstance(fmt, str):
            fmt = self.get_format(fmt)
        elif fmt.id not in self.formats:
            raise UnknownFormat(fmt.id)
        if at_resolution is not None and at_resolution < 1:
            raise ValueError("at_resolution must be >= 1")

        report = ValidationReport(fmt.id, at_resolution)
        self._check_disjointness(fmt, report)
        self._check_collisions(fmt, report)
        self._check_rules(fmt, report)

        logger.info(f"Validated {fmt.id} at {at_resolution or 'native'}: "
                    f"{len(report.collisions)} collisions, {len(report.disjointness_violations)} violations")
        return report

    @staticmethod
    def _check_disjointness(fmt: InformationFormat, report: ValidationReport):
        owner: Dict[str, str] = {}
        for type_set in fmt.type_sets:
            for type_id in type_set.members:
                if type_id in type_set.arrangement_types:
                    continue
                if type_id in owner:
                    report.disjointness_violations.append((type_id, owner[type_id], type_set.id))
                else:
                    owner[type_id] = type_set.id

    def _check_collisions(self, fmt: InformationFormat, report: ValidationReport):
        arrangement = fmt.arrangement_types()
        glyph_types = [t for t in fmt.source_types() if t not in arrangement]

        by_shape: Dict[ShapeKey, Set[str]] = defaultdict(set)
        sources: Dict[Tuple[ShapeKey, str], str] = {}
        for font in fmt.fonts:
            scale = Fraction(1) if report.at_resolution is None else Fraction(report.at_resolution, font.em_px)
            for styles in style_variants(font):
                for type_id in glyph_types:
                    glyph = self.rasterizer.render(font, type_id, styles)
                    shape = self.rasterizer.shape_at(glyph, scale)
                    key = (shape.shape, shape.tobytes())
                    canonical = fmt.canonical_type(type_id)
                    by_shape[key].add(canonical)
                    label = font.id + ''.join(f"+{s}" for s in sorted(styles))
                    sources.setdefault((key, canonical), label)

        pairs: Set[Tuple[str, str]] = set()
        for key, types in by_shape.items():
            ordered = sorted(types)
            for i, type_a in enumerate(ordered):
                for type_b in ordered[i + 1:]:
                    pair = (type_a, type_b)
                    pairs.add(pair)
                    report.collision_details.setdefault(pair, []).append(
                        f"{sources[(key, type_a)]}/{sources[(key, type_b)]}")
        report.collisions = sorted(pairs)

    def _check_rules(self, fmt: InformationFormat, report: ValidationReport):
        rules = fmt.rules
        if rules is None:
            report.rule_warnings.append("format has no arrangement rules; it is not discrete")
            return
        line_height = self.line_height(fmt)
        if rules.paragraph_blank_lines == 1 and rules.inter_line_gap_min_px < line_height - 1:
            report.rule_warnings.append(
                f"one blank line between paragraphs needs inter_line_gap_min_px >= {line_height - 1}")
        if rules.layout == 'html':
            if rules.block_indent_px < 1:
                report.rule_warnings.append("html layout needs block_indent_px >= 1 to tell block kinds apart")
            if rules.link_font is None:
                report.rule_warnings.append("html layout without link_font cannot show links")
            if rules.paragraph_blank_lines is None:
                report.rule_warnings.append("html layout needs paragraph_blank_lines to separate blocks")

    def register_entities(self, store: OntologyStore, fmt: InformationFormat) -> FormatEntities:
        return register_format_entities(store, fmt)


def register_format_entities(store: OntologyStore, fmt: InformationFormat) -> FormatEntities:
    """Register the format, its constituents and font encodings as entities (idempotent)."""
    format_entity = store.ensure(Entity(entity_id('format', fmt.id), EntityKind.INFORMATION_FORMAT, fmt))
    type_sets = [store.ensure(Entity(entity_id('typeset', t.id), EntityKind.SYMBOL_TYPE_SET, t))
                 for t in fmt.type_sets]
    fonts: Dict[str, str] = {}
    encodings: Dict[str, str] = {}
    for font in fmt.fonts:
        fonts[font.id] = store.ensure(Entity(entity_id('font', font.id), EntityKind.SYMBOL_FONT, font))
        encodings[font.id] = store.ensure(Entity(
            entity_id('font-encoding', font.id), EntityKind.SYMBOL_FONT_ENCODING, sorted(font.glyphs)))
    rules = None
    if fmt.rules is not None:
        rules = store.ensure(Entity(entity_id('rules', fmt.rules.id), EntityKind.ARRANGEMENT_RULE_SET, fmt.rules))
    return FormatEntities(format_entity, type_sets, fonts, encodings, rules)
