"""
Interpretation Service
Extracts symbol structures from sensory impressions (recognition) and from digital
objects (decoding), and records the matching interpretation events.
"""

import hashlib
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from format_registry.format_registry import FormatRegistry, register_format_entities
from format_registry.glyph_ops import GlyphRasterizer
from format_registry.models import HTML_BLOCK_RANKS, InformationFormat
from ontology_core.models import Entity, EntityKind, EventKind, EventRecord
from ontology_core.ontology_store import OntologyStore
from projection.carrier import DigitalObject, SensoryImpression
from projection.errors import UnsupportedType

from .errors import NotDiscreteFormat
from .html_parser import HtmlSubsetParser
from .recognizer import BoxReading, GlyphRecognizer
from .segmentation import Segmenter
from .structure import (
    AnalogPart,
    ArrangedLine,
    Container,
    GapClass,
    GlyphBox,
    StructureStatus,
    SymbolArrangement,
    SymbolOccurrence,
    SymbolStructure,
)
from .text_decoder import DEFAULT_CHARSET, CHARSETS, PlainTextDecoder, decode_bytes

logger = logging.getLogger(__name__)

RANK_KINDS = {rank: kind for kind, rank in HTML_BLOCK_RANKS.items()}
PAGE_BREAKS = (GapClass.PAGE_BREAK, GapClass.PAGE_PARAGRAPH_BREAK)


@dataclass
class Reading:
    """Boxes of an impression read against a format, before structure building."""

    arrangement: SymbolArrangement
    readings: Dict[Tuple[int, int, int, int], BoxReading] = field(default_factory=dict)
    analog_parts: List[AnalogPart] = field(default_factory=list)

    def reading(self, box: GlyphBox) -> BoxReading:
        return self.readings[(box.x, box.y, box.width, box.height)]


def region_digest(cells: np.ndarray) -> str:
    """SHA-256 over the region's shape and 8-bit intensities."""
    values = np.rint(np.asarray(cells) * 255).astype(np.uint8)
    header = f"{values.shape[0]}x{values.shape[1]}:".encode('ascii')
    return hashlib.sha256(header + values.tobytes()).hexdigest()


def type_encoding_id(charset: str) -> str:
    return f"type-encoding:{CHARSETS.get(charset.lower(), charset.lower())}"


class InterpretationService:
    """
    Signal and digital interpretation processes.

    Pure unless a store is given; with a store, every extraction registers the structure
    and appends an interpretation event.
    """

    def __init__(self, config: Dict = None, store: Optional[OntologyStore] = None,
                 registry: Optional[FormatRegistry] = None):
        self.config = config or {}
        self.store = store
        self.rasterizer = registry.rasterizer if registry is not None else GlyphRasterizer(self.config)
        self.segmenter = Segmenter(self.config)
        self.recognizer = GlyphRecognizer(self.rasterizer, self.config)
        self.text_decoder = PlainTextDecoder(self.config)
        self.min_region_px = int(self.config.get('analog', {}).get('min_region_px', 16))

    # -- digital interpretation ---------------------------------------------------

    def digital_interpret(self, obj: DigitalObject, fmt: InformationFormat) -> SymbolStructure:
        """
        Extract the structure incorporated in a digital object.

        Args:
            obj: text/plain (charset ascii, latin1 or utf8) or text/html object
            fmt: Format giving the alphabet and meaningful flags

        Returns:
            Complete SymbolStructure

        Raises:
            UnsupportedType, DecodeError, HtmlParseError
        """
        charset = obj.params.get('charset')
        if obj.media_type == 'text/plain':
            charset = charset or DEFAULT_CHARSET
            if charset not in CHARSETS:
                raise UnsupportedType(obj.type_tag)
            structure = self.text_decoder.decode(obj.data, fmt, charset)
        elif obj.media_type == 'text/html':
            charset = charset or 'utf8'
            if charset not in CHARSETS:
                raise UnsupportedType(obj.type_tag)
            text, _ = decode_bytes(obj.data, charset)
            structure = HtmlSubsetParser(fmt, self.config).parse(text)
        else:
            raise UnsupportedType(obj.type_tag)

        structure.format_id = fmt.id
        if self.store is not None:
            self._record_digital(obj, fmt, structure, charset)
        logger.info(f"Interpreted {obj.id} ({obj.type_tag}) under {fmt.id}: "
                    f"{len(structure.occurrences())} occurrences")
        return structure

    def _record_digital(self, obj: DigitalObject, fmt: InformationFormat, structure: SymbolStructure, charset: str):
        entities = register_format_entities(self.store, fmt)
        encoding = self.store.ensure(Entity(type_encoding_id(charset), EntityKind.SYMBOL_TYPE_ENCODING, charset))
        self.store.ensure(Entity(obj.id, EntityKind.DIGITAL_OBJECT, obj))
        structure_id = self.store.register(Entity(self.store.new_id('structure'), EntityKind.SYMBOL_STRUCTURE, structure))
        self.store.record_event(EventRecord.build(
            self.store.new_id('event'), EventKind.DIGITAL_INTERPRETATION,
            interpreted=obj.id, extracted=structure_id, usedFormat=entities.format,
            usedTypeSet=entities.type_sets, usedTypeEncoding=encoding,
        ))

    # -- signal interpretation ----------------------------------------------------

    def read(self, impression: SensoryImpression, fmt: InformationFormat) -> Reading:
        """Segment an impression and read every box; large unreadable regions become analog parts."""
        if not fmt.is_discrete:
            raise NotDiscreteFormat(fmt.id)
        rules = fmt.rules
        scale = Fraction(impression.scale)
        index = self.recognizer.template_index(fmt, scale)
        pixels = impression.pixels

        kept_lines = []
        result = Reading(SymbolArrangement(scale=scale))
        for top, bottom, boxes in self.segmenter.find_lines(pixels, rules, scale):
            kept = []
            for box in boxes:
                reading = self.recognizer.read_box(pixels, box, fmt, index)
                if reading.occurrence is None:
                    if box.width >= self.min_region_px and box.height >= self.min_region_px:
                        cells = pixels[box.y:box.y + box.height, box.x:box.x + box.width]
                        result.analog_parts.append(
                            AnalogPart((box.x, box.y, box.width, box.height), region_digest(cells)))
                        continue
                    reading = BoxReading(SymbolOccurrence.unknown())
                result.readings[(box.x, box.y, box.width, box.height)] = reading
                kept.append(box)
            if kept:
                kept_lines.append((top, bottom, kept))

        result.arrangement = self.segmenter.arrange(kept_lines, rules, scale, self.rasterizer.line_height(fmt))
        return result

    def recognize(self, impression: SensoryImpression, fmt: InformationFormat) -> SymbolStructure:
        """
        Recognize the structure shown by an impression.

        Args:
            impression: Raster to read
            fmt: Discrete format whose fonts supply the templates

        Returns:
            SymbolStructure; status Undefined when some box matched nothing

        Raises:
            NotDiscreteFormat
        """
        reading = self.read(impression, fmt)
        if fmt.rules.layout == 'html':
            structure = self._html_structure(reading, fmt)
        else:
            structure = self._text_structure(reading, fmt)
        structure.analog_parts = list(reading.analog_parts)
        structure.refresh_status()

        if self.store is not None:
            self._record_signal(impression, fmt, structure)
        logger.info(f"Recognized {impression.id} under {fmt.id}: {len(structure.occurrences())} occurrences, "
                    f"{len(structure.analog_parts)} analog parts, status {structure.status.value}")
        return structure

    def _record_signal(self, impression: SensoryImpression, fmt: InformationFormat, structure: SymbolStructure):
        entities = register_format_entities(self.store, fmt)
        self.store.ensure(Entity(impression.id, EntityKind.SENSORY_IMPRESSION, impression))
        structure_id = self.store.register(Entity(self.store.new_id('structure'), EntityKind.SYMBOL_STRUCTURE, structure))
        self.store.record_event(EventRecord.build(
            self.store.new_id('event'), EventKind.SIGNAL_INTERPRETATION,
            interpreted=impression.id, extracted=structure_id, usedFormat=entities.format,
            usedTypeSet=entities.type_sets, usedFont=list(entities.fonts.values()), usedRules=entities.rules,
        ))

    def extract_analog_parts(self, impression: SensoryImpression, fmt: InformationFormat) -> List[AnalogPart]:
        """Regions that match no glyph and are at least analog.min_region_px on both sides."""
        return self.read(impression, fmt).analog_parts

    @staticmethod
    def fragment_of(structure: SymbolStructure) -> SymbolStructure:
        """
        The recoverable fragment: containers holding UNDEFINED occurrences are dropped
        (UNDEFINED occurrences directly under the root are dropped alone).
        """
        fragment = structure.copy()

        def prune(container: Container):
            kept = []
            for child in container.children:
                if isinstance(child, SymbolOccurrence):
                    if child.undefined and container is fragment.root:
                        continue
                    kept.append(child)
                elif any(isinstance(c, SymbolOccurrence) and c.undefined for c in child.children):
                    continue
                else:
                    prune(child)
                    kept.append(child)
            container.children = kept

        prune(fragment.root)
        fragment.overlaps = [pair for pair in fragment.overlaps if _path_exists(fragment, pair)]
        fragment.status = StructureStatus.FRAGMENT
        fragment.provenance.append({'step': 'fragment'})
        return fragment

    # -- structure building -------------------------------------------------------

    def _line_children(self, line: ArrangedLine, reading: Reading, fmt: InformationFormat,
                       words: bool, leading_spaces: int = 0) -> List:
        """Occurrences of one line, grouped into word containers when words is True."""
        space_type = fmt.char_to_type(' ')
        keep_spaces = fmt.meaningful.word_separators and space_type is not None
        children: List = []
        word: Optional[Container] = None
        if keep_spaces:
            children.extend(SymbolOccurrence.of(space_type) for _ in range(leading_spaces))
        for box, spaces in zip(line.boxes, line.spaces):
            occurrence = reading.reading(box).occurrence
            if spaces:
                if keep_spaces:
                    children.extend(SymbolOccurrence.of(space_type) for _ in range(spaces))
                word = None
            if words:
                if word is None:
                    word = Container('word')
                    children.append(word)
                word.add(occurrence)
            else:
                children.append(occurrence)
        return children

    def _text_structure(self, reading: Reading, fmt: InformationFormat) -> SymbolStructure:
        structure = SymbolStructure(format_id=fmt.id)
        root = structure.root
        lines = reading.arrangement.lines
        use_pages = any(line.gap_classes[0] in PAGE_BREAKS for line in lines[1:])
        paragraphs = fmt.meaningful.paragraphs
        words = fmt.meaningful.word_separators and fmt.char_to_type(' ') is not None

        page = root
        paragraph: Optional[Container] = None
        paragraph_path = None
        for index, line in enumerate(lines):
            brk = line.gap_classes[0]
            new_page = use_pages and (index == 0 or brk in PAGE_BREAKS)
            if new_page:
                page = root.add(Container('page'))
            parent = page
            if paragraphs:
                if paragraph is None or new_page or brk == GapClass.PARAGRAPH_BREAK:
                    previous_path = paragraph_path
                    paragraph = page.add(Container('paragraph'))
                    paragraph_path = str(len(page.children) - 1)
                    if use_pages:
                        paragraph_path = f"{len(root.children) - 1}.{paragraph_path}"
                    if index > 0 and brk == GapClass.PAGE_BREAK and previous_path is not None:
                        structure.add_overlap(previous_path, paragraph_path)
                parent = paragraph
            container = parent.add(Container('line'))
            container.children.extend(self._line_children(line, reading, fmt, words))
        return structure

    def _html_structure(self, reading: Reading, fmt: InformationFormat) -> SymbolStructure:
        rules = fmt.rules
        structure = SymbolStructure(root=Container('html'), format_id=fmt.id)
        head = structure.root.add(Container('head'))
        body = structure.root.add(Container('body'))
        indent = max(1, rules.block_indent_px)
        pre_rank = HTML_BLOCK_RANKS['pre']

        block: Optional[Container] = None
        block_kind = None
        for index, line in enumerate(reading.arrangement.lines):
            offset = line.left_px - rules.margin_px
            rank = min(pre_rank, max(0, offset // indent))
            kind = RANK_KINDS[rank]
            leading = 0
            if kind == 'pre':
                leading = (offset - pre_rank * indent) // rules.inter_word_gap_min_px

            continues = index > 0 and line.gap_classes[0] == GapClass.LINE_BREAK and kind == block_kind
            if continues:
                block.add(Container('br'))
            else:
                block_kind = kind
                if kind == 'title':
                    block = head.add(Container('title'))
                elif kind == 'body':
                    block = body
                else:
                    block = body.add(Container(kind))
            for child in self._html_line_children(line, reading, fmt, leading):
                block.add(child)
        return structure

    def _html_line_children(self, line: ArrangedLine, reading: Reading, fmt: InformationFormat, leading: int) -> List:
        """Line content with runs of link-font glyphs wrapped in `a` containers."""
        link_font = fmt.rules.link_font
        flat = self._line_children(line, reading, fmt, words=False, leading_spaces=leading)
        boxes = iter(line.boxes)
        in_link = []
        for child in flat:
            if isinstance(child, SymbolOccurrence) and child.type_id != fmt.char_to_type(' '):
                in_link.append(link_font is not None and link_font in reading.reading(next(boxes)).fonts)
            else:
                in_link.append(None)

        children: List = []
        link: Optional[Container] = None
        for position, child in enumerate(flat):
            flag = in_link[position]
            if flag is None:
                before = next((f for f in reversed(in_link[:position]) if f is not None), False)
                after = next((f for f in in_link[position + 1:] if f is not None), False)
                flag = before and after
            if flag:
                if link is None:
                    link = Container('a')
                    children.append(link)
                link.add(child)
            else:
                link = None
                children.append(child)
        return children


def _path_exists(structure: SymbolStructure, pair: Tuple[str, str]) -> bool:
    try:
        return all(isinstance(structure.node_at(path), Container) for path in pair)
    except (IndexError, ValueError):
        return False
