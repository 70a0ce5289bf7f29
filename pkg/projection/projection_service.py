"""
Projection Service
Writes structures onto carriers and projects carriers and digital objects into
sensory impressions, recording the matching events when a store is attached.
"""

import logging
from dataclasses import replace
from typing import Dict, Optional

import numpy as np

from format_registry.format_registry import FormatRegistry, entity_id, register_format_entities
from format_registry.glyph_ops import GlyphRasterizer, Scale, as_scale, resample
from format_registry.models import InformationFormat, SymbolFont
from interpretation.structure import StructureStatus, SymbolStructure
from ontology_core.models import Entity, EntityKind, EventKind, EventRecord
from ontology_core.ontology_store import OntologyStore

from .carrier import DigitalObject, InformationCarrier, PhysicalProjectionMethod, Rect, SensoryImpression
from .errors import EmptyIntersection, LayoutError, StructureUndefined, UnsupportedType
from .layout_engine import LayoutEngine

logger = logging.getLogger(__name__)

SUPPORTED_MEDIA_TYPES = ('text/plain', 'text/html')
CORRUPTED_INTENSITY = 0.5


def render_surface(carrier: InformationCarrier, reveal_corrupted: bool = False) -> np.ndarray:
    """Carrier surface at native resolution: ink 1, blank 0, corrupted areas 0.5."""
    surface = np.zeros((carrier.height, carrier.width), dtype=np.float64)
    for placed in carrier.glyphs:
        region = surface[placed.y:placed.y + placed.height, placed.x:placed.x + placed.width]
        np.maximum(region, placed.glyph, out=region)
    if not reveal_corrupted:
        for rect in carrier.deterioration:
            surface[rect.y:rect.y + rect.height, rect.x:rect.x + rect.width] = CORRUPTED_INTENSITY
    return surface


def software_id(media_type: str) -> str:
    return f"software:{media_type}"


class ProjectionService:
    """
    Writing and projection processes.

    Pure unless a store is given; with a store, carriers, impressions and methods are
    registered and every projection appends an event.
    """

    def __init__(self, config: Dict = None, store: Optional[OntologyStore] = None,
                 registry: Optional[FormatRegistry] = None):
        self.config = config or {}
        self.store = store
        self.rasterizer = registry.rasterizer if registry is not None else GlyphRasterizer(self.config)
        self.layout_engine = LayoutEngine(self.rasterizer, self.config)
        self.page_width_px = int(self.config.get('page_width_px', 200))
        self._counter = 0

    def _new_id(self, prefix: str) -> str:
        if self.store is not None:
            return self.store.new_id(prefix)
        self._counter += 1
        return f"{prefix}-{self._counter}"

    def write_carrier(self, structure: SymbolStructure, fmt: InformationFormat, font: SymbolFont,
                      page_width_px: Optional[int] = None, intended_format: Optional[InformationFormat] = None) -> InformationCarrier:
        """
        Write a structure onto a new carrier.

        Args:
            structure: Complete or Fragment structure without ambiguity
            fmt: Format whose arrangement rules drive the layout
            font: Default font; occurrences naming another format font use that one
            page_width_px: Minimum carrier width
            intended_format: Format the writer meant to use, if different

        Returns:
            InformationCarrier with one placed glyph per non-arrangement occurrence
        """
        carrier = self._write(structure, fmt, font, page_width_px)
        if self.store is not None:
            self.store.register(Entity(carrier.id, EntityKind.INFORMATION_CARRIER, carrier))
            entities = register_format_entities(self.store, fmt)
            intended = entities.format
            if intended_format is not None:
                intended = register_format_entities(self.store, intended_format).format
            self.store.set_intent(carrier.id, intended_format=intended, used_format=entities.format)
        logger.info(f"Wrote {carrier.id}: {len(carrier.glyphs)} glyphs on {carrier.width}x{carrier.height}px")
        return carrier

    def _write(self, structure: SymbolStructure, fmt: InformationFormat, font: SymbolFont,
               page_width_px: Optional[int]) -> InformationCarrier:
        if structure.status == StructureStatus.UNDEFINED or structure.has_undefined():
            raise StructureUndefined("Cannot write a structure with UNDEFINED occurrences")
        if any(occurrence.is_ambiguous for occurrence in structure.occurrences()):
            raise StructureUndefined("Cannot write a structure with unresolved ambiguity")
        if not fmt.is_discrete:
            raise LayoutError(f"Format {fmt.id} is not discrete")

        width = self.page_width_px if page_width_px is None else page_width_px
        try:
            glyphs, carrier_width, carrier_height = self.layout_engine.layout(structure, fmt, font, width)
        except Exception as e:
            logger.error(f"Layout of {fmt.id} structure failed: {e}")
            raise
        return InformationCarrier(self._new_id('carrier'), tuple(glyphs), carrier_width, carrier_height,
                                  (), fmt.id, font.id)

    def physical_project(self, carrier: InformationCarrier, method: PhysicalProjectionMethod) -> SensoryImpression:
        """Render the carrier at the method's resolution; corrupted rectangles read as 0.5 unless revealed."""
        pixels = resample(render_surface(carrier, method.reveals_corrupted), method.scale)
        impression = SensoryImpression(self._new_id('impression'), pixels, method.scale, carrier.id)

        if self.store is not None:
            self.store.ensure(Entity(carrier.id, EntityKind.INFORMATION_CARRIER, carrier))
            self.store.ensure(Entity(method.id, EntityKind.PHYSICAL_PROJECTION_METHOD, method))
            self.store.register(Entity(impression.id, EntityKind.SENSORY_IMPRESSION, impression))
            encoding = entity_id('font-encoding', carrier.font_id) if carrier.font_id else None
            self.store.record_event(EventRecord.build(
                self.store.new_id('event'), EventKind.PHYSICAL_PROJECTION,
                projected=carrier.id, produced=impression.id, usedTechnique=method.id,
                usedFontEncoding=encoding if encoding in self.store else None,
            ))
        logger.info(f"Projected {carrier.id} with {method.id}: {impression.width}x{impression.height}px")
        return impression

    def digital_project(self, obj: DigitalObject, fmt: InformationFormat, font: SymbolFont,
                        page_width_px: Optional[int] = None, scale: Scale = 1) -> SensoryImpression:
        """
        Project a digital object through the reference renderer of its type tag.
        The raster equals interpreting the bytes, writing a carrier and projecting it.
        """
        if obj.media_type not in SUPPORTED_MEDIA_TYPES:
            raise UnsupportedType(obj.type_tag)
        # interpretation imports projection.carrier
        from interpretation.interpretation_service import InterpretationService

        scale = as_scale(scale)
        structure = InterpretationService(self.config).digital_interpret(obj, fmt)
        carrier = self._write(structure, fmt, font, page_width_px)
        pixels = resample(render_surface(carrier), scale)
        impression = SensoryImpression(self._new_id('impression'), pixels, scale, obj.id)

        if self.store is not None:
            entities = register_format_entities(self.store, fmt)
            self.store.ensure(Entity(obj.id, EntityKind.DIGITAL_OBJECT, obj))
            software = self.store.ensure(Entity(software_id(obj.media_type), EntityKind.MEDIA_PROJECTION_SOFTWARE,
                                                obj.media_type))
            self.store.register(Entity(impression.id, EntityKind.SENSORY_IMPRESSION, impression))
            self.store.record_event(EventRecord.build(
                self.store.new_id('event'), EventKind.DIGITAL_PROJECTION,
                projected=obj.id, produced=impression.id, usedSoftware=software,
                usedFormat=entities.format, usedFont=entities.fonts.get(font.id),
                usedFontEncoding=entities.font_encodings.get(font.id),
            ))
        logger.info(f"Digitally projected {obj.id} ({obj.type_tag}) at scale {scale}")
        return impression

    def corrupt(self, carrier: InformationCarrier, rect: Rect) -> InformationCarrier:
        """
        Copy the carrier with one more deteriorated rectangle, clipped to the extent.
        The original carrier is left as it was.
        """
        clipped = rect.clip(carrier.width, carrier.height)
        if clipped is None:
            raise EmptyIntersection(f"{rect} lies outside {carrier.id} ({carrier.width}x{carrier.height})")

        corrupted = replace(carrier, id=self._new_id('carrier'), deterioration=carrier.deterioration + (clipped,))
        if self.store is not None:
            self.store.ensure(Entity(carrier.id, EntityKind.INFORMATION_CARRIER, carrier))
            self.store.register(Entity(corrupted.id, EntityKind.INFORMATION_CARRIER, corrupted))
            self.store.link_derived(corrupted.id, carrier.id)
        logger.info(f"Corrupted {carrier.id} at {clipped} -> {corrupted.id}")
        return corrupted
