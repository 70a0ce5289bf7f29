"""
Projection Module
Handles carrier writing, physical and digital projection, corruption and raster export.
"""

from .errors import (
    EmptyIntersection,
    LayoutError,
    MissingGlyph,
    ProjectionError,
    StructureUndefined,
    UnsupportedStyle,
    UnsupportedType,
)
from .carrier import DigitalObject, InformationCarrier, PhysicalProjectionMethod, PlacedGlyph, Rect, SensoryImpression
from .layout_engine import LayoutEngine
from .projection_service import ProjectionService, render_surface
from .raster_export import RasterExporter

__all__ = [
    'ProjectionService', 'LayoutEngine', 'RasterExporter', 'render_surface',
    'InformationCarrier', 'PlacedGlyph', 'DigitalObject', 'SensoryImpression',
    'PhysicalProjectionMethod', 'Rect',
    'ProjectionError', 'MissingGlyph', 'StructureUndefined', 'UnsupportedType',
    'EmptyIntersection', 'LayoutError', 'UnsupportedStyle',
]
