"""
Format Registry Module
Handles format-definition parsing, glyph rendering and format validation.
"""

from .errors import FormatSyntaxError, UnknownFont, UnknownFormat, UnresolvedReference
from .models import (
    ArrangementRuleSet,
    GlyphBitmap,
    InformationFormat,
    MeaningfulFlags,
    MergeDeclaration,
    SymbolFont,
    SymbolType,
    SymbolTypeSet,
)
from .definition_parser import FormatDefinitionParser
from .glyph_ops import GlyphRasterizer, resample, binarize
from .format_registry import FormatEntities, FormatRegistry, ValidationReport, entity_id, register_format_entities

__all__ = [
    'FormatRegistry', 'FormatDefinitionParser', 'GlyphRasterizer', 'ValidationReport',
    'InformationFormat', 'SymbolFont', 'SymbolType', 'SymbolTypeSet', 'GlyphBitmap',
    'ArrangementRuleSet', 'MeaningfulFlags', 'MergeDeclaration',
    'FormatSyntaxError', 'UnresolvedReference', 'UnknownFormat', 'UnknownFont',
    'FormatEntities', 'entity_id', 'register_format_entities', 'resample', 'binarize',
]
