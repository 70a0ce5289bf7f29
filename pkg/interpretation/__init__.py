"""
Interpretation Module
Handles segmentation, glyph recognition, text decoding and HTML parsing into symbol structures.
"""

from .structure import (
    UNDEFINED,
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
from .errors import DecodeError, HtmlParseError, InterpretationError, NotDiscreteFormat
from .segmentation import Segmenter
from .recognizer import GlyphRecognizer, TemplateMatch
from .text_decoder import PlainTextDecoder
from .html_parser import HtmlSubsetParser
from .interpretation_service import InterpretationService

__all__ = [
    'InterpretationService', 'Segmenter', 'GlyphRecognizer', 'PlainTextDecoder', 'HtmlSubsetParser',
    'SymbolStructure', 'SymbolOccurrence', 'Container', 'AnalogPart', 'StructureStatus',
    'SymbolArrangement', 'ArrangedLine', 'GlyphBox', 'GapClass', 'TemplateMatch', 'UNDEFINED',
    'InterpretationError', 'NotDiscreteFormat', 'DecodeError', 'HtmlParseError',
]
