"""
Decoding of text/plain digital objects into line/paragraph/page structures.
"""

import logging
from typing import Dict, List, Optional, Tuple

from format_registry.models import InformationFormat

from .errors import DecodeError
from .structure import Container, SymbolOccurrence, SymbolStructure

logger = logging.getLogger(__name__)

# Charset parameter -> Python codec
CHARSETS = {
    'ascii': 'ascii',
    'us-ascii': 'ascii',
    'utf8': 'utf-8',
    'utf-8': 'utf-8',
    'latin1': 'latin-1',
    'latin-1': 'latin-1',
    'iso-8859-1': 'latin-1',
}
DEFAULT_CHARSET = 'ascii'

# (text, byte offset of each character)
Line = Tuple[str, List[int]]


def codec_for(charset: str) -> str:
    """Python codec of a charset parameter; raises KeyError for unsupported charsets."""
    return CHARSETS[charset.lower()]


def decode_bytes(data: bytes, charset: str) -> Tuple[str, List[int]]:
    """
    Decode bytes and return the text with the byte offset of every character.

    Raises:
        DecodeError: at the offset of the first invalid byte sequence
    """
    codec = codec_for(charset)
    try:
        text = data.decode(codec)
    except UnicodeDecodeError as e:
        raise DecodeError(e.start, e.reason) from None
    offsets = []
    position = 0
    for char in text:
        offsets.append(position)
        position += len(char.encode(codec))
    return text, offsets


class PlainTextDecoder:
    """
    Turns text into a structure: newlines end lines, blank lines separate paragraphs
    (when paragraphs are meaningful) and form feeds start pages.
    """

    def __init__(self, config: Dict = None):
        self.config = config or {}

    def decode(self, data: bytes, fmt: InformationFormat, charset: str = DEFAULT_CHARSET) -> SymbolStructure:
        """
        Decode text bytes under a format.

        Args:
            data: Raw bytes
            fmt: Format supplying the alphabet and meaningful flags
            charset: Charset parameter of the type tag

        Returns:
            Complete SymbolStructure rooted at a document container

        Raises:
            DecodeError: invalid bytes, or a character the format has no type for
        """
        text, offsets = decode_bytes(data, charset)
        pages = self._pages(text, offsets)
        structure = SymbolStructure(format_id=fmt.id)
        root = structure.root

        use_pages = len(pages) > 1
        previous_paragraph: Optional[str] = None
        trailing_blank = True
        for page_lines, leading_blank, ends_blank in pages:
            parent = root.add(Container('page')) if use_pages else root
            page_path = str(len(root.children) - 1) if use_pages else ''
            continues = use_pages and not trailing_blank and not leading_blank and previous_paragraph is not None
            trailing_blank = ends_blank
            first = True
            for paragraph in self._paragraphs(page_lines, fmt):
                if fmt.meaningful.paragraphs:
                    target = parent.add(Container('paragraph'))
                    path = f"{page_path}.{len(parent.children) - 1}" if use_pages else str(len(parent.children) - 1)
                    if first and continues:
                        structure.add_overlap(previous_paragraph, path)
                    previous_paragraph = path
                else:
                    target = parent
                    previous_paragraph = page_path
                for line_text, line_offsets in paragraph:
                    target.add(self._line(line_text, line_offsets, fmt))
                first = False

        logger.debug(f"Decoded {len(data)} bytes into {len(structure.occurrences())} occurrences")
        return structure

    @staticmethod
    def _pages(text: str, offsets: List[int]) -> List[Tuple[List[Line], bool, bool]]:
        """
        Split into nonempty pages of lines. Each page carries whether it starts and ends
        with a blank line (which separates it from the neighbouring page's paragraph).
        """
        lines: List[Line] = [("", [])]
        pages: List[List[Line]] = [lines]
        for index, char in enumerate(text):
            if char == '\r' and index + 1 < len(text) and text[index + 1] == '\n':
                continue
            if char == '\f':
                lines = [("", [])]
                pages.append(lines)
            elif char == '\n':
                lines.append(("", []))
            else:
                current, current_offsets = lines[-1]
                lines[-1] = (current + (' ' if char == '\t' else char), current_offsets + [offsets[index]])

        result = []
        carried_blank = False
        for page in pages:
            if page and not page[-1][0] and len(page) > 1:
                page = page[:-1]
            if not any(line.strip() for line, _ in page):
                carried_blank = True
                continue
            starts_blank = carried_blank or not page[0][0].strip()
            ends_blank = not page[-1][0].strip()
            result.append((page, starts_blank, ends_blank))
            carried_blank = False
        return result

    @staticmethod
    def _paragraphs(lines: List[Line], fmt: InformationFormat) -> List[List[Line]]:
        if not fmt.meaningful.paragraphs:
            return [[line for line in lines if line[0].strip()]]
        paragraphs: List[List[Line]] = []
        current: List[Line] = []
        for line in lines:
            if line[0].strip():
                current.append(line)
            elif current:
                paragraphs.append(current)
                current = []
        if current:
            paragraphs.append(current)
        return paragraphs

    @staticmethod
    def _line(text: str, offsets: List[int], fmt: InformationFormat) -> Container:
        line = Container('line')
        space_type = fmt.char_to_type(' ')
        separators = fmt.meaningful.word_separators
        word: Optional[Container] = None
        pending_space = False
        for char, offset in zip(text, offsets):
            if char == ' ':
                pending_space = word is not None or pending_space
                if not separators:
                    word = None
                continue
            type_id = fmt.char_to_type(char)
            if type_id is None or type_id == space_type:
                raise DecodeError(offset, f"character {char!r} is not in format {fmt.id}")
            occurrence = SymbolOccurrence.of(type_id)
            if not separators:
                line.add(occurrence)
                continue
            if pending_space and word is not None:
                if space_type is not None:
                    line.add(SymbolOccurrence.of(space_type))
                word = None
            if word is None:
                word = line.add(Container('word'))
            word.add(occurrence)
            pending_space = False
        return line
