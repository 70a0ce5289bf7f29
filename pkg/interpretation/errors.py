"""
Errors raised while extracting symbol structures.
"""

from ontology_core.errors import InformationCarryingError


class InterpretationError(InformationCarryingError):
    """Base class of interpretation errors."""


class NotDiscreteFormat(InterpretationError):
    def __init__(self, format_id: str):
        self.format_id = format_id
        super().__init__(f"Format {format_id} lacks type sets, fonts or arrangement rules")


class DecodeError(InterpretationError):
    """Invalid byte sequence, or a character outside the format, at a byte offset."""

    def __init__(self, offset: int, detail: str = ""):
        self.offset = offset
        super().__init__(f"Cannot decode byte {offset}" + (f": {detail}" if detail else ""))


class HtmlParseError(InterpretationError):
    def __init__(self, line: int, detail: str):
        self.line = line
        super().__init__(f"HTML line {line}: {detail}")
