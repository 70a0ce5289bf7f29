"""
Errors raised while parsing, resolving and serving information formats.
"""

from ontology_core.errors import InformationCarryingError


class FormatSyntaxError(InformationCarryingError):
    """A format-definition document does not follow the grammar."""

    def __init__(self, line: int, msg: str):
        self.line = line
        self.msg = msg
        super().__init__(f"line {line}: {msg}")


class UnresolvedReference(InformationCarryingError):
    """A definition refers to a type set, font, rule set or type that is not declared."""

    def __init__(self, name: str, line: int = 0):
        self.name = name
        self.line = line
        where = f" (line {line})" if line else ""
        super().__init__(f"Unresolved reference: {name}{where}")


class UnknownFormat(InformationCarryingError):
    def __init__(self, format_id: str):
        self.format_id = format_id
        super().__init__(f"Unknown format: {format_id}")


class UnknownFont(InformationCarryingError):
    def __init__(self, font_id: str):
        self.font_id = font_id
        super().__init__(f"Unknown font: {font_id}")
