"""
Errors raised while writing carriers and projecting them.
"""

from ontology_core.errors import InformationCarryingError


class ProjectionError(InformationCarryingError):
    """Base class of projection errors."""


class MissingGlyph(ProjectionError):
    def __init__(self, type_id: str, font_id: str = ""):
        self.type_id = type_id
        self.font_id = font_id
        suffix = f" in font {font_id}" if font_id else ""
        super().__init__(f"No glyph for {type_id}{suffix}")


class StructureUndefined(ProjectionError):
    """The structure holds UNDEFINED or still-ambiguous occurrences and cannot be written."""


class UnsupportedType(ProjectionError):
    def __init__(self, type_tag: str):
        self.type_tag = type_tag
        super().__init__(f"Unsupported type tag: {type_tag}")


class EmptyIntersection(ProjectionError):
    """A corruption rectangle lies entirely outside the carrier."""


class LayoutError(ProjectionError):
    """The structure has a shape the format's layout cannot express."""


class UnsupportedStyle(ProjectionError):
    def __init__(self, font_id: str, styles):
        self.font_id = font_id
        self.styles = sorted(styles)
        super().__init__(f"Font {font_id} does not render styles {self.styles}")
