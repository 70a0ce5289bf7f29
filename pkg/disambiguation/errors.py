"""
Errors raised while resolving ambiguity.
"""

from ontology_core.errors import InformationCarryingError


class MissingWordStructure(InformationCarryingError):
    """Resolution needs word containers, which only formats with meaningful word separators produce."""


class LexiconError(InformationCarryingError):
    def __init__(self, path: str, line: int, msg: str):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {msg}")
