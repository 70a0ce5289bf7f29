"""
Errors raised by identity checks.
"""

from ontology_core.errors import InformationCarryingError


class FormatMismatch(InformationCarryingError):
    """Structures extracted under different formats are different information objects."""

    def __init__(self, left: str, right: str):
        self.left = left
        self.right = right
        super().__init__(f"Cannot compare structures of format {left} and {right}")


class ChainStepError(InformationCarryingError):
    def __init__(self, index: int, cause: Exception):
        self.index = index
        self.cause = cause
        super().__init__(f"Chain step {index} failed: {cause}")


class CanonicalSyntaxError(InformationCarryingError):
    def __init__(self, line: int, msg: str):
        self.line = line
        super().__init__(f"Canonical file line {line}: {msg}")
