"""
Errors raised by the command-line front end.
"""

from ontology_core.errors import InformationCarryingError


class ManifestError(InformationCarryingError):
    def __init__(self, path: str, line: int, msg: str):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {msg}")
