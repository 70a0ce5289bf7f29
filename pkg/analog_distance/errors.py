"""
Errors raised by the analog-distance module.
"""

from ontology_core.errors import InformationCarryingError


class AnalogDistanceError(InformationCarryingError):
    pass


class DimensionMismatch(AnalogDistanceError):
    def __init__(self, left: int, right: int):
        self.left = left
        self.right = right
        super().__init__(f"Feature vectors differ in length: {left} vs {right}")
