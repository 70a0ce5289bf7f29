"""
Entity and event types of the information-carrying ontology.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple


class EntityKind(str, Enum):
    """Entity kinds. Values are the class names used in event-log files."""

    INFORMATION_CARRIER = "InformationCarrier"
    DIGITAL_OBJECT = "DigitalObject"
    SENSORY_IMPRESSION = "SensoryImpression"
    SYMBOL_STRUCTURE = "SymbolStructure"
    INFORMATION_FORMAT = "InformationFormat"
    SYMBOL_FONT = "SymbolFont"
    SYMBOL_TYPE_SET = "SymbolTypeSet"
    ARRANGEMENT_RULE_SET = "ArrangementRuleSet"
    PHYSICAL_PROJECTION_METHOD = "PhysicalProjectionMethod"
    MEDIA_PROJECTION_SOFTWARE = "MediaProjectionSoftware"
    SYMBOL_FONT_ENCODING = "SymbolFontEncoding"
    SYMBOL_TYPE_ENCODING = "SymbolTypeEncoding"


# Ontology class each kind stands for (see docs/class-mapping.md)
ONTOLOGY_CLASS = {
    EntityKind.INFORMATION_CARRIER: "E84",
    EntityKind.DIGITAL_OBJECT: "ICI13",
    EntityKind.SENSORY_IMPRESSION: "ICI3",
    EntityKind.SYMBOL_STRUCTURE: "ICI5",
    EntityKind.INFORMATION_FORMAT: "ICI19",
    EntityKind.SYMBOL_FONT: "ICI8",
    EntityKind.SYMBOL_TYPE_SET: "ICI9",
    EntityKind.ARRANGEMENT_RULE_SET: "ICI10",
    EntityKind.PHYSICAL_PROJECTION_METHOD: "ICI1",
    EntityKind.MEDIA_PROJECTION_SOFTWARE: "ICI15",
    EntityKind.SYMBOL_FONT_ENCODING: "ICI11",
    EntityKind.SYMBOL_TYPE_ENCODING: "ICI12",
}


class EventKind(str, Enum):
    PHYSICAL_PROJECTION = "PhysicalProjection"
    DIGITAL_PROJECTION = "DigitalProjection"
    SIGNAL_INTERPRETATION = "SignalInterpretation"
    DIGITAL_INTERPRETATION = "DigitalInterpretation"


class Role(str, Enum):
    PROJECTED = "projected"
    PRODUCED = "produced"
    INTERPRETED = "interpreted"
    EXTRACTED = "extracted"
    USED_TECHNIQUE = "usedTechnique"
    USED_SOFTWARE = "usedSoftware"
    USED_FORMAT = "usedFormat"
    USED_FONT = "usedFont"
    USED_TYPE_SET = "usedTypeSet"
    USED_RULES = "usedRules"
    USED_TYPE_ENCODING = "usedTypeEncoding"
    USED_FONT_ENCODING = "usedFontEncoding"


# Entity kind every "used*" role must point at
USED_ROLE_TARGETS = {
    Role.USED_TECHNIQUE: EntityKind.PHYSICAL_PROJECTION_METHOD,
    Role.USED_SOFTWARE: EntityKind.MEDIA_PROJECTION_SOFTWARE,
    Role.USED_FORMAT: EntityKind.INFORMATION_FORMAT,
    Role.USED_FONT: EntityKind.SYMBOL_FONT,
    Role.USED_TYPE_SET: EntityKind.SYMBOL_TYPE_SET,
    Role.USED_RULES: EntityKind.ARRANGEMENT_RULE_SET,
    Role.USED_TYPE_ENCODING: EntityKind.SYMBOL_TYPE_ENCODING,
    Role.USED_FONT_ENCODING: EntityKind.SYMBOL_FONT_ENCODING,
}


@dataclass(frozen=True)
class Entity:
    """A registered instance of one ontology class. The payload is not part of equality."""

    id: str
    kind: EntityKind
    payload: Any = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValueError("Entity id must be a nonempty string")
        object.__setattr__(self, "kind", EntityKind(self.kind))


@dataclass(frozen=True)
class EventRecord:
    """A projection or interpretation process linking entities by role."""

    id: str
    kind: EventKind
    links: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValueError("Event id must be a nonempty string")
        object.__setattr__(self, "kind", EventKind(self.kind))
        normalized = tuple(sorted((Role(role).value, entity_id) for role, entity_id in self.links))
        object.__setattr__(self, "links", normalized)

    @classmethod
    def build(cls, event_id: str, kind: EventKind, **roles: Any) -> "EventRecord":
        """
        Convenience constructor: keyword per role, value an id or an iterable of ids.

        Example:
            EventRecord.build("e1", EventKind.PHYSICAL_PROJECTION, projected="o2", produced="i2")
        """
        links: List[Tuple[str, str]] = []
        for role, value in roles.items():
            if value is None:
                continue
            ids: Iterable[str] = [value] if isinstance(value, str) else value
            links.extend((Role(role).value, entity_id) for entity_id in ids)
        return cls(event_id, kind, tuple(links))

    def targets(self, role: Role) -> List[str]:
        role_value = Role(role).value
        return [entity_id for link_role, entity_id in self.links if link_role == role_value]

    def roles(self) -> FrozenSet[str]:
        return frozenset(role for role, _ in self.links)


@dataclass
class IntentMetadata:
    """Intended-vs-used projection and format of one subject entity."""

    subject: str
    intended_projection: Optional[str] = None
    intended_format: Optional[str] = None
    used_format: Optional[str] = None

    def to_dict(self) -> Dict[str, Optional[str]]:
        return {
            'subject': self.subject,
            'intended_projection': self.intended_projection,
            'intended_format': self.intended_format,
            'used_format': self.used_format,
        }
