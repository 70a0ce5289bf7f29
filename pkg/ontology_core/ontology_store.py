"""
In-memory entity store and event provenance graph.
Computes the derived associations had_projection and carries from the raw event log.
"""

import logging
from collections import defaultdict
from typing import Dict, List, Optional, Set, Tuple

from .errors import DanglingLink, DuplicateId, LogSyntaxError, RoleViolation, UnknownEntity
from .models import (
    Entity,
    EntityKind,
    EventKind,
    EventRecord,
    IntentMetadata,
    Role,
    USED_ROLE_TARGETS,
)

logger = logging.getLogger(__name__)

# (role, required target kind, min count, max count) per event kind
_EVENT_RULES = {
    EventKind.PHYSICAL_PROJECTION: [
        (Role.PROJECTED, EntityKind.INFORMATION_CARRIER, 1, 1),
        (Role.PRODUCED, EntityKind.SENSORY_IMPRESSION, 1, 1),
    ],
    EventKind.DIGITAL_PROJECTION: [
        (Role.PROJECTED, EntityKind.DIGITAL_OBJECT, 1, 1),
        (Role.PRODUCED, EntityKind.SENSORY_IMPRESSION, 1, 1),
    ],
    EventKind.SIGNAL_INTERPRETATION: [
        (Role.INTERPRETED, EntityKind.SENSORY_IMPRESSION, 1, 1),
        (Role.EXTRACTED, EntityKind.SYMBOL_STRUCTURE, 0, 1),
    ],
    EventKind.DIGITAL_INTERPRETATION: [
        (Role.INTERPRETED, EntityKind.DIGITAL_OBJECT, 1, 1),
        (Role.EXTRACTED, EntityKind.SYMBOL_STRUCTURE, 0, 1),
    ],
}

_PROJECTIONS = (EventKind.PHYSICAL_PROJECTION, EventKind.DIGITAL_PROJECTION)


class OntologyStore:
    """
    Single-writer store of entities and events.

    Entities are immutable once registered. Callers serialize writes; reads are safe
    from any thread once a write has returned.
    """

    def __init__(self, config: Dict = None):
        self.config = config or {}
        self._entities: Dict[str, Entity] = {}
        self._events: Dict[str, EventRecord] = {}
        self._event_order: List[str] = []
        self._intents: Dict[str, IntentMetadata] = {}
        self._derived_from: Dict[str, str] = {}
        self._reproductions: Dict[str, Set[str]] = defaultdict(set)

    def __len__(self) -> int:
        return len(self._entities)

    def __contains__(self, entity_id: str) -> bool:
        return entity_id in self._entities

    # Registration

    def register(self, entity: Entity) -> str:
        """
        Register an entity.

        Args:
            entity: Entity to add

        Returns:
            The entity id
        """
        if entity.id in self._entities or entity.id in self._events:
            raise DuplicateId(entity.id)
        self._entities[entity.id] = entity
        logger.debug(f"Registered {entity.kind.value} {entity.id}")
        return entity.id

    def ensure(self, entity: Entity) -> str:
        """Register unless an entity with the same id and kind already exists."""
        existing = self._entities.get(entity.id)
        if existing is not None:
            if existing.kind != entity.kind:
                raise DuplicateId(entity.id)
            return entity.id
        return self.register(entity)

    def get(self, entity_id: str) -> Entity:
        try:
            return self._entities[entity_id]
        except KeyError:
            raise UnknownEntity(entity_id) from None

    def payload(self, entity_id: str):
        return self.get(entity_id).payload

    def entities(self, kind: Optional[EntityKind] = None) -> List[Entity]:
        return [e for e in self._entities.values() if kind is None or e.kind == kind]

    def new_id(self, prefix: str) -> str:
        """Next free id of the form prefix-N."""
        counter = len(self._entities) + len(self._events) + 1
        while f"{prefix}-{counter}" in self._entities or f"{prefix}-{counter}" in self._events:
            counter += 1
        return f"{prefix}-{counter}"

    # Events

    def record_event(self, event: EventRecord) -> str:
        """
        Validate and append an event to the log.

        Args:
            event: Event with its role links

        Returns:
            The event id
        """
        if event.id in self._events or event.id in self._entities:
            raise DuplicateId(event.id)

        for role, entity_id in event.links:
            if entity_id not in self._entities:
                raise DanglingLink(role, entity_id)

        self._check_roles(event)
        self._events[event.id] = event
        self._event_order.append(event.id)
        logger.debug(f"Recorded {event.kind.value} {event.id}: {event.links}")
        return event.id

    def _check_roles(self, event: EventRecord):
        rules = _EVENT_RULES[event.kind]
        allowed = {rule[0].value for rule in rules} | {role.value for role in USED_ROLE_TARGETS}

        for role in event.roles():
            if role not in allowed:
                raise RoleViolation(f"{event.kind.value} {event.id} may not use role '{role}'")

        for role, kind, minimum, maximum in rules:
            targets = event.targets(role)
            if not minimum <= len(targets) <= maximum:
                raise RoleViolation(
                    f"{event.kind.value} {event.id} needs {minimum}..{maximum} '{role.value}' links, "
                    f"got {len(targets)}"
                )
            for target in targets:
                if self._entities[target].kind != kind:
                    raise RoleViolation(
                        f"{event.kind.value} {event.id}: '{role.value}' must link a {kind.value}, "
                        f"{target} is a {self._entities[target].kind.value}"
                    )

        for role, kind in USED_ROLE_TARGETS.items():
            for target in event.targets(role):
                if self._entities[target].kind != kind:
                    raise RoleViolation(
                        f"{event.kind.value} {event.id}: '{role.value}' must link a {kind.value}"
                    )

    def events(self) -> List[EventRecord]:
        return [self._events[event_id] for event_id in self._event_order]

    # Derived associations

    def had_projection(self, carrier_id: str) -> Set[str]:
        """Impressions produced by projection events of this carrier (was_projected_by.produced)."""
        entity = self.get(carrier_id)
        if entity.kind not in (EntityKind.INFORMATION_CARRIER, EntityKind.DIGITAL_OBJECT):
            raise UnknownEntity(carrier_id, f"{entity.kind.value} is not projectable")

        impressions: Set[str] = set()
        for event in self.events():
            if event.kind in _PROJECTIONS and carrier_id in event.targets(Role.PROJECTED):
                impressions.update(event.targets(Role.PRODUCED))
        return impressions

    def extracted_from(self, impression_id: str) -> Set[str]:
        """Structures extracted by signal interpretations of one impression."""
        structures: Set[str] = set()
        for event in self.events():
            if (event.kind == EventKind.SIGNAL_INTERPRETATION
                    and impression_id in event.targets(Role.INTERPRETED)):
                structures.update(event.targets(Role.EXTRACTED))
        return structures

    def carries(self, carrier_id: str) -> Set[str]:
        """Structures carried: was_projected_by.produced.was_extracted_from."""
        structures: Set[str] = set()
        for impression_id in self.had_projection(carrier_id):
            structures.update(self.extracted_from(impression_id))
        return structures

    def incorporated(self, object_id: str) -> Set[str]:
        """Structures extracted directly from a digital object by digital interpretation."""
        entity = self.get(object_id)
        if entity.kind != EntityKind.DIGITAL_OBJECT:
            raise UnknownEntity(object_id, f"{entity.kind.value} is not a DigitalObject")
        structures: Set[str] = set()
        for event in self.events():
            if (event.kind == EventKind.DIGITAL_INTERPRETATION
                    and object_id in event.targets(Role.INTERPRETED)):
                structures.update(event.targets(Role.EXTRACTED))
        return structures

    # Intent, derivation, reproduction

    def set_intent(self, subject: str, intended_projection: Optional[str] = None,
                   intended_format: Optional[str] = None, used_format: Optional[str] = None) -> IntentMetadata:
        """Record intended projection/format and used format of an entity. Mismatches are allowed."""
        self.get(subject)
        checks = [
            (intended_projection, EntityKind.PHYSICAL_PROJECTION_METHOD),
            (intended_format, EntityKind.INFORMATION_FORMAT),
            (used_format, EntityKind.INFORMATION_FORMAT),
        ]
        for entity_id, kind in checks:
            if entity_id is not None and self.get(entity_id).kind != kind:
                raise RoleViolation(f"{entity_id} is not a {kind.value}")

        current = self._intents.get(subject, IntentMetadata(subject))
        updated = IntentMetadata(
            subject,
            intended_projection if intended_projection is not None else current.intended_projection,
            intended_format if intended_format is not None else current.intended_format,
            used_format if used_format is not None else current.used_format,
        )
        self._intents[subject] = updated
        if updated.intended_format and updated.used_format and updated.intended_format != updated.used_format:
            logger.info(f"{subject}: used format {updated.used_format} differs from intended "
                        f"{updated.intended_format}")
        return updated

    def get_intent(self, subject: str) -> Optional[IntentMetadata]:
        self.get(subject)
        return self._intents.get(subject)

    def intents(self) -> List[IntentMetadata]:
        return list(self._intents.values())

    def link_derived(self, entity_id: str, source_id: str):
        """Record that entity_id was derived from source_id (e.g. a corrupted copy)."""
        self.get(entity_id)
        self.get(source_id)
        self._derived_from[entity_id] = source_id

    def derived_from(self, entity_id: str) -> Optional[str]:
        self.get(entity_id)
        return self._derived_from.get(entity_id)

    def derivations(self) -> List[Tuple[str, str]]:
        return sorted(self._derived_from.items())

    def record_reproduction(self, impression_id: str, carrier_id: str):
        """Raw 'has reproduction' link from an impression to a carrier; no event is implied."""
        if self.get(impression_id).kind != EntityKind.SENSORY_IMPRESSION:
            raise RoleViolation(f"{impression_id} is not a SensoryImpression")
        if self.get(carrier_id).kind != EntityKind.INFORMATION_CARRIER:
            raise RoleViolation(f"{carrier_id} is not an InformationCarrier")
        self._reproductions[impression_id].add(carrier_id)

    def reproductions(self, impression_id: str) -> Set[str]:
        self.get(impression_id)
        return set(self._reproductions.get(impression_id, set()))

    # Event-log files

    def export_event_log(self) -> str:
        """One event per line: kind<TAB>id<TAB>role=entityId;... with links sorted."""
        lines = []
        for event in self.events():
            links = ";".join(f"{role}={entity_id}" for role, entity_id in event.links)
            lines.append(f"{event.kind.value}\t{event.id}\t{links}\n")
        return "".join(lines)

    def export_entities(self) -> str:
        """Entity roster, one kind<TAB>id line per entity in registration order."""
        return "".join(f"{e.kind.value}\t{e.id}\n" for e in self._entities.values())

    def import_event_log(self, text: str) -> int:
        """
        Replay an exported event log into this store.

        Args:
            text: Event-log file contents

        Returns:
            Number of events recorded
        """
        count = 0
        for line_number, line in enumerate(text.split("\n"), start=1):
            if not line:
                continue
            event = parse_event_line(line, line_number)
            self.record_event(event)
            count += 1
        logger.info(f"Imported {count} events")
        return count

    @classmethod
    def from_roster(cls, roster: str, event_log: str = "") -> "OntologyStore":
        """Rebuild a payload-less store from exported roster and event log."""
        store = cls()
        for line_number, line in enumerate(roster.split("\n"), start=1):
            if not line:
                continue
            try:
                kind, entity_id = line.split("\t")
                entity = Entity(entity_id, EntityKind(kind))
            except ValueError as e:
                raise LogSyntaxError(line_number, f"bad roster line: {e}") from e
            store.register(entity)
        if event_log:
            store.import_event_log(event_log)
        return store


def parse_event_line(line: str, line_number: int = 0) -> EventRecord:
    """Parse one event-log line."""
    parts = line.split("\t")
    if len(parts) != 3:
        raise LogSyntaxError(line_number, "expected 3 tab-separated fields")
    kind, event_id, link_text = parts
    links = []
    for item in filter(None, link_text.split(";")):
        role, _, entity_id = item.partition("=")
        links.append((role, entity_id))
    try:
        return EventRecord(event_id, EventKind(kind), tuple(links))
    except ValueError as e:
        raise LogSyntaxError(line_number, str(e)) from e

