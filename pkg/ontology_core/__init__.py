"""
Ontology Core Module
Handles entity registration, the event provenance graph and its derived associations.
"""

from .errors import (
    DanglingLink,
    DuplicateId,
    InformationCarryingError,
    LogSyntaxError,
    RoleViolation,
    UnknownEntity,
)
from .models import (
    ONTOLOGY_CLASS,
    Entity,
    EntityKind,
    EventKind,
    EventRecord,
    IntentMetadata,
    Role,
)
from .ontology_store import OntologyStore
from .database_adapter import ProvenanceDatabase

__all__ = [
    'OntologyStore', 'ProvenanceDatabase',
    'Entity', 'EntityKind', 'EventKind', 'EventRecord', 'IntentMetadata', 'Role', 'ONTOLOGY_CLASS',
    'InformationCarryingError', 'DuplicateId', 'DanglingLink', 'LogSyntaxError', 'RoleViolation', 'UnknownEntity',
]
