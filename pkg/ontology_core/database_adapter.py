"""
SQLite persistence for the provenance graph.

Stores the entity roster, event links, intent metadata and derivation links of an
OntologyStore. Payloads stay in memory; the derived associations only need ids and links.
"""

import logging
import os
from datetime import datetime
from pathlib import Path
from typing import Dict, Optional

from sqlalchemy import Column, DateTime, ForeignKey, Integer, String, create_engine, text
from sqlalchemy.orm import Session, declarative_base, relationship, sessionmaker
from sqlalchemy.sql import func

from .models import Entity, EntityKind, EventKind, EventRecord
from .ontology_store import OntologyStore

logger = logging.getLogger(__name__)

Base = declarative_base()


class EntityRecord(Base):
    """Registered entity (id and kind only)."""

    __tablename__ = 'entities'

    id = Column(String, primary_key=True)
    kind = Column(String, nullable=False, index=True)
    position = Column(Integer, nullable=False)
    created_at = Column(DateTime, nullable=False, default=func.now())

    def to_dict(self) -> dict:
        return {
            'id': self.id,
            'kind': self.kind,
            'position': self.position,
            'created_at': self.created_at.isoformat() if self.created_at else None,
        }


class EventRecordRow(Base):
    """Projection or interpretation event."""

    __tablename__ = 'events'

    id = Column(String, primary_key=True)
    kind = Column(String, nullable=False, index=True)
    position = Column(Integer, nullable=False)

    links = relationship("EventLinkRow", back_populates="event", cascade="all, delete-orphan",
                         order_by="EventLinkRow.id")

    def to_dict(self) -> dict:
        return {
            'id': self.id,
            'kind': self.kind,
            'links': [(link.role, link.entity_id) for link in self.links],
        }


class EventLinkRow(Base):
    """One (role, entity) link of an event."""

    __tablename__ = 'event_links'

    id = Column(Integer, primary_key=True, autoincrement=True)
    event_id = Column(String, ForeignKey('events.id'), nullable=False, index=True)
    role = Column(String, nullable=False)
    entity_id = Column(String, ForeignKey('entities.id'), nullable=False, index=True)

    event = relationship("EventRecordRow", back_populates="links")


class IntentRecord(Base):
    """Intended projection/format and used format of one subject."""

    __tablename__ = 'intents'

    subject = Column(String, ForeignKey('entities.id'), primary_key=True)
    intended_projection = Column(String, nullable=True)
    intended_format = Column(String, nullable=True)
    used_format = Column(String, nullable=True)

    def to_dict(self) -> dict:
        return {
            'subject': self.subject,
            'intended_projection': self.intended_projection,
            'intended_format': self.intended_format,
            'used_format': self.used_format,
        }


class DerivationRecord(Base):
    """derivedFrom link between two entities (e.g. a corrupted carrier and its source)."""

    __tablename__ = 'derivations'

    entity_id = Column(String, ForeignKey('entities.id'), primary_key=True)
    source_id = Column(String, ForeignKey('entities.id'), nullable=False)


class ProvenanceDatabase:
    """SQLite-backed provenance database."""

    def __init__(self, database_path: Optional[str] = None):
        """
        Initialize the database connection.

        Args:
            database_path: SQLite file path; ':memory:' for an in-memory database
        """
        self.database_path = database_path or os.getenv('ICO_DATABASE_PATH', './data/provenance.db')
        self.engine = self._create_engine()
        self.SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=self.engine)

    def _create_engine(self):
        if self.database_path == ':memory:':
            return create_engine("sqlite://")
        Path(self.database_path).parent.mkdir(parents=True, exist_ok=True)
        return create_engine(f"sqlite:///{self.database_path}", connect_args={"check_same_thread": False})

    def get_session(self) -> Session:
        return self.SessionLocal()

    def create_tables(self):
        """Create all database tables."""
        Base.metadata.create_all(bind=self.engine)

    def save_store(self, store: OntologyStore) -> Dict[str, int]:
        """
        Replace the database contents with the store's roster, events, intents and derivations.

        Args:
            store: Store to persist

        Returns:
            Row counts written per table
        """
        try:
            with self.get_session() as session:
                for model in (EventLinkRow, EventRecordRow, IntentRecord, DerivationRecord, EntityRecord):
                    session.query(model).delete()

                for position, entity in enumerate(store.entities()):
                    session.add(EntityRecord(id=entity.id, kind=entity.kind.value, position=position))
                session.flush()

                events = store.events()
                for position, event in enumerate(events):
                    row = EventRecordRow(id=event.id, kind=event.kind.value, position=position)
                    row.links = [EventLinkRow(role=role, entity_id=entity_id) for role, entity_id in event.links]
                    session.add(row)

                intents = store.intents()
                for intent in intents:
                    session.add(IntentRecord(**intent.to_dict()))

                derivations = store.derivations()
                for entity_id, source_id in derivations:
                    session.add(DerivationRecord(entity_id=entity_id, source_id=source_id))

                session.commit()

            counts = {
                'entities': len(store),
                'events': len(events),
                'intents': len(intents),
                'derivations': len(derivations),
            }
            logger.info(f"Saved provenance graph to {self.database_path}: {counts}")
            return counts
        except Exception as e:
            logger.error(f"Saving provenance graph failed: {e}")
            raise

    def load_store(self) -> OntologyStore:
        """Rebuild a payload-less store from the database."""
        store = OntologyStore()
        with self.get_session() as session:
            for row in session.query(EntityRecord).order_by(EntityRecord.position):
                store.register(Entity(row.id, EntityKind(row.kind)))
            for row in session.query(EventRecordRow).order_by(EventRecordRow.position):
                links = tuple((link.role, link.entity_id) for link in row.links)
                store.record_event(EventRecord(row.id, EventKind(row.kind), links))
            for row in session.query(IntentRecord):
                store.set_intent(row.subject, row.intended_projection, row.intended_format, row.used_format)
            for row in session.query(DerivationRecord):
                store.link_derived(row.entity_id, row.source_id)
        logger.info(f"Loaded {len(store)} entities from {self.database_path}")
        return store

    def load_event_log(self) -> str:
        """Event-log text of the persisted events, same format as OntologyStore.export_event_log."""
        lines = []
        with self.get_session() as session:
            for row in session.query(EventRecordRow).order_by(EventRecordRow.position):
                event = EventRecord(row.id, EventKind(row.kind),
                                    tuple((link.role, link.entity_id) for link in row.links))
                links = ";".join(f"{role}={entity_id}" for role, entity_id in event.links)
                lines.append(f"{event.kind.value}\t{event.id}\t{links}\n")
        return "".join(lines)

    def health_check(self) -> dict:
        """Check database health and return status."""
        try:
            with self.get_session() as session:
                session.execute(text("SELECT 1")).fetchone()
                entity_count = session.query(func.count(EntityRecord.id)).scalar()
                event_count = session.query(func.count(EventRecordRow.id)).scalar()

                return {
                    'status': 'healthy',
                    'database_path': self.database_path,
                    'entity_count': entity_count,
                    'event_count': event_count,
                    'timestamp': datetime.now().isoformat()
                }
        except Exception as e:
            return {
                'status': 'unhealthy',
                'error': str(e),
                'timestamp': datetime.now().isoformat()
            }
