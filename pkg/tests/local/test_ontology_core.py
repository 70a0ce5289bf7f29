"""
Tests for entity registration, event validation and the derived associations.
"""

import pytest

from ontology_core import (
    DanglingLink,
    DuplicateId,
    Entity,
    EntityKind,
    EventKind,
    EventRecord,
    InformationCarryingError,
    LogSyntaxError,
    OntologyStore,
    ProvenanceDatabase,
    RoleViolation,
    UnknownEntity,
)


def build_chain(store: OntologyStore):
    """Carrier c1 projected to impression i1, interpreted into structure s1."""
    store.register(Entity("c1", EntityKind.INFORMATION_CARRIER))
    store.register(Entity("i1", EntityKind.SENSORY_IMPRESSION))
    store.register(Entity("s1", EntityKind.SYMBOL_STRUCTURE))
    store.register(Entity("scan@1", EntityKind.PHYSICAL_PROJECTION_METHOD))
    store.record_event(EventRecord.build("e1", EventKind.PHYSICAL_PROJECTION,
                                         projected="c1", produced="i1", usedTechnique="scan@1"))
    store.record_event(EventRecord.build("e2", EventKind.SIGNAL_INTERPRETATION,
                                         interpreted="i1", extracted="s1"))


class TestRegistration:

    def test_register_and_get(self, store):
        store.register(Entity("o1", EntityKind.DIGITAL_OBJECT, payload=b"abc"))
        assert store.get("o1").kind == EntityKind.DIGITAL_OBJECT
        assert store.payload("o1") == b"abc"
        assert "o1" in store
        assert len(store) == 1

    def test_duplicate_id_rejected(self, store):
        store.register(Entity("x", EntityKind.DIGITAL_OBJECT))
        with pytest.raises(DuplicateId):
            store.register(Entity("x", EntityKind.INFORMATION_CARRIER))

    def test_ensure_is_idempotent_for_same_kind(self, store):
        store.ensure(Entity("f", EntityKind.INFORMATION_FORMAT))
        store.ensure(Entity("f", EntityKind.INFORMATION_FORMAT))
        assert len(store) == 1
        with pytest.raises(DuplicateId):
            store.ensure(Entity("f", EntityKind.SYMBOL_FONT))

    def test_unknown_entity(self, store):
        with pytest.raises(UnknownEntity):
            store.get("missing")

    def test_new_id_skips_taken_ids(self, store):
        store.register(Entity("carrier-2", EntityKind.INFORMATION_CARRIER))
        first = store.new_id("carrier")
        assert first != "carrier-2"
        assert first.startswith("carrier-")


class TestEvents:

    def test_dangling_link(self, store):
        store.register(Entity("c1", EntityKind.INFORMATION_CARRIER))
        with pytest.raises(DanglingLink):
            store.record_event(EventRecord.build("e1", EventKind.PHYSICAL_PROJECTION,
                                                 projected="c1", produced="nowhere"))

    def test_wrong_target_kind(self, store):
        store.register(Entity("o1", EntityKind.DIGITAL_OBJECT))
        store.register(Entity("i1", EntityKind.SENSORY_IMPRESSION))
        with pytest.raises(RoleViolation):
            store.record_event(EventRecord.build("e1", EventKind.PHYSICAL_PROJECTION,
                                                 projected="o1", produced="i1"))

    def test_cardinality_enforced(self, store):
        store.register(Entity("c1", EntityKind.INFORMATION_CARRIER))
        with pytest.raises(RoleViolation):
            store.record_event(EventRecord.build("e1", EventKind.PHYSICAL_PROJECTION, projected="c1"))

    def test_foreign_role_rejected(self, store):
        store.register(Entity("c1", EntityKind.INFORMATION_CARRIER))
        store.register(Entity("i1", EntityKind.SENSORY_IMPRESSION))
        with pytest.raises(RoleViolation):
            store.record_event(EventRecord.build("e1", EventKind.PHYSICAL_PROJECTION,
                                                 projected="c1", produced="i1", interpreted="i1"))

    def test_interpretation_may_extract_nothing(self, store):
        store.register(Entity("i1", EntityKind.SENSORY_IMPRESSION))
        store.record_event(EventRecord.build("e1", EventKind.SIGNAL_INTERPRETATION, interpreted="i1"))
        assert store.extracted_from("i1") == set()

    def test_links_are_sorted(self):
        event = EventRecord.build("e", EventKind.PHYSICAL_PROJECTION, produced="i", projected="c")
        assert event.links == (("produced", "i"), ("projected", "c"))


class TestDerivedAssociations:

    def test_carries_and_had_projection(self, store):
        build_chain(store)
        assert store.had_projection("c1") == {"i1"}
        assert store.carries("c1") == {"s1"}

    def test_carrier_without_projection_carries_nothing(self, store):
        store.register(Entity("c2", EntityKind.INFORMATION_CARRIER))
        assert store.had_projection("c2") == set()
        assert store.carries("c2") == set()

    def test_had_projection_needs_projectable_entity(self, store):
        store.register(Entity("s", EntityKind.SYMBOL_STRUCTURE))
        with pytest.raises(UnknownEntity):
            store.had_projection("s")

    def test_incorporated(self, store):
        store.register(Entity("o1", EntityKind.DIGITAL_OBJECT))
        store.register(Entity("s1", EntityKind.SYMBOL_STRUCTURE))
        store.record_event(EventRecord.build("e1", EventKind.DIGITAL_INTERPRETATION,
                                             interpreted="o1", extracted="s1"))
        assert store.incorporated("o1") == {"s1"}


class TestIntentAndDerivation:

    def test_intent_mismatch_is_recorded(self, store):
        store.register(Entity("c1", EntityKind.INFORMATION_CARRIER))
        store.register(Entity("format:A", EntityKind.INFORMATION_FORMAT))
        store.register(Entity("format:B", EntityKind.INFORMATION_FORMAT))
        intent = store.set_intent("c1", intended_format="format:A", used_format="format:B")
        assert intent.intended_format == "format:A"
        assert store.get_intent("c1").used_format == "format:B"

    def test_intent_target_kind_checked(self, store):
        store.register(Entity("c1", EntityKind.INFORMATION_CARRIER))
        with pytest.raises(RoleViolation):
            store.set_intent("c1", intended_format="c1")

    def test_derivation_and_reproduction(self, store):
        build_chain(store)
        store.register(Entity("c2", EntityKind.INFORMATION_CARRIER))
        store.link_derived("c2", "c1")
        store.record_reproduction("i1", "c2")
        assert store.derived_from("c2") == "c1"
        assert store.reproductions("i1") == {"c2"}
        assert store.carries("c2") == set()


class TestEventLog:

    def test_export_and_replay(self, store):
        build_chain(store)
        rebuilt = OntologyStore.from_roster(store.export_entities(), store.export_event_log())
        assert rebuilt.carries("c1") == {"s1"}
        assert rebuilt.export_event_log() == store.export_event_log()

    def test_event_log_line_format(self, store):
        build_chain(store)
        first = store.export_event_log().split("\n")[0]
        assert first == "PhysicalProjection\te1\tproduced=i1;projected=c1;usedTechnique=scan@1"

    @pytest.mark.parametrize("text,line", [
        ("PhysicalProjection\te1", 1),
        ("\nTeleportation\te2\tprojected=c1", 2),
        ("PhysicalProjection\te1\tthrown=c1", 1),
    ])
    def test_malformed_event_log(self, store, text, line):
        with pytest.raises(LogSyntaxError) as excinfo:
            store.import_event_log(text)
        assert excinfo.value.line == line
        assert isinstance(excinfo.value, InformationCarryingError)

    def test_malformed_roster(self):
        with pytest.raises(LogSyntaxError) as excinfo:
            OntologyStore.from_roster("InformationCarrier\tc1\nGhost\tg1\n")
        assert excinfo.value.line == 2


class TestProvenanceDatabase:

    def test_save_and_load(self, store, tmp_path):
        build_chain(store)
        database = ProvenanceDatabase(str(tmp_path / "provenance.db"))
        database.create_tables()
        counts = database.save_store(store)
        assert counts == {'entities': 4, 'events': 2, 'intents': 0, 'derivations': 0}

        loaded = database.load_store()
        assert loaded.carries("c1") == {"s1"}
        assert database.load_event_log() == store.export_event_log()
        assert database.health_check()['status'] == 'healthy'

    def test_save_replaces_contents(self, store, tmp_path):
        build_chain(store)
        database = ProvenanceDatabase(str(tmp_path / "provenance.db"))
        database.create_tables()
        database.save_store(store)
        database.save_store(store)
        assert database.health_check()['event_count'] == 2
