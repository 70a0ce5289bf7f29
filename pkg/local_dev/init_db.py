#!/usr/bin/env python3
"""
Local Provenance Database Initialization Script

Creates the SQLite provenance database and optionally records a sample chain:
a text object written onto a carrier, scanned, and read back.
"""

import argparse
import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from cli.config_loader import load_config
from format_registry import FormatRegistry
from interpretation import InterpretationService
from ontology_core import OntologyStore, ProvenanceDatabase
from projection import PhysicalProjectionMethod, ProjectionService
from projection.carrier import DigitalObject

SAMPLE_TEXT = "Hello world\n\nThis is a yellow cab."


def create_database_schema(db_path: str) -> ProvenanceDatabase:
    """Create the provenance tables."""
    database = ProvenanceDatabase(db_path)
    database.create_tables()
    print(f"✅ Database schema created successfully at: {db_path}")
    return database


def record_sample_chain(database: ProvenanceDatabase, config: dict) -> OntologyStore:
    """Record digital interpretation, carrier writing, scanning and recognition of SAMPLE_TEXT."""
    registry = FormatRegistry(config['formats_path'], config)
    fmt = registry.get_format(config['default_format'])
    font = registry.get_font(config['default_font'])

    store = OntologyStore(config)
    interpretation = InterpretationService(config, store, registry)
    projection = ProjectionService(config, store, registry)

    obj = DigitalObject("object:sample.txt", SAMPLE_TEXT.encode('ascii'), "text/plain;charset=ascii")
    structure = interpretation.digital_interpret(obj, fmt)
    carrier = projection.write_carrier(structure, fmt, font)
    impression = projection.physical_project(carrier, PhysicalProjectionMethod.at(1))
    interpretation.recognize(impression, fmt)

    counts = database.save_store(store)
    print(f"✅ Sample chain recorded: {counts['entities']} entities, {counts['events']} events")
    return store


def main():
    parser = argparse.ArgumentParser(description="Initialize the local provenance database")
    parser.add_argument('--config', help="Configuration file")
    parser.add_argument('--sample', action='store_true', help="Record a sample write/scan/read chain")
    args = parser.parse_args()

    config = load_config(args.config)
    db_path = config['database']['path']
    database = create_database_schema(db_path)
    if args.sample:
        record_sample_chain(database, config)

    health = database.health_check()
    print(f"📊 {health}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
