"""Local development scripts: provenance database setup and smoke checks."""
