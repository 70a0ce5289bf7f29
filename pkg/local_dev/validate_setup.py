#!/usr/bin/env python3
"""
Smoke check for a local checkout: packages import, shipped formats load and validate,
and one text survives a write/scan/read round trip.
"""

import logging
import sys
from pathlib import Path

# Setup logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

FORMATS_PATH = project_root / "config" / "formats"


def check_imports() -> bool:
    """All library packages import."""
    logger.info("Checking package imports...")
    try:
        import analog_distance  # noqa: F401
        import disambiguation  # noqa: F401
        import format_registry  # noqa: F401
        import identity  # noqa: F401
        import interpretation  # noqa: F401
        import ontology_core  # noqa: F401
        import projection  # noqa: F401
        logger.info("✅ Library packages imported successfully")
        return True
    except Exception as e:
        logger.error(f"❌ Import failed: {e}")
        return False


def check_formats() -> bool:
    """Format definitions load without errors; every format except the resolution demo is valid at native size."""
    logger.info("Checking format definitions...")
    try:
        from format_registry import FormatRegistry

        registry = FormatRegistry(str(FORMATS_PATH))
        for error in registry.load_errors:
            logger.error(f"❌ {error}")
        ok = not registry.load_errors
        for format_id in registry.list_formats():
            report = registry.validate_format(format_id)
            status = "✅" if report.is_valid else "⚠️"
            logger.info(f"  {status} {format_id}: {len(report.collisions)} collisions")
        return ok and bool(registry.list_formats())
    except Exception as e:
        logger.error(f"❌ Format loading failed: {e}")
        return False


def check_round_trip() -> bool:
    """Decode a text, write it onto a carrier, scan it and compare the recognized structure."""
    logger.info("Checking write/scan/read round trip...")
    try:
        from format_registry import FormatRegistry
        from identity import IdentityService
        from interpretation import InterpretationService
        from projection import PhysicalProjectionMethod, ProjectionService
        from projection.carrier import DigitalObject

        registry = FormatRegistry(str(FORMATS_PATH))
        fmt = registry.get_format("PLAIN_LATIN")
        font = registry.get_font("COURIER_DEMO")
        interpretation = InterpretationService({}, None, registry)
        projection = ProjectionService({}, None, registry)

        obj = DigitalObject("smoke", b"Hello world\n\nBye, now!", "text/plain;charset=ascii")
        decoded = interpretation.digital_interpret(obj, fmt)
        carrier = projection.write_carrier(decoded, fmt, font)
        recognized = interpretation.recognize(projection.physical_project(carrier, PhysicalProjectionMethod.at(1)), fmt)

        verdict = IdentityService({}, None, registry).identical(decoded, recognized)
        logger.info(f"  Verdict: {verdict.value.value}")
        return verdict.is_identical
    except Exception as e:
        logger.error(f"❌ Round trip failed: {e}")
        return False


def main() -> int:
    checks = [
        ("imports", check_imports),
        ("formats", check_formats),
        ("round trip", check_round_trip),
    ]
    results = {name: check() for name, check in checks}

    logger.info("=" * 50)
    for name, passed in results.items():
        logger.info(f"{'✅' if passed else '❌'} {name}")
    return 0 if all(results.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
