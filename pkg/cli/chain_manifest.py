"""
Migration-chain manifests: one artifact per line, `kind<TAB>path<TAB>typeTagOrScale`.

    digital   path         type tag of the file, e.g. text/plain;charset=latin1
    carrier   path.pgm     scale of the raster, or - to use the file's scale comment
    text      path         -   (UTF-8 plain text)
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Union

from identity.identity_service import ChainStep
from projection.carrier import DigitalObject
from projection.raster_export import RasterExporter

from .errors import ManifestError

logger = logging.getLogger(__name__)

KINDS = ('digital', 'carrier', 'text')
TEXT_TYPE_TAG = "text/plain;charset=utf8"


@dataclass(frozen=True)
class ManifestEntry:
    kind: str
    path: Path
    argument: str
    label: str
    line: int


def parse_manifest(path: Union[str, Path]) -> List[ManifestEntry]:
    """
    Raises:
        ManifestError: unknown kind, wrong field count or an empty manifest
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except (OSError, UnicodeDecodeError) as e:
        raise ManifestError(str(path), 0, f"cannot read manifest: {e}") from e

    entries = []
    for number, line in enumerate(text.split('\n'), start=1):
        if not line.strip() or line.startswith('#'):
            continue
        fields = line.split('\t')
        if len(fields) != 3:
            raise ManifestError(str(path), number, "expected kind<TAB>path<TAB>typeTagOrScale")
        kind, relative, argument = (field.strip() for field in fields)
        if kind not in KINDS:
            raise ManifestError(str(path), number, f"unknown artifact kind {kind!r}")
        artifact_path = Path(relative)
        if not artifact_path.is_absolute():
            artifact_path = path.parent / artifact_path
        entries.append(ManifestEntry(kind, artifact_path, argument, relative, number))

    if not entries:
        raise ManifestError(str(path), 0, "manifest lists no artifacts")
    return entries


def load_chain(entries: List[ManifestEntry], manifest: str = "manifest") -> List[ChainStep]:
    """Read every listed artifact into a chain step labelled with its manifest path."""
    exporter = RasterExporter()
    steps = []
    for entry in entries:
        try:
            if entry.kind == 'carrier':
                scale = None if entry.argument in ('', '-') else Fraction(entry.argument)
                text = entry.path.read_text(encoding='utf-8')
                artifact = exporter.parse_pgm(text, f"impression:{entry.label}", scale)
            else:
                type_tag = TEXT_TYPE_TAG if entry.kind == 'text' else entry.argument
                artifact = DigitalObject(f"object:{entry.label}", entry.path.read_bytes(), type_tag)
        except (OSError, ValueError, ZeroDivisionError) as e:
            raise ManifestError(manifest, entry.line, f"cannot load {entry.label}: {e}") from e
        steps.append(ChainStep(artifact, label=entry.label))
    logger.info(f"Loaded {len(steps)} chain artifacts from {manifest}")
    return steps
