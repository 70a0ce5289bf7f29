"""
Identity Service
Identity verdicts between structures, incorporation checks and migration-chain
verification.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd

from format_registry.format_registry import FormatRegistry
from format_registry.models import InformationFormat
from interpretation.interpretation_service import InterpretationService
from interpretation.structure import StructureStatus, SymbolStructure
from ontology_core.ontology_store import OntologyStore
from projection.carrier import DigitalObject, InformationCarrier, PhysicalProjectionMethod, SensoryImpression
from projection.projection_service import ProjectionService

from .canonical import Canonicalizer, node_line, path_key
from .errors import ChainStepError, FormatMismatch

logger = logging.getLogger(__name__)

DiffEntry = Tuple[str, Optional[str], Optional[str]]


class Verdict(str, Enum):
    IDENTICAL = "Identical"
    DIFFERENT = "Different"
    UNDEFINED = "Undefined"


@dataclass
class IdentityVerdict:
    value: Verdict
    diff: List[DiffEntry] = field(default_factory=list)

    @property
    def is_identical(self) -> bool:
        return self.value == Verdict.IDENTICAL


@dataclass
class ChainStep:
    """
    One artifact of a migration chain: a digital object, a carrier read back through a
    projection method, or an impression already captured.
    """

    artifact: Union[DigitalObject, InformationCarrier, SensoryImpression]
    method: Optional[PhysicalProjectionMethod] = None
    label: Optional[str] = None

    @property
    def artifact_id(self) -> str:
        return self.label or self.artifact.id


@dataclass
class MigrationReport:
    format_id: str
    chain: List[Tuple[str, str]] = field(default_factory=list)
    statuses: List[str] = field(default_factory=list)
    verdict: IdentityVerdict = field(default_factory=lambda: IdentityVerdict(Verdict.IDENTICAL))
    first_divergence: Optional[int] = None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'step': list(range(len(self.chain))),
            'artifact': [artifact for artifact, _ in self.chain],
            'digest': [digest for _, digest in self.chain],
            'status': self.statuses,
        })

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        self.to_frame().to_csv(path, index=False, lineterminator='\n')
        return path

    def summary(self) -> str:
        if self.verdict.value == Verdict.IDENTICAL:
            return "Identical"
        return f"{self.verdict.value.value} at step {self.first_divergence}"


def is_undefined(structure: SymbolStructure) -> bool:
    return structure.status == StructureStatus.UNDEFINED or structure.has_undefined()


class IdentityService:
    """Compares structures by canonical form and verifies migration chains."""

    def __init__(self, config: Dict = None, store: Optional[OntologyStore] = None,
                 registry: Optional[FormatRegistry] = None):
        self.config = config or {}
        self.canonicalizer = Canonicalizer(self.config)
        self.interpretation = InterpretationService(self.config, store, registry)
        self.projection = ProjectionService(self.config, store, registry)

    def canonicalize(self, structure: SymbolStructure):
        return self.canonicalizer.canonicalize(structure)

    def identical(self, a: SymbolStructure, b: SymbolStructure) -> IdentityVerdict:
        """
        Identity verdict of two structures of one format.

        Returns:
            Undefined if either is undefined, else Identical iff the canonical bytes (less the
            format comment) are equal,
            else Different with the differing paths

        Raises:
            FormatMismatch: the structures were extracted under different formats
        """
        if a.format_id and b.format_id and a.format_id != b.format_id:
            raise FormatMismatch(a.format_id, b.format_id)
        if is_undefined(a) or is_undefined(b):
            return IdentityVerdict(Verdict.UNDEFINED)
        if self.canonicalizer.content(a) == self.canonicalizer.content(b):
            return IdentityVerdict(Verdict.IDENTICAL)
        return IdentityVerdict(Verdict.DIFFERENT, self.diff(a, b))

    @staticmethod
    def diff(a: SymbolStructure, b: SymbolStructure) -> List[DiffEntry]:
        """Paths whose canonical line differs; overlaps, analog parts and status compared as wholes."""
        def lines(structure: SymbolStructure) -> Dict[str, str]:
            mapped = {path: node_line(node, depth) for depth, path, node in structure.walk()}
            canonical = Canonicalizer().lines(structure, with_format=False)
            mapped['overlaps'] = ' '.join(line for line in canonical if line.startswith('OVERLAP '))
            mapped['analog'] = ' '.join(line for line in canonical if line.startswith('ANALOG '))
            mapped['status'] = structure.status.value
            return mapped

        left, right = lines(a), lines(b)
        extras = ('overlaps', 'analog', 'status')
        node_paths = sorted((set(left) | set(right)) - set(extras), key=path_key)
        entries = []
        for path in list(node_paths) + list(extras):
            if left.get(path) != right.get(path):
                entries.append((path or '/', left.get(path), right.get(path)))
        return entries

    def incorporates(self, obj: DigitalObject, structure: SymbolStructure, fmt: InformationFormat) -> bool:
        """True iff the object's bytes carry exactly this structure under the format."""
        extracted = self.interpretation.digital_interpret(obj, fmt)
        return self.identical(extracted, structure).is_identical

    def extract(self, step: ChainStep, fmt: InformationFormat) -> SymbolStructure:
        artifact = step.artifact
        if isinstance(artifact, DigitalObject):
            return self.interpretation.digital_interpret(artifact, fmt)
        if isinstance(artifact, InformationCarrier):
            method = step.method or PhysicalProjectionMethod.at(1)
            impression = self.projection.physical_project(artifact, method)
            return self.interpretation.recognize(impression, fmt)
        if isinstance(artifact, SensoryImpression):
            return self.interpretation.recognize(artifact, fmt)
        raise TypeError(f"Unsupported chain artifact {type(artifact).__name__}")

    def verify_migration(self, chain: Sequence[Union[ChainStep, DigitalObject, InformationCarrier, SensoryImpression]],
                         intended_format: InformationFormat) -> MigrationReport:
        """
        Extract every artifact under the intended format and compare each with the first.

        Args:
            chain: Artifacts in migration order
            intended_format: Format whose information object should survive the chain

        Returns:
            MigrationReport; the verdict follows the first undefined or different step

        Raises:
            ChainStepError: extraction failed, with the failing index
        """
        report = MigrationReport(intended_format.id)
        first: Optional[SymbolStructure] = None
        for index, item in enumerate(chain):
            step = item if isinstance(item, ChainStep) else ChainStep(item)
            try:
                structure = self.extract(step, intended_format)
            except Exception as e:
                logger.error(f"Migration step {index} ({step.artifact_id}) failed: {e}")
                raise ChainStepError(index, e) from e

            form = self.canonicalizer.canonicalize(structure)
            report.chain.append((step.artifact_id, form.digest))
            report.statuses.append(structure.status.value)
            if first is None:
                first = structure
                if is_undefined(structure):
                    report.verdict = IdentityVerdict(Verdict.UNDEFINED)
                    report.first_divergence = 0
                continue
            if report.first_divergence is not None:
                continue
            verdict = self.identical(first, structure)
            if not verdict.is_identical:
                report.verdict = verdict
                report.first_divergence = index

        logger.info(f"Migration chain of {len(report.chain)} steps under {intended_format.id}: {report.summary()}")
        return report
