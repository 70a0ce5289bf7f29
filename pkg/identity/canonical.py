"""
Canonical serialization of symbol structures and its SHA-256 digest.

File layout (UTF-8, LF):

    ICO-CANON 1
    # format <format id>
    NODE <depth> <kind> [key=value ...]
    OCC <depth> {T1,T2,...}|{UNDEFINED} [flag=value ...]
    OVERLAP <pathA> <pathB>
    ANALOG <x>,<y>,<w>,<h> <sha256hex>|-
    STATUS <Complete|Fragment|Undefined>
"""

import hashlib
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple
from urllib.parse import quote, unquote

from interpretation.structure import (
    UNDEFINED,
    AnalogPart,
    Container,
    StructureStatus,
    SymbolOccurrence,
    SymbolStructure,
)

from .errors import CanonicalSyntaxError

logger = logging.getLogger(__name__)

HEADER = "ICO-CANON 1"
FORMAT_PREFIX = "# format "


@dataclass(frozen=True)
class CanonicalForm:
    data: bytes
    digest: str

    @property
    def text(self) -> str:
        return self.data.decode('utf-8')


def escape(value: str) -> str:
    return quote(value, safe=':/')


def _pairs(mapping: Dict[str, str]) -> str:
    return ''.join(f" {escape(key)}={escape(value)}" for key, value in sorted(mapping.items()))


def node_line(node, depth: int) -> str:
    """One canonical line for a container or an occurrence."""
    if isinstance(node, Container):
        return f"NODE {depth} {escape(node.kind)}{_pairs(node.attrs)}"
    types = UNDEFINED if node.undefined else ','.join(sorted(node.alternatives))
    return f"OCC {depth} {{{types}}}{_pairs(node.style_attrs)}"


def path_key(path: str) -> Tuple[int, ...]:
    return tuple(int(part) for part in path.split('.')) if path else ()


class Canonicalizer:
    """Serializes structures deterministically and parses canonical files back."""

    def __init__(self, config: Dict = None):
        self.config = config or {}

    def lines(self, structure: SymbolStructure, with_format: bool = True) -> List[str]:
        lines = [HEADER]
        if structure.format_id and with_format:
            lines.append(FORMAT_PREFIX + structure.format_id)
        for depth, _, node in structure.walk():
            lines.append(node_line(node, depth))
        for path_a, path_b in sorted(tuple(sorted(pair, key=path_key)) for pair in structure.overlaps):
            lines.append(f"OVERLAP {path_a} {path_b}")
        for part in sorted(structure.analog_parts, key=lambda p: (p.region, p.digest or '')):
            region = ','.join(str(v) for v in part.region)
            lines.append(f"ANALOG {region} {part.digest or '-'}")
        lines.append(f"STATUS {structure.status.value}")
        return lines

    def canonicalize(self, structure: SymbolStructure) -> CanonicalForm:
        """Canonical bytes and their SHA-256 hex digest."""
        data = ('\n'.join(self.lines(structure)) + '\n').encode('utf-8')
        return CanonicalForm(data, hashlib.sha256(data).hexdigest())

    def content(self, structure: SymbolStructure) -> bytes:
        """Canonical bytes without the format comment; what identity compares."""
        return ('\n'.join(self.lines(structure, with_format=False)) + '\n').encode('utf-8')

    def parse(self, data: bytes) -> SymbolStructure:
        """
        Read a canonical file back into a structure.

        Raises:
            CanonicalSyntaxError: malformed header, line or nesting
        """
        text = data.decode('utf-8')
        lines = text.split('\n')
        if lines and lines[-1] == '':
            lines.pop()
        if not lines or lines[0] != HEADER:
            raise CanonicalSyntaxError(1, f"expected header {HEADER!r}")

        structure = SymbolStructure()
        stack: List[Container] = []
        root: Optional[Container] = None
        for number, line in enumerate(lines[1:], start=2):
            if line.startswith(FORMAT_PREFIX):
                structure.format_id = line[len(FORMAT_PREFIX):]
                continue
            fields = line.split(' ')
            tag = fields[0]
            try:
                if tag in ('NODE', 'OCC'):
                    depth = int(fields[1])
                    node = self._parse_node(tag, fields[2:])
                    if depth == 0:
                        if root is not None or not isinstance(node, Container):
                            raise ValueError("a single container root is required")
                        root = node
                        stack = [node]
                        continue
                    if depth > len(stack):
                        raise ValueError(f"depth {depth} skips a level")
                    del stack[depth:]
                    stack[-1].children.append(node)
                    if isinstance(node, Container):
                        stack.append(node)
                elif tag == 'OVERLAP':
                    structure.add_overlap(fields[1], fields[2])
                elif tag == 'ANALOG':
                    region = tuple(int(v) for v in fields[1].split(','))
                    if len(region) != 4:
                        raise ValueError("region needs four numbers")
                    structure.analog_parts.append(AnalogPart(region, None if fields[2] == '-' else fields[2]))
                elif tag == 'STATUS':
                    structure.status = StructureStatus(fields[1])
                else:
                    raise ValueError(f"unknown record {tag}")
            except (IndexError, ValueError) as e:
                raise CanonicalSyntaxError(number, str(e)) from None

        if root is None:
            raise CanonicalSyntaxError(len(lines), "no root container")
        structure.root = root
        return structure

    @staticmethod
    def _parse_node(tag: str, fields: List[str]):
        if tag == 'NODE':
            return Container(unquote(fields[0]), _parse_pairs(fields[1:]))
        types = fields[0]
        if not (types.startswith('{') and types.endswith('}')):
            raise ValueError(f"bad alternatives {types}")
        inner = types[1:-1]
        attrs = _parse_pairs(fields[1:])
        if inner == UNDEFINED:
            return SymbolOccurrence.unknown()
        return SymbolOccurrence.ambiguous(inner.split(','), attrs)


def _parse_pairs(fields: List[str]) -> Dict[str, str]:
    pairs = {}
    for item in fields:
        key, sep, value = item.partition('=')
        if not sep:
            raise ValueError(f"expected key=value, got {item}")
        pairs[unquote(key)] = unquote(value)
    return pairs
