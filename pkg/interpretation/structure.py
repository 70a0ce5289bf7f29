"""
Symbol structures: nested containers of symbol occurrences, their overlaps and
analog placeholders, plus the arrangement produced by segmentation.
"""

import copy
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

UNDEFINED = "UNDEFINED"


class StructureStatus(str, Enum):
    COMPLETE = "Complete"
    FRAGMENT = "Fragment"
    UNDEFINED = "Undefined"


@dataclass
class SymbolOccurrence:
    """
    One positioned symbol. `alternatives` holds one type id, or several for systematic
    ambiguity; an UNDEFINED occurrence has no alternatives.
    """

    alternatives: FrozenSet[str] = frozenset()
    style_attrs: Dict[str, str] = field(default_factory=dict)
    undefined: bool = False

    def __post_init__(self):
        self.alternatives = frozenset(self.alternatives)
        if self.undefined and self.alternatives:
            raise ValueError("An UNDEFINED occurrence carries no alternatives")
        if not self.undefined and not self.alternatives:
            raise ValueError("A defined occurrence needs at least one alternative")
        if UNDEFINED in self.alternatives:
            raise ValueError("UNDEFINED is a marker, not a symbol type")

    @classmethod
    def of(cls, type_id: str, style_attrs: Dict[str, str] = None) -> "SymbolOccurrence":
        return cls(frozenset([type_id]), dict(style_attrs or {}))

    @classmethod
    def ambiguous(cls, type_ids: Iterable[str], style_attrs: Dict[str, str] = None) -> "SymbolOccurrence":
        return cls(frozenset(type_ids), dict(style_attrs or {}))

    @classmethod
    def unknown(cls) -> "SymbolOccurrence":
        return cls(frozenset(), {}, undefined=True)

    @property
    def is_ambiguous(self) -> bool:
        return len(self.alternatives) > 1

    @property
    def type_id(self) -> Optional[str]:
        """The single type of an unambiguous occurrence, else None."""
        if len(self.alternatives) == 1:
            return next(iter(self.alternatives))
        return None


@dataclass
class Container:
    """Symbol container; children are in reading order."""

    kind: str
    attrs: Dict[str, str] = field(default_factory=dict)
    children: List[Union["Container", SymbolOccurrence]] = field(default_factory=list)

    def add(self, child: Union["Container", SymbolOccurrence]) -> Union["Container", SymbolOccurrence]:
        self.children.append(child)
        return child

    def containers(self) -> List["Container"]:
        return [child for child in self.children if isinstance(child, Container)]

    def occurrences(self) -> Iterator[SymbolOccurrence]:
        """All occurrences below this container, depth first."""
        for child in self.children:
            if isinstance(child, Container):
                yield from child.occurrences()
            else:
                yield child


Node = Union[Container, SymbolOccurrence]


@dataclass
class AnalogPart:
    """Image area that is not made of symbols. Only its region and digest are kept."""

    region: Tuple[int, int, int, int]
    digest: Optional[str] = None


@dataclass
class SymbolStructure:
    """
    Encoding-independent structure of a discrete information object.

    `overlaps` holds sorted pairs of dotted child-index paths of containers that overlap
    (a paragraph split by a page break). `provenance` records resolution steps and is not
    part of the structure's identity.
    """

    root: Container = field(default_factory=lambda: Container('document'))
    overlaps: List[Tuple[str, str]] = field(default_factory=list)
    analog_parts: List[AnalogPart] = field(default_factory=list)
    status: StructureStatus = StructureStatus.COMPLETE
    format_id: Optional[str] = None
    provenance: List[Dict[str, object]] = field(default_factory=list)

    def add_overlap(self, path_a: str, path_b: str):
        pair = tuple(sorted((path_a, path_b)))
        if pair not in self.overlaps:
            self.overlaps.append(pair)

    def walk(self) -> Iterator[Tuple[int, str, Node]]:
        """Depth-first pre-order (depth, path, node); the root has depth 0 and path ''."""
        stack: List[Tuple[int, str, Node]] = [(0, '', self.root)]
        while stack:
            depth, path, node = stack.pop()
            yield depth, path, node
            if isinstance(node, Container):
                for index in range(len(node.children) - 1, -1, -1):
                    child_path = f"{path}.{index}" if path else str(index)
                    stack.append((depth + 1, child_path, node.children[index]))

    def occurrences(self) -> List[SymbolOccurrence]:
        return list(self.root.occurrences())

    def has_undefined(self) -> bool:
        return any(occurrence.undefined for occurrence in self.root.occurrences())

    def refresh_status(self) -> StructureStatus:
        """Undefined iff an UNDEFINED occurrence is reachable; otherwise keep Fragment or Complete."""
        if self.has_undefined():
            self.status = StructureStatus.UNDEFINED
        elif self.status == StructureStatus.UNDEFINED:
            self.status = StructureStatus.COMPLETE
        return self.status

    def node_at(self, path: str) -> Node:
        node: Node = self.root
        if path:
            for index in path.split('.'):
                node = node.children[int(index)]
        return node

    def copy(self) -> "SymbolStructure":
        return copy.deepcopy(self)


class GapClass(str, Enum):
    """Relation of a glyph box (or line) to its predecessor."""

    INTRA_WORD = "intra-word"
    INTER_WORD = "inter-word"
    LINE_BREAK = "line-break"
    PARAGRAPH_BREAK = "paragraph-break"
    PAGE_BREAK = "page-break"
    PAGE_PARAGRAPH_BREAK = "page-paragraph-break"


@dataclass
class GlyphBox:
    """Ink box in impression pixels; `gray` marks boxes holding intermediate intensities."""

    x: int
    y: int
    width: int
    height: int
    gray: bool = False


@dataclass
class ArrangedLine:
    """
    One text line of an arrangement. gap_classes[0] is the break before the line;
    gap_classes[i] relates boxes[i] to boxes[i-1]. `spaces[i]` counts word gaps before box i.
    `grid_row` is the row on the layout grid, `left_px` the first ink column in carrier pixels.
    """

    top: int
    bottom: int
    boxes: List[GlyphBox] = field(default_factory=list)
    gap_classes: List[GapClass] = field(default_factory=list)
    spaces: List[int] = field(default_factory=list)
    leading_spaces: int = 0
    reversed: bool = False
    grid_row: int = 0
    left_px: int = 0

    @property
    def baseline_y(self) -> int:
        return self.bottom


@dataclass
class SymbolArrangement:
    """Output of segmentation: text lines in reading order plus regions left for analog parts."""

    lines: List[ArrangedLine] = field(default_factory=list)
    scale: object = 1
    line_height_px: Optional[float] = None
