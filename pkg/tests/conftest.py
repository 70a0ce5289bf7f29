"""
Shared fixtures: the shipped format registry, a fresh store per test and services bound to it.
"""

import sys
from pathlib import Path

import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from format_registry import FormatRegistry
from identity import IdentityService
from interpretation import InterpretationService
from interpretation.structure import Container, SymbolOccurrence, SymbolStructure
from ontology_core import OntologyStore
from projection import PhysicalProjectionMethod, ProjectionService
from projection.carrier import DigitalObject

FORMATS_PATH = project_root / "config" / "formats"
LEXICON_PATH = project_root / "config" / "lexicons" / "english_demo.txt"
GRAMMAR_PATH = project_root / "config" / "grammars" / "english_demo.grammar"
FIXTURES_PATH = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def registry():
    registry = FormatRegistry(str(FORMATS_PATH))
    assert not registry.load_errors, registry.load_errors
    return registry


@pytest.fixture
def store():
    return OntologyStore()


@pytest.fixture
def projection(registry):
    return ProjectionService({}, None, registry)


@pytest.fixture
def interpretation(registry):
    return InterpretationService({}, None, registry)


@pytest.fixture
def identity(registry):
    return IdentityService({}, None, registry)


@pytest.fixture
def plain_latin(registry):
    return registry.get_format("PLAIN_LATIN")


@pytest.fixture
def courier(registry):
    return registry.get_font("COURIER_DEMO")


@pytest.fixture
def scan():
    return PhysicalProjectionMethod.at(1)


def text_object(text: str, charset: str = "ascii", object_id: str = "doc") -> DigitalObject:
    return DigitalObject(object_id, text.encode(charset), f"text/plain;charset={charset}")


def html_object(markup: str, object_id: str = "page") -> DigitalObject:
    return DigitalObject(object_id, markup.encode("utf-8"), "text/html")


def word_structure(fmt, words, format_id=None) -> SymbolStructure:
    """
    One paragraph, one line, one word container per entry. Each entry is a list of
    characters or of character sets (several alternatives); None marks UNDEFINED.
    """
    structure = SymbolStructure(format_id=format_id or fmt.id)
    paragraph = structure.root.add(Container("paragraph"))
    line = paragraph.add(Container("line"))
    space = fmt.char_to_type(" ")
    for index, word in enumerate(words):
        if index:
            line.add(SymbolOccurrence.of(space))
        container = line.add(Container("word"))
        for position in word:
            if position is None:
                container.add(SymbolOccurrence.unknown())
            elif isinstance(position, str):
                container.add(SymbolOccurrence.of(fmt.char_to_type(position)))
            else:
                container.add(SymbolOccurrence.ambiguous(fmt.char_to_type(c) for c in position))
    return structure
