"""
Round trips between the digital and the physical side: random texts written and read
back, rendered digital objects against their decoded structures, text encodings, and
corrupted carriers recovered through the word list.
"""

import random
import string

import pytest

from disambiguation import Lexicon, Resolver
from identity import Verdict
from interpretation import StructureStatus
from projection import PhysicalProjectionMethod, Rect
from projection.carrier import DigitalObject

from tests.conftest import LEXICON_PATH, html_object, text_object

ALPHABET = string.ascii_letters + string.digits

TEXT_SAMPLES = [
    "A",
    "Hello world",
    "Hello world\n\nBye, now!",
    "one\ntwo three",
    "a\nb\nc\nd",
    "Mixed CASE and 0123456789",
    "Dots. Commas, colons: semicolons; done!",
    "Questions? (In brackets) and a-hyphen.",
    "first paragraph\n\nsecond paragraph\nwith two lines\n\nthird",
    "  leading and trailing spaces  ",
    "tab\tseparated\twords",
    "windows\r\nline\r\nends",
    "page one\fpage two",
    "page one\n\n\fnew paragraph on page two",
]

MARKUP_SAMPLES = [
    "<html><body><p>Hello world</p></body></html>",
    "<html><head><title>T</title></head><body><h2>Part two</h2><p>Text here.</p></body></html>",
    "<html><body>loose text<p>para</p>more</body></html>",
    "<html><body><pre>\n  two spaces\n x</pre></body></html>",
    "<html><body><h1>A</h1><h1>B</h1></body></html>",
    "<html><head><title>Hi</title></head><body><h3>x</h3><p>y <a href='u'>link</a> z</p></body></html>",
]


def random_text(rng: random.Random, max_occurrences: int = 40) -> str:
    """Paragraphs of lines of alphanumeric words, at most max_occurrences symbols including spaces."""
    budget = rng.randint(1, max_occurrences)
    paragraphs = []
    for _ in range(rng.randint(1, 3)):
        lines = []
        for _ in range(rng.randint(1, 3)):
            words = []
            for _ in range(rng.randint(1, 4)):
                size = rng.randint(1, 6)
                cost = size + (1 if words else 0)
                if cost > budget:
                    break
                budget -= cost
                words.append(''.join(rng.choice(ALPHABET) for _ in range(size)))
            if words:
                lines.append(' '.join(words))
        if lines:
            paragraphs.append('\n'.join(lines))
    return '\n\n'.join(paragraphs) or rng.choice(ALPHABET)


class TestRandomRoundTrips:

    @pytest.mark.parametrize("seed", range(100))
    def test_write_and_read_back(self, seed, projection, interpretation, identity, plain_latin, courier, scan):
        text = random_text(random.Random(seed))
        structure = interpretation.digital_interpret(text_object(text), plain_latin)
        assert len(structure.occurrences()) <= 40

        carrier = projection.write_carrier(structure, plain_latin, courier)
        recognized = interpretation.recognize(projection.physical_project(carrier, scan), plain_latin)
        assert identity.identical(structure, recognized).is_identical, text


class TestCrossPipelineAgreement:

    @pytest.mark.parametrize("text", TEXT_SAMPLES)
    def test_plain_text(self, text, projection, interpretation, identity, plain_latin, courier):
        obj = text_object(text)
        recognized = interpretation.recognize(projection.digital_project(obj, plain_latin, courier), plain_latin)
        decoded = interpretation.digital_interpret(obj, plain_latin)
        verdict = identity.identical(decoded, recognized)
        assert verdict.is_identical, verdict.diff

    @pytest.mark.parametrize("markup", MARKUP_SAMPLES)
    def test_markup(self, markup, registry, projection, interpretation, identity, courier):
        fmt = registry.get_format("HTML_DOC")
        obj = html_object(markup)
        recognized = interpretation.recognize(projection.digital_project(obj, fmt, courier), fmt)
        decoded = interpretation.digital_interpret(obj, fmt)
        verdict = identity.identical(decoded, recognized)
        assert verdict.is_identical, verdict.diff

    def test_page_break_overlap_survives(self, projection, interpretation, plain_latin, courier):
        obj = text_object("page one\fpage two")
        recognized = interpretation.recognize(projection.digital_project(obj, plain_latin, courier), plain_latin)
        assert recognized.overlaps == [("0.0", "1.0")]


class TestEncodings:

    @pytest.mark.parametrize("charset", ["ascii", "utf-8", "utf8", "latin1", "iso-8859-1"])
    def test_same_structure_in_every_charset(self, charset, interpretation, identity, plain_latin):
        text = "Hello, world!\n\nSecond (para)."
        reference = interpretation.digital_interpret(text_object(text), plain_latin)
        obj = DigitalObject("encoded", text.encode(charset), f"text/plain;charset={charset}")
        assert identity.canonicalize(interpretation.digital_interpret(obj, plain_latin)).digest == \
            identity.canonicalize(reference).digest
        assert identity.incorporates(obj, reference, plain_latin)


class TestCorruptionRecovery:

    TEXT = "hello world"

    @pytest.fixture(scope="class")
    def lexicon(self):
        return Lexicon.load(LEXICON_PATH)

    @pytest.mark.parametrize("position", range(10))
    def test_single_glyph_loss_is_recovered(self, position, lexicon, projection, interpretation,
                                            identity, plain_latin, courier, scan):
        original = interpretation.digital_interpret(text_object(self.TEXT), plain_latin)
        carrier = projection.write_carrier(original, plain_latin, courier)
        glyph = carrier.glyphs[position]
        corrupted = projection.corrupt(carrier, Rect(glyph.x, glyph.y, glyph.width, glyph.height))

        damaged = interpretation.recognize(projection.physical_project(corrupted, scan), plain_latin)
        assert damaged.status == StructureStatus.UNDEFINED
        assert sum(occ.undefined for occ in damaged.occurrences()) == 1
        assert identity.identical(original, damaged).value == Verdict.UNDEFINED

        resolved = Resolver(plain_latin).resolve_undefined(damaged, lexicon)
        assert resolved.status == StructureStatus.COMPLETE
        assert identity.identical(original, resolved).is_identical

        revealed = interpretation.recognize(
            projection.physical_project(corrupted, PhysicalProjectionMethod.at(1, True)), plain_latin)
        assert identity.identical(original, revealed).is_identical
