"""
End-to-end tests over styled sheets, the markup sample and the resolution demo font:
write or render, project, recognize and compare canonical forms.
"""

import itertools
from fractions import Fraction

import pytest

from cli.main import EXIT_OK, run
from identity import Canonicalizer, Verdict
from interpretation import StructureStatus, SymbolStructure
from projection import PhysicalProjectionMethod

from tests.conftest import FIXTURES_PATH, FORMATS_PATH, html_object, text_object, word_structure

SAMPLE_PAGE = FIXTURES_PATH / "html" / "title_link_header.html"
GOLDEN = FIXTURES_PATH / "golden"


def golden(name: str) -> bytes:
    return (GOLDEN / name).read_bytes()


@pytest.fixture
def sheets(registry, projection):
    """The word ABC on three carriers: plain COURIER, plain CALIBRI, TIMES with underlined A and italic B."""
    fmt = registry.get_format("FONT_AWARE_LATIN")

    courier = word_structure(fmt, ["ABC"])
    calibri = word_structure(fmt, ["ABC"])
    times = word_structure(fmt, ["ABC"])
    first, second, _ = times.occurrences()
    first.style_attrs["underline"] = "true"
    second.style_attrs["italic"] = "true"

    return {
        "courier": projection.write_carrier(courier, fmt, registry.get_font("COURIER_DEMO")),
        "calibri": projection.write_carrier(calibri, fmt, registry.get_font("CALIBRI_DEMO")),
        "times": projection.write_carrier(times, fmt, registry.get_font("TIMES_DEMO")),
    }


def read_sheet(projection, interpretation, carrier, fmt):
    impression = projection.physical_project(carrier, PhysicalProjectionMethod.at(1))
    return interpretation.recognize(impression, fmt)


class TestThreeSheets:

    def test_same_text_under_plain_format(self, sheets, registry, projection, interpretation, identity):
        fmt = registry.get_format("PLAIN_LATIN")
        structures = [read_sheet(projection, interpretation, carrier, fmt) for carrier in sheets.values()]
        digests = {identity.canonicalize(structure).digest for structure in structures}
        assert len(digests) == 1
        assert all(structure.status == StructureStatus.COMPLETE for structure in structures)
        assert all(not occurrence.style_attrs for occurrence in structures[2].occurrences())

    def test_pairwise_different_under_font_aware_format(self, sheets, registry, projection,
                                                        interpretation, identity):
        fmt = registry.get_format("FONT_AWARE_LATIN")
        read = {name: read_sheet(projection, interpretation, carrier, fmt) for name, carrier in sheets.items()}
        digests = {name: identity.canonicalize(structure).digest for name, structure in read.items()}
        assert len(set(digests.values())) == 3

        verdict = identity.identical(read["courier"], read["calibri"])
        assert verdict.value == Verdict.DIFFERENT
        assert [path for path, _, _ in verdict.diff] == ["0.0.0.0", "0.0.0.1", "0.0.0.2"]
        assert all("fontFamily=CALIBRI_DEMO" in right for _, _, right in verdict.diff)

        verdict = identity.identical(read["courier"], read["times"])
        changed = dict((path, right) for path, _, right in verdict.diff)
        assert changed["0.0.0.0"] == "OCC 4 {LATIN_A_UPPER} fontFamily=TIMES_DEMO underline=true"
        assert changed["0.0.0.1"] == "OCC 4 {LATIN_B_UPPER} fontFamily=TIMES_DEMO italic=true"
        assert changed["0.0.0.2"] == "OCC 4 {LATIN_C_UPPER} fontFamily=TIMES_DEMO"

        verdict = identity.identical(read["calibri"], read["times"])
        text = " ".join(right for _, _, right in verdict.diff)
        assert "underline=true" in text and "italic=true" in text


TIMES_STYLE_SETS = [(), ("italic",), ("underline",), ("italic", "underline")]


class TestStyleCombinations:
    """Every pairing of TIMES_DEMO styles on neighbouring glyphs reads back as written."""

    @pytest.mark.parametrize("left,right", list(itertools.product(TIMES_STYLE_SETS, repeat=2)))
    def test_neighbouring_styles_round_trip(self, registry, projection, interpretation, identity, left, right):
        fmt = registry.get_format("FONT_AWARE_LATIN")
        written = word_structure(fmt, ["AB", "1C"])
        space = fmt.char_to_type(" ")
        glyphs = [occurrence for occurrence in written.occurrences() if occurrence.type_id != space]
        for position, occurrence in enumerate(glyphs):
            for flag in (left if position % 2 == 0 else right):
                occurrence.style_attrs[flag] = "true"
        carrier = projection.write_carrier(written, fmt, registry.get_font("TIMES_DEMO"))

        for occurrence in glyphs:
            occurrence.style_attrs["fontFamily"] = "TIMES_DEMO"
        read = read_sheet(projection, interpretation, carrier, fmt)
        assert read.status == StructureStatus.COMPLETE
        assert identity.identical(written, read).is_identical

        plain = registry.get_format("PLAIN_LATIN")
        assert identity.identical(read_sheet(projection, interpretation, carrier, plain),
                                  word_structure(plain, ["AB", "1C"])).is_identical


class TestMarkupSample:

    @pytest.mark.parametrize("format_id,golden_name", [
        ("HTML_DOC", "title_link_header.canon"),
        ("HTML_LINKED_DOC", "title_link_header_linked.canon"),
    ])
    def test_canonical_bytes_match_golden(self, registry, interpretation, format_id, golden_name):
        page = html_object(SAMPLE_PAGE.read_text(encoding="utf-8"))
        structure = interpretation.digital_interpret(page, registry.get_format(format_id))
        assert Canonicalizer().canonicalize(structure).data == golden(golden_name)

    def test_rendered_page_reads_back(self, registry, projection, interpretation, courier):
        fmt = registry.get_format("HTML_DOC")
        page = html_object(SAMPLE_PAGE.read_text(encoding="utf-8"))
        recognized = interpretation.recognize(projection.digital_project(page, fmt, courier), fmt)
        assert Canonicalizer().canonicalize(recognized).data == golden("title_link_header.canon")

    def test_golden_parses_back_to_the_same_bytes(self):
        canonicalizer = Canonicalizer()
        for name in ("title_link_header.canon", "title_link_header_linked.canon", "abc.canon", "empty.canon"):
            parsed = canonicalizer.parse(golden(name))
            assert canonicalizer.canonicalize(parsed).data == golden(name)


class TestCommandLineGoldens:

    def test_extract_writes_golden(self, tmp_path):
        out = tmp_path / "abc.canon"
        argv = ["--config", str(tmp_path / "absent.json"), "--formats-path", str(FORMATS_PATH),
                "extract", "--format", "PLAIN_LATIN", "--in", str(FIXTURES_PATH / "text" / "abc.txt"),
                "--out", str(out)]
        assert run(argv) == EXIT_OK
        assert out.read_bytes() == golden("abc.canon")

    def test_empty_structure_golden(self):
        assert Canonicalizer().canonicalize(SymbolStructure()).data == golden("empty.canon")


class TestResolutionThreshold:

    def test_collisions_are_monotone_in_resolution(self, registry):
        colliding = [not registry.validate_format("RESOLUTION_DEMO", at_resolution=r).is_valid
                     for r in range(1, 13)]
        assert colliding == [True] * 4 + [False] * 8

    def test_sub_threshold_scan_is_ambiguous(self, registry, projection, interpretation):
        fmt = registry.get_format("RESOLUTION_DEMO")
        font = registry.get_font("ONE_ELL_DEMO")
        impression = projection.digital_project(text_object("1l"), fmt, font, scale=Fraction(4, 5))
        structure = interpretation.recognize(impression, fmt)

        symbols = [occ for occ in structure.occurrences() if occ.type_id != "SPACE"]
        assert len(symbols) == 2
        for occurrence in symbols:
            assert set(occurrence.alternatives) == {"DIGIT_1", "LATIN_L_LOWER"}
        assert structure.status == StructureStatus.COMPLETE

    def test_native_scan_is_exact(self, registry, projection, interpretation, identity):
        fmt = registry.get_format("RESOLUTION_DEMO")
        font = registry.get_font("ONE_ELL_DEMO")
        obj = text_object("1l l1")
        recognized = interpretation.recognize(projection.digital_project(obj, fmt, font), fmt)
        assert identity.identical(recognized, interpretation.digital_interpret(obj, fmt)).is_identical
