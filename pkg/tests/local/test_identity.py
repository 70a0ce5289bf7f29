"""
Tests for canonical forms, identity verdicts, incorporation and migration chains.
"""

import hashlib

import pandas as pd
import pytest

from identity import (
    CanonicalSyntaxError,
    Canonicalizer,
    ChainStep,
    ChainStepError,
    FormatMismatch,
    Verdict,
)
from interpretation.structure import Container, SymbolOccurrence, SymbolStructure
from projection import PhysicalProjectionMethod, Rect
from projection.carrier import DigitalObject

from tests.conftest import text_object, word_structure

TINY_CANON = (
    "ICO-CANON 1\n"
    "# format PLAIN_LATIN\n"
    "NODE 0 document\n"
    "NODE 1 paragraph\n"
    "NODE 2 line\n"
    "NODE 3 word\n"
    "OCC 4 {LATIN_A_LOWER}\n"
    "STATUS Complete\n"
)


@pytest.fixture
def canonicalizer():
    return Canonicalizer()


class TestCanonicalForm:

    def test_tiny_structure(self, canonicalizer, plain_latin):
        form = canonicalizer.canonicalize(word_structure(plain_latin, [["a"]]))
        assert form.text == TINY_CANON
        assert form.digest == hashlib.sha256(TINY_CANON.encode("utf-8")).hexdigest()

    def test_empty_structure(self, canonicalizer):
        form = canonicalizer.canonicalize(SymbolStructure())
        assert form.text == "ICO-CANON 1\nNODE 0 document\nSTATUS Complete\n"

    def test_alternatives_sorted_and_undefined(self, canonicalizer, plain_latin):
        structure = word_structure(plain_latin, [[("l", "1"), None]])
        structure.refresh_status()
        lines = canonicalizer.canonicalize(structure).text.split("\n")
        assert "OCC 4 {DIGIT_1,LATIN_L_LOWER}" in lines
        assert "OCC 4 {UNDEFINED}" in lines
        assert "STATUS Undefined" in lines

    def test_attributes_escaped_and_sorted(self, canonicalizer):
        structure = SymbolStructure(root=Container("html"))
        structure.root.add(Container("a", {"href": "http://x.org/a b", "class": "z"}))
        structure.root.children[0].add(SymbolOccurrence.of("LATIN_A_LOWER", {"italic": "true", "bold": "true"}))
        lines = canonicalizer.canonicalize(structure).text.split("\n")
        assert lines[2] == "NODE 1 a class=z href=http://x.org/a%20b"
        assert lines[3] == "OCC 2 {LATIN_A_LOWER} bold=true italic=true"

    def test_overlaps_and_analog_parts(self, canonicalizer, interpretation, plain_latin):
        from interpretation.structure import AnalogPart

        structure = interpretation.digital_interpret(text_object("A\fB"), plain_latin)
        structure.analog_parts.append(AnalogPart((1, 2, 30, 40), None))
        text = canonicalizer.canonicalize(structure).text
        assert "OVERLAP 0.0 1.0\nANALOG 1,2,30,40 -\nSTATUS Complete\n" in text

    def test_parse_restores_the_structure(self, canonicalizer, interpretation, plain_latin):
        structure = interpretation.digital_interpret(text_object("Hi there\fyou"), plain_latin)
        form = canonicalizer.canonicalize(structure)
        parsed = canonicalizer.parse(form.data)
        assert parsed.root == structure.root
        assert parsed.format_id == "PLAIN_LATIN"
        assert canonicalizer.canonicalize(parsed).data == form.data

    def test_provenance_is_not_serialized(self, canonicalizer, plain_latin):
        plain = word_structure(plain_latin, [["a"]])
        annotated = word_structure(plain_latin, [["a"]])
        annotated.provenance.append({"step": "resolve"})
        assert canonicalizer.canonicalize(plain).digest == canonicalizer.canonicalize(annotated).digest

    @pytest.mark.parametrize("data,line", [
        (b"ICO-CANON 2\n", 1),
        (b"ICO-CANON 1\nNODE 0 document\nOCC 3 {A}\n", 3),
        (b"ICO-CANON 1\nNODE 0 document\nOCC 1 A\n", 3),
        (b"ICO-CANON 1\nNODE 0 document\nBLOB 1\n", 3),
        (b"ICO-CANON 1\nSTATUS Complete\n", 2),
    ])
    def test_syntax_errors(self, canonicalizer, data, line):
        with pytest.raises(CanonicalSyntaxError) as excinfo:
            canonicalizer.parse(data)
        assert excinfo.value.line == line


class TestIdentityVerdicts:

    def test_identical(self, identity, plain_latin):
        a = word_structure(plain_latin, [["a", "b"], ["c"]])
        b = word_structure(plain_latin, [["a", "b"], ["c"]])
        assert identity.identical(a, a).value == Verdict.IDENTICAL
        assert identity.identical(a, b).is_identical
        assert identity.identical(b, a).is_identical

    def test_different_reports_paths(self, identity, plain_latin):
        verdict = identity.identical(word_structure(plain_latin, [["a"]]), word_structure(plain_latin, [["b"]]))
        assert verdict.value == Verdict.DIFFERENT
        assert verdict.diff == [("0.0.0.0", "OCC 4 {LATIN_A_LOWER}", "OCC 4 {LATIN_B_LOWER}")]

    def test_missing_node(self, identity, plain_latin):
        verdict = identity.identical(word_structure(plain_latin, [["a"]]), word_structure(plain_latin, [["a", "b"]]))
        assert verdict.diff == [("0.0.0.1", None, "OCC 4 {LATIN_B_LOWER}")]

    def test_case_matters_only_when_meaningful(self, identity, interpretation, plain_latin, registry):
        upper, lower = text_object("VOX"), text_object("vox")
        assert not identity.identical(interpretation.digital_interpret(upper, plain_latin),
                                      interpretation.digital_interpret(lower, plain_latin)).is_identical
        epigraphic = registry.get_format("LATIN_EPIGRAPHIC")
        assert identity.identical(interpretation.digital_interpret(upper, epigraphic),
                                  interpretation.digital_interpret(text_object("uox"), epigraphic)).is_identical

    def test_undefined(self, identity, plain_latin):
        undefined = word_structure(plain_latin, [["a", None]])
        undefined.refresh_status()
        verdict = identity.identical(word_structure(plain_latin, [["a", "b"]]), undefined)
        assert verdict.value == Verdict.UNDEFINED
        assert identity.identical(undefined, undefined).value == Verdict.UNDEFINED

    def test_format_mismatch(self, identity, plain_latin):
        with pytest.raises(FormatMismatch):
            identity.identical(word_structure(plain_latin, [["a"]]),
                               word_structure(plain_latin, [["a"]], format_id="FONT_AWARE_LATIN"))

    def test_incorporates(self, identity, plain_latin):
        structure = word_structure(plain_latin, [["H", "i"]])
        assert identity.incorporates(text_object("Hi"), structure, plain_latin)
        assert identity.incorporates(text_object("Hi", "utf8"), structure, plain_latin)
        assert not identity.incorporates(text_object("hi"), structure, plain_latin)

    def test_structure_without_format_id(self, identity, plain_latin):
        formatless = word_structure(plain_latin, [["A", "B", "C"]])
        formatless.format_id = None
        assert identity.identical(formatless, word_structure(plain_latin, [["A", "B", "C"]])).is_identical
        assert identity.incorporates(text_object("ABC"), formatless, plain_latin)

        verdict = identity.identical(formatless, word_structure(plain_latin, [["A", "B", "D"]]))
        assert verdict.value == Verdict.DIFFERENT
        assert verdict.diff == [("0.0.0.2", "OCC 4 {LATIN_C_UPPER}", "OCC 4 {LATIN_D_UPPER}")]

    def test_different_always_names_a_difference(self, identity, plain_latin):
        a = word_structure(plain_latin, [["a"]])
        b = word_structure(plain_latin, [["a"]])
        b.overlaps.append(("0.0", "0.0.0"))
        verdict = identity.identical(a, b)
        assert verdict.value == Verdict.DIFFERENT
        assert [entry[0] for entry in verdict.diff] == ["overlaps"]


class TestMigrationChains:

    def chain(self, projection, interpretation, plain_latin, courier, text="Hello world"):
        obj = text_object(text)
        carrier = projection.write_carrier(interpretation.digital_interpret(obj, plain_latin), plain_latin, courier)
        impression = projection.physical_project(carrier, PhysicalProjectionMethod.at(1))
        return obj, carrier, impression

    def test_faithful_chain(self, identity, projection, interpretation, plain_latin, courier):
        chain = self.chain(projection, interpretation, plain_latin, courier)
        report = identity.verify_migration(chain, plain_latin)
        assert report.verdict.value == Verdict.IDENTICAL
        assert report.first_divergence is None
        assert report.summary() == "Identical"
        assert len({digest for _, digest in report.chain}) == 1
        assert report.statuses == ["Complete"] * 3

    def test_divergent_step(self, identity, projection, interpretation, plain_latin, courier):
        obj, carrier, _ = self.chain(projection, interpretation, plain_latin, courier)
        retyped = text_object("Hello World", object_id="retyped")
        report = identity.verify_migration([obj, ChainStep(carrier), retyped], plain_latin)
        assert report.verdict.value == Verdict.DIFFERENT
        assert report.first_divergence == 2
        assert report.summary() == "Different at step 2"
        assert report.chain[2][0] == "retyped"

    def test_corrupted_carrier_is_undefined(self, identity, projection, interpretation, plain_latin, courier):
        obj, carrier, _ = self.chain(projection, interpretation, plain_latin, courier)
        corrupted = projection.corrupt(carrier, Rect(4, 4, 5, 9))
        report = identity.verify_migration([obj, corrupted], plain_latin)
        assert report.verdict.value == Verdict.UNDEFINED
        assert report.first_divergence == 1
        assert report.statuses == ["Complete", "Undefined"]

        revealed = ChainStep(corrupted, PhysicalProjectionMethod.at(1, True), label="infrared")
        assert identity.verify_migration([obj, revealed], plain_latin).verdict.is_identical

    def test_failing_step(self, identity, plain_latin):
        with pytest.raises(ChainStepError) as excinfo:
            identity.verify_migration([text_object("a"), DigitalObject("img", b"\x89PNG", "image/png")], plain_latin)
        assert excinfo.value.index == 1

    def test_report_csv(self, tmp_path, identity, projection, interpretation, plain_latin, courier):
        report = identity.verify_migration(self.chain(projection, interpretation, plain_latin, courier), plain_latin)
        frame = pd.read_csv(report.to_csv(tmp_path / "chain.csv"))
        assert list(frame.columns) == ["step", "artifact", "digest", "status"]
        assert list(frame["step"]) == [0, 1, 2]
        assert list(frame["artifact"])[0] == "doc"
