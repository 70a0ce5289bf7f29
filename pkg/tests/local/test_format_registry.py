"""
Tests for format-definition parsing, glyph operations and format validation.
"""

from fractions import Fraction

import numpy as np
import pytest

from format_registry import (
    FormatDefinitionParser,
    FormatRegistry,
    FormatSyntaxError,
    GlyphRasterizer,
    UnknownFont,
    UnknownFormat,
    UnresolvedReference,
    resample,
)
from format_registry.glyph_ops import apply_styles, style_variants, trim
from ontology_core import EntityKind, OntologyStore
from ontology_core.errors import DuplicateId

TINY_DOCUMENT = """
[typeset TINY]
symbol T_A = a
symbol T_B = b
symbol T_SPACE = U+0020
arrangement = T_SPACE

[font TINY_FONT]
typesets = TINY
em = 2
glyph T_A {
#.
##
}
glyph T_B {
##
.#
}

[rules TINY_RULES]
inter_glyph_gap_px = 1
inter_word_gap_min_px = 3
inter_line_gap_min_px = 2
margin_px = 1

[format TINY_FORMAT]
typesets = TINY
fonts = TINY_FONT
rules = TINY_RULES
meaningful = caseSensitive, wordSeparators
"""


class TestResample:

    def test_identity_at_scale_one(self):
        pixels = np.arange(12, dtype=float).reshape(3, 4) / 11
        assert np.array_equal(resample(pixels, 1), pixels)

    def test_upscale_repeats_pixels(self):
        pixels = np.array([[0.0, 1.0]])
        assert np.array_equal(resample(pixels, 2), [[0, 0, 1, 1], [0, 0, 1, 1]])

    def test_downscale_dimensions_round_up(self):
        assert resample(np.zeros((10, 9)), Fraction(4, 5)).shape == (8, 8)

    def test_downscale_picks_nearest_source(self):
        pixels = np.array([[0, 1, 2, 3, 4]], dtype=float)
        # target j samples (2j + 1) * 5 // 8
        assert resample(pixels, Fraction(4, 5))[0].tolist() == [0, 1, 3, 4]

    def test_rejects_nonpositive_scale(self):
        with pytest.raises(ValueError):
            resample(np.zeros((2, 2)), 0)


class TestGlyphStyles:

    def test_italic_shears_upper_rows(self):
        glyph = np.ones((4, 1), dtype=np.uint8)
        sheared = apply_styles(glyph, {'italic'})
        assert sheared.tolist() == [[0, 1], [1, 0], [1, 0], [1, 0]]

    def test_bold_widens_by_one(self):
        glyph = np.array([[1, 0, 1]], dtype=np.uint8)
        assert apply_styles(glyph, {'bold'}).tolist() == [[1, 1, 1, 1]]

    def test_underline_adds_rule(self):
        glyph = np.array([[1]], dtype=np.uint8)
        assert apply_styles(glyph, {'underline'}).tolist() == [[0, 1, 0], [0, 0, 0], [1, 1, 1]]

    def test_underline_sits_one_row_below_lowest_ink(self):
        glyph = np.array([[1], [0], [0]], dtype=np.uint8)
        underlined = apply_styles(glyph, {"underline"})
        assert underlined.shape == (5, 3)
        assert underlined[2].tolist() == [1, 1, 1]
        assert not underlined[3:].any()

    def test_unknown_style(self):
        with pytest.raises(ValueError):
            apply_styles(np.ones((1, 1), dtype=np.uint8), {'shadow'})

    def test_trim_blank(self):
        assert trim(np.zeros((3, 3), dtype=np.uint8)).shape == (0, 0)

    def test_style_variants_fewest_first(self, registry):
        variants = style_variants(registry.get_font("TIMES_DEMO"))
        assert variants[0] == frozenset()
        assert variants[-1] == frozenset({'italic', 'underline'})
        assert len(variants) == 4


class TestDefinitionParser:

    def test_parse_tiny_document(self):
        document = FormatDefinitionParser().parse(TINY_DOCUMENT)
        fmt = document.formats["TINY_FORMAT"]
        assert fmt.is_discrete
        assert fmt.char_to_type("a") == "T_A"
        assert fmt.char_to_type("z") is None
        assert fmt.arrangement_types() == frozenset({"T_SPACE"})
        assert fmt.font("TINY_FONT").glyph("T_B").to_strings() == ["##", ".#"]

    def test_unknown_key(self):
        with pytest.raises(FormatSyntaxError) as excinfo:
            FormatDefinitionParser().parse("[typeset X]\ncolour = red\nsymbol A = a\n")
        assert excinfo.value.line == 2

    def test_glyph_row_count_must_match_em(self):
        text = TINY_DOCUMENT.replace("glyph T_B {\n##\n.#\n}", "glyph T_B {\n##\n}")
        with pytest.raises(FormatSyntaxError):
            FormatDefinitionParser().parse(text)

    def test_missing_glyph(self):
        text = TINY_DOCUMENT.replace("glyph T_B {\n##\n.#\n}", "")
        with pytest.raises(FormatSyntaxError):
            FormatDefinitionParser().parse(text)

    def test_unresolved_font(self):
        text = TINY_DOCUMENT.replace("fonts = TINY_FONT", "fonts = NO_SUCH_FONT")
        with pytest.raises(UnresolvedReference) as excinfo:
            FormatDefinitionParser().parse(text)
        assert excinfo.value.name == "NO_SUCH_FONT"

    def test_unclosed_glyph(self):
        with pytest.raises(FormatSyntaxError):
            FormatDefinitionParser().parse("[typeset X]\nsymbol A = a\n[font F]\ntypesets = X\nem = 1\nglyph A {\n#\n")

    def test_serialize_is_stable(self):
        parser = FormatDefinitionParser()
        fmt = parser.parse(TINY_DOCUMENT).formats["TINY_FORMAT"]
        text = parser.serialize(fmt)
        reparsed = FormatDefinitionParser().parse(text).formats["TINY_FORMAT"]
        assert FormatDefinitionParser().serialize(reparsed) == text
        assert reparsed.alphabet() == fmt.alphabet()


class TestRegistry:

    def test_shipped_formats_load(self, registry):
        for format_id in ("PLAIN_LATIN", "FONT_AWARE_LATIN", "BOUSTROPHEDON_LATIN", "LATIN_EPIGRAPHIC",
                          "HTML_DOC", "HTML_LINKED_DOC", "RESOLUTION_DEMO"):
            assert format_id in registry.list_formats()

    def test_unknown_lookups(self, registry):
        with pytest.raises(UnknownFormat):
            registry.get_format("NOPE")
        with pytest.raises(UnknownFont):
            registry.get_font("NOPE")

    def test_derived_font_shares_glyphs(self, registry):
        courier = registry.get_font("COURIER_DEMO")
        times = registry.get_font("TIMES_DEMO")
        assert times.derived_from == "COURIER_DEMO"
        assert times.glyphs is courier.glyphs
        assert (times.scale_x, times.scale_y) == (3, 3)

    def test_epigraphic_merges_u_and_v(self, registry):
        fmt = registry.get_format("LATIN_EPIGRAPHIC")
        assert fmt.char_to_type("U") == "UV"
        assert fmt.char_to_type("V") == "UV"
        assert fmt.char_to_type("u") == "UV"
        assert "LATIN_U_UPPER" not in fmt.alphabet()

    def test_case_folding_when_case_not_meaningful(self, registry):
        fmt = registry.get_format("LATIN_EPIGRAPHIC")
        assert fmt.char_to_type("a") == fmt.char_to_type("A")

    def test_document_is_all_or_nothing(self, tmp_path):
        registry = FormatRegistry(None)
        registry.register_document(TINY_DOCUMENT)
        with pytest.raises(DuplicateId):
            registry.register_document(TINY_DOCUMENT)
        assert registry.list_formats() == ["TINY_FORMAT"]

    def test_parse_format_definition_registers(self):
        registry = FormatRegistry(None)
        fmt = registry.parse_format_definition(TINY_DOCUMENT)
        assert fmt.id == "TINY_FORMAT"
        assert registry.get_format("TINY_FORMAT") is fmt
        assert registry.get_font("TINY_FONT").glyph("T_A").to_strings() == ["#.", "##"]

    def test_later_documents_reference_registered_ids(self):
        later = "[format TINY_WORDS]\ntypesets = TINY\nfonts = TINY_FONT\nrules = TINY_RULES\nmeaningful = wordSeparators\n"
        registry = FormatRegistry(None)
        with pytest.raises(UnresolvedReference):
            registry.parse_format_definition(later)
        registry.parse_format_definition(TINY_DOCUMENT)
        assert registry.parse_format_definition(later).fonts == registry.get_format("TINY_FORMAT").fonts

    def test_document_without_format(self):
        with pytest.raises(FormatSyntaxError):
            FormatRegistry(None).parse_format_definition("[typeset X]\nsymbol A = a\n")

    def test_missing_directory_is_reported(self, tmp_path):
        registry = FormatRegistry(str(tmp_path / "absent"))
        assert registry.list_formats() == []
        assert registry.load_errors

    def test_broken_file_is_reported_and_others_load(self, tmp_path):
        (tmp_path / "10_good.fmt").write_text(TINY_DOCUMENT, encoding="utf-8")
        (tmp_path / "20_bad.fmt").write_text("[format BROKEN]\nfonts = MISSING\n", encoding="utf-8")
        registry = FormatRegistry(str(tmp_path))
        assert registry.list_formats() == ["TINY_FORMAT"]
        assert len(registry.load_errors) == 1

    def test_register_entities(self, registry):
        store = OntologyStore()
        entities = registry.register_entities(store, registry.get_format("PLAIN_LATIN"))
        assert store.get(entities.format).kind == EntityKind.INFORMATION_FORMAT
        assert set(entities.fonts) == {"COURIER_DEMO", "CALIBRI_DEMO", "TIMES_DEMO"}
        assert store.get(entities.rules).kind == EntityKind.ARRANGEMENT_RULE_SET
        # idempotent
        registry.register_entities(store, registry.get_format("PLAIN_LATIN"))


class TestValidateFormat:

    def test_plain_latin_has_no_native_collisions(self, registry):
        report = registry.validate_format("PLAIN_LATIN")
        assert report.is_valid
        assert report.collisions == []

    @pytest.mark.parametrize("resolution", [1, 2, 3, 4])
    def test_one_and_ell_collide_below_five(self, registry, resolution):
        report = registry.validate_format("RESOLUTION_DEMO", at_resolution=resolution)
        assert report.collisions == [("DIGIT_1", "LATIN_L_LOWER")]
        assert report.collides("LATIN_L_LOWER", "DIGIT_1")

    @pytest.mark.parametrize("resolution", [5, 6, 10])
    def test_one_and_ell_distinct_from_five(self, registry, resolution):
        assert registry.validate_format("RESOLUTION_DEMO", at_resolution=resolution).is_valid

    def test_validation_is_deterministic(self, registry):
        first = registry.validate_format("RESOLUTION_DEMO", at_resolution=3).to_dict()
        assert registry.validate_format("RESOLUTION_DEMO", at_resolution=3).to_dict() == first

    def test_rejects_bad_resolution(self, registry):
        with pytest.raises(ValueError):
            registry.validate_format("RESOLUTION_DEMO", at_resolution=0)

    def test_line_height_is_tallest_styled_glyph(self, registry):
        # TIMES_DEMO: 9 px em magnified 3x, plus two underline rows before magnification
        assert GlyphRasterizer().line_height(registry.get_format("PLAIN_LATIN")) == (9 + 2) * 3
