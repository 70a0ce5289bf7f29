"""
Tests for word lists, grammar rules, the resolution cascade and multi-carrier reconciliation.
"""

import pytest

from disambiguation import GrammarRules, Lexicon, LexiconError, MissingWordStructure, Resolver, reconcile
from identity import FormatMismatch
from interpretation.structure import Container, StructureStatus, SymbolOccurrence, SymbolStructure

from tests.conftest import GRAMMAR_PATH, LEXICON_PATH, word_structure


def spell(structure, fmt):
    return ''.join(
        fmt.type_to_char(occ.type_id) if occ.type_id else ('?' if occ.undefined else '*')
        for occ in structure.occurrences()
    )


@pytest.fixture(scope="module")
def lexicon():
    return Lexicon.load(LEXICON_PATH)


@pytest.fixture(scope="module")
def grammar(lexicon):
    return GrammarRules.load(GRAMMAR_PATH, lexicon)


@pytest.fixture
def resolver(plain_latin):
    return Resolver(plain_latin)


def yellow_cab(fmt):
    return word_structure(fmt, [
        "This", "is", "a",
        ["y", "e", ("1", "l"), "l", "o", "w"],
        ["c", "a", ("h", "n", "b")],
    ])


class TestLexicon:

    def test_load(self, lexicon):
        assert lexicon.id == "english_demo"
        assert lexicon.contains("cab")
        assert lexicon.contains("CAB")
        assert not lexicon.contains("CAB", case_sensitive=True)
        assert list(lexicon.candidates(3))[:3] == ["cab", "can", "car"]

    def test_whitespace_token(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("ok\ntwo words\n", encoding="utf-8")
        with pytest.raises(LexiconError) as excinfo:
            Lexicon.load(path)
        assert excinfo.value.line == 2

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("# nothing\n", encoding="utf-8")
        with pytest.raises(LexiconError):
            Lexicon.load(path)


class TestGrammarRules:

    def test_load(self, grammar):
        assert grammar.tags("This") == frozenset({"PRON", "DET"})
        assert grammar.tags("zebra") is None
        assert grammar.allows(frozenset({"ADJ"}), frozenset({"NOUN"}))
        assert not grammar.allows(frozenset({"ADJ"}), frozenset({"MODAL"}))
        assert grammar.allows(None, frozenset({"MODAL"}))

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "bad.grammar"
        path.write_text("pos cab NOUN\nforbid NOUN NOUN\n", encoding="utf-8")
        with pytest.raises(LexiconError) as excinfo:
            GrammarRules.load(path)
        assert excinfo.value.line == 2

    def test_tokens_must_be_in_lexicon(self, tmp_path, lexicon):
        path = tmp_path / "extra.grammar"
        path.write_text("pos zebra NOUN\n", encoding="utf-8")
        with pytest.raises(ValueError):
            GrammarRules.load(path, lexicon)


class TestResolve:

    def test_word_then_grammar(self, resolver, plain_latin, lexicon, grammar):
        resolved = resolver.resolve(yellow_cab(plain_latin), lexicon, grammar)
        assert spell(resolved, plain_latin) == "This is a yellow cab"
        levels = [entry.get("level") for entry in resolved.provenance]
        assert "grammar" in levels

    def test_word_level_narrows(self, resolver, plain_latin, lexicon):
        resolved = resolver.resolve(yellow_cab(plain_latin), lexicon)
        last = resolved.occurrences()[-1]
        assert last.alternatives == frozenset({"LATIN_N_LOWER", "LATIN_B_LOWER"})
        assert spell(resolved, plain_latin) == "This is a yellow ca*"

    def test_input_is_not_modified(self, resolver, plain_latin, lexicon, grammar):
        structure = yellow_cab(plain_latin)
        resolver.resolve(structure, lexicon, grammar)
        assert structure.occurrences()[-1].is_ambiguous
        assert structure.provenance == []

    def test_unresolvable_word_is_kept(self, resolver, plain_latin, lexicon):
        structure = word_structure(plain_latin, [[("x", "q"), ("z", "j")]])
        resolved = resolver.resolve(structure, lexicon)
        assert resolved.root == structure.root
        assert {"level": "word", "path": "0.0.0", "flag": "unresolvable"} in resolved.provenance

    def test_case_sensitive_lookup(self, resolver, plain_latin, lexicon):
        structure = word_structure(plain_latin, [[("T", "t"), "h", "e"]])
        resolved = resolver.resolve(structure, lexicon)
        assert spell(resolved, plain_latin) == "the"

    def test_expansion_cap(self, plain_latin, lexicon):
        resolver = Resolver(plain_latin, {"disambiguation": {"max_expansions": 2}})
        structure = word_structure(plain_latin, [["c", ("a", "o"), ("n", "t")]])
        resolved = resolver.resolve(structure, lexicon)
        assert resolved.root == structure.root
        assert {"level": "word", "path": "0.0.0", "flag": "too-many-expansions"} in resolved.provenance

    def test_extra_level(self, plain_latin, lexicon, grammar):
        def prefer_last(path, tokens, context):
            return [max(tokens)]

        resolver = Resolver(plain_latin, extra_levels=[prefer_last])
        structure = word_structure(plain_latin, ["a", ["c", "a", ("t", "r")]])
        resolved = resolver.resolve(structure, lexicon, grammar)
        assert spell(resolved, plain_latin) == "a cat"
        assert resolved.provenance[-1] == {"level": "prefer_last", "path": "0.0.2", "survivors": ["cat"]}

    def test_unambiguous_structure_unchanged(self, resolver, plain_latin, lexicon, grammar):
        structure = word_structure(plain_latin, ["Zzz", "qq"])
        resolved = resolver.resolve(structure, lexicon, grammar)
        assert resolved.root == structure.root
        assert resolved.provenance == []

    def test_needs_word_containers(self, resolver, plain_latin, lexicon):
        structure = SymbolStructure(format_id=plain_latin.id)
        line = structure.root.add(Container("line"))
        line.add(SymbolOccurrence.ambiguous(["DIGIT_1", "LATIN_L_LOWER"]))
        with pytest.raises(MissingWordStructure):
            resolver.resolve(structure, lexicon)


class TestResolveUndefined:

    def test_unique_completion(self, resolver, plain_latin, lexicon):
        structure = word_structure(plain_latin, ["a", ["y", "e", None, "l", "o", "w"]])
        structure.refresh_status()
        resolved = resolver.resolve_undefined(structure, lexicon)
        assert resolved.status == StructureStatus.COMPLETE
        assert spell(resolved, plain_latin) == "a yellow"
        assert resolved.provenance[-1] == {"defined_by": "english_demo"}

    def test_several_completions(self, resolver, plain_latin, lexicon):
        structure = word_structure(plain_latin, [["c", "a", None]])
        structure.refresh_status()
        resolved = resolver.resolve_undefined(structure, lexicon)
        assert resolved.status == StructureStatus.UNDEFINED
        assert resolved.provenance == [{"level": "word", "path": "0.0.0", "lexicon": "english_demo",
                                        "completions": 4}]

    def test_completion_respects_alternatives(self, resolver, plain_latin, lexicon):
        structure = word_structure(plain_latin, [["c", "a", None], [("t", "h"), "i", None]])
        structure.refresh_status()
        resolved = resolver.resolve_undefined(structure, lexicon)
        assert spell(resolved, plain_latin) == "ca? tin"

    def test_defined_structure_returned_as_is(self, resolver, plain_latin, lexicon):
        structure = word_structure(plain_latin, ["cab"])
        assert resolver.resolve_undefined(structure, lexicon).root == structure.root


class TestReconcile:

    def test_undefined_yields_to_defined(self, plain_latin):
        first = word_structure(plain_latin, [["c", "a", None]])
        second = word_structure(plain_latin, [["c", None, "b"]])
        for structure in (first, second):
            structure.refresh_status()
        combined = reconcile([first, second])
        assert combined.status == StructureStatus.COMPLETE
        assert spell(combined, plain_latin) == "cab"
        assert combined.provenance[-1] == {"level": "reconcile", "sources": 2}

    def test_alternatives_intersect(self, plain_latin):
        first = word_structure(plain_latin, [[("1", "l")]])
        second = word_structure(plain_latin, [[("l", "I")]])
        assert spell(reconcile([first, second]), plain_latin) == "l"

    def test_conflict(self, plain_latin):
        combined = reconcile([word_structure(plain_latin, ["cat"]), word_structure(plain_latin, ["cab"])])
        assert combined.status == StructureStatus.UNDEFINED
        assert {"level": "reconcile", "path": "0.0.0.2", "flag": "conflict"} in combined.provenance

    def test_shape_mismatch(self, plain_latin):
        combined = reconcile([word_structure(plain_latin, ["ab"]), word_structure(plain_latin, ["a"])])
        assert spell(combined, plain_latin) == "a?"
        assert {"level": "reconcile", "path": "0.0.0.1", "flag": "shape-mismatch"} in combined.provenance

    def test_format_mismatch(self, plain_latin):
        with pytest.raises(FormatMismatch):
            reconcile([word_structure(plain_latin, ["a"]),
                       word_structure(plain_latin, ["a"], format_id="FONT_AWARE_LATIN")])

    def test_needs_input(self):
        with pytest.raises(ValueError):
            reconcile([])
