"""
Interpretation cascade for ambiguous and undefined occurrences: character alternatives
are narrowed by word lists, then by grammar, then by any extra levels supplied.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from math import prod
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from format_registry.models import InformationFormat
from identity.errors import FormatMismatch
from interpretation.structure import Container, SymbolOccurrence, SymbolStructure, StructureStatus

from .errors import MissingWordStructure
from .lexicon import GrammarRules, Lexicon

logger = logging.getLogger(__name__)

Expansion = Tuple[str, ...]
# (word path, surviving tokens, surviving tokens of every word in order) -> narrowed tokens
ExtraLevel = Callable[[str, List[str], List[List[str]]], List[str]]


@dataclass
class WordState:
    path: str
    container: Container
    expansions: List[Expansion] = field(default_factory=list)
    tokens: List[str] = field(default_factory=list)
    ambiguous: bool = False
    flag: Optional[str] = None


class Resolver:
    """
    Narrows alternative sets word by word.

    Args:
        fmt: Format of the structures, used to spell type ids and fold case
        config: `disambiguation.max_expansions` caps the cross-product per word
        extra_levels: callables applied after the grammar level
    """

    def __init__(self, fmt: InformationFormat, config: Dict = None, extra_levels: Sequence[ExtraLevel] = ()):
        self.fmt = fmt
        self.config = config or {}
        self.max_expansions = int(self.config.get('disambiguation', {}).get('max_expansions', 1000))
        self.extra_levels = list(extra_levels)

    def _spell(self, expansion: Expansion) -> Optional[str]:
        chars = [self.fmt.type_to_char(type_id) for type_id in expansion]
        if any(char is None for char in chars):
            return None
        return ''.join(chars)

    @staticmethod
    def _words(structure: SymbolStructure) -> List[Tuple[str, Container]]:
        words = [(path, node) for _, path, node in structure.walk()
                 if isinstance(node, Container) and node.kind == 'word']
        if not words and structure.occurrences():
            raise MissingWordStructure("Structure has no word containers; its format must mark wordSeparators meaningful")
        return words

    def resolve(self, structure: SymbolStructure, lexicon: Lexicon, grammar: Optional[GrammarRules] = None) -> SymbolStructure:
        """
        Narrow the alternatives of every ambiguous word.

        One surviving expansion resolves the word; several narrow each position to the
        types they use; none keeps the original sets and flags the word unresolvable.

        Raises:
            MissingWordStructure
        """
        result = structure.copy()
        case_sensitive = self.fmt.meaningful.case_sensitive
        states = [self._word_state(path, container) for path, container in self._words(result)]

        for state in states:
            if not state.ambiguous or state.flag:
                continue
            survivors = [e for e in state.expansions
                         if (token := self._spell(e)) is not None and lexicon.contains(token, case_sensitive)]
            if survivors:
                state.expansions = survivors
                state.tokens = [self._spell(e) for e in survivors]
            else:
                state.flag = 'unresolvable'
            result.provenance.append({'level': 'word', 'path': state.path, 'lexicon': lexicon.id,
                                      'survivors': list(state.tokens) if survivors else []})

        if grammar is not None:
            self._apply_grammar(states, grammar, result)
        for level in self.extra_levels:
            self._apply_extra(states, level, result)

        for state in states:
            if state.ambiguous and not state.flag:
                self._narrow(state)
            elif state.flag and state.flag != 'undefined':
                logger.warning(f"Word {state.path} left {state.flag}")
                result.provenance.append({'level': 'word', 'path': state.path, 'flag': state.flag})
        return result

    def _word_state(self, path: str, container: Container) -> WordState:
        occurrences = [child for child in container.children if isinstance(child, SymbolOccurrence)]
        state = WordState(path, container)
        if any(occurrence.undefined for occurrence in occurrences):
            state.flag = 'undefined'
            return state
        alternatives = [sorted(occurrence.alternatives) for occurrence in occurrences]
        state.ambiguous = any(len(options) > 1 for options in alternatives)
        if prod(len(options) for options in alternatives) > self.max_expansions:
            state.flag = 'too-many-expansions'
            return state
        state.expansions = [tuple(e) for e in product(*alternatives)]
        state.tokens = [self._spell(e) or '' for e in state.expansions]
        return state

    def _apply_grammar(self, states: List[WordState], grammar: GrammarRules, result: SymbolStructure):
        changed = True
        while changed:
            changed = False
            for position, state in enumerate(states):
                if not state.ambiguous or state.flag or len(state.expansions) < 2:
                    continue
                before = self._tags(states[position - 1], grammar) if position > 0 else None
                after = self._tags(states[position + 1], grammar) if position + 1 < len(states) else None
                kept = [(e, t) for e, t in zip(state.expansions, state.tokens)
                        if self._fits(grammar.tags(t), before, after, grammar)]
                if kept and len(kept) < len(state.expansions):
                    state.expansions = [e for e, _ in kept]
                    state.tokens = [t for _, t in kept]
                    changed = True
                    result.provenance.append({'level': 'grammar', 'path': state.path, 'grammar': grammar.id,
                                              'survivors': list(state.tokens)})

    @staticmethod
    def _tags(state: WordState, grammar: GrammarRules):
        """Union of tags over a neighbour's remaining tokens; None when unknown or unusable."""
        if state.flag:
            return None
        tags = set()
        for token in state.tokens:
            token_tags = grammar.tags(token)
            if token_tags is None:
                return None
            tags |= token_tags
        return frozenset(tags) if tags else None

    @staticmethod
    def _fits(tags, before, after, grammar: GrammarRules) -> bool:
        if tags is None:
            return True
        return any(grammar.allows(before, frozenset([tag])) and grammar.allows(frozenset([tag]), after) for tag in tags)

    def _apply_extra(self, states: List[WordState], level: ExtraLevel, result: SymbolStructure):
        context = [list(state.tokens) for state in states]
        for state in states:
            if not state.ambiguous or state.flag or len(state.tokens) < 2:
                continue
            narrowed = [t for t in level(state.path, list(state.tokens), context) if t in state.tokens]
            if narrowed and len(narrowed) < len(state.tokens):
                keep = [(e, t) for e, t in zip(state.expansions, state.tokens) if t in narrowed]
                state.expansions = [e for e, _ in keep]
                state.tokens = [t for _, t in keep]
                result.provenance.append({'level': getattr(level, '__name__', 'extra'), 'path': state.path,
                                          'survivors': list(state.tokens)})

    @staticmethod
    def _narrow(state: WordState):
        position = 0
        for index, child in enumerate(state.container.children):
            if not isinstance(child, SymbolOccurrence):
                continue
            types = frozenset(expansion[position] for expansion in state.expansions)
            state.container.children[index] = SymbolOccurrence(types, dict(child.style_attrs))
            position += 1

    def resolve_undefined(self, structure: SymbolStructure, lexicon: Lexicon) -> SymbolStructure:
        """
        Fill UNDEFINED positions from the lexicon: each acts as a one-character wildcard
        inside its word. A word is filled only when exactly one completion exists.

        Raises:
            MissingWordStructure
        """
        result = structure.copy()
        words = self._words(result)
        if result.status != StructureStatus.UNDEFINED:
            return result

        space_type = self.fmt.char_to_type(' ')
        for path, container in words:
            positions = [(index, child) for index, child in enumerate(container.children)
                         if isinstance(child, SymbolOccurrence)]
            if not any(child.undefined for _, child in positions):
                continue
            completions = set()
            for candidate in lexicon.candidates(len(positions)):
                types = [self.fmt.char_to_type(char) for char in candidate]
                if any(t is None or t == space_type for t in types):
                    continue
                if all(child.undefined or t in child.alternatives for t, (_, child) in zip(types, positions)):
                    completions.add(tuple(types))
            if len(completions) != 1:
                logger.info(f"Word {path}: {len(completions)} completions, left undefined")
                result.provenance.append({'level': 'word', 'path': path, 'lexicon': lexicon.id,
                                          'completions': len(completions)})
                continue
            (types,) = completions
            for t, (index, child) in zip(types, positions):
                container.children[index] = SymbolOccurrence.of(t, child.style_attrs)
            result.provenance.append({'level': 'word', 'path': path, 'lexicon': lexicon.id,
                                      'filled': self._spell(types)})

        if result.refresh_status() == StructureStatus.COMPLETE:
            result.provenance.append({'defined_by': lexicon.id})
        return result


def reconcile(structures: Sequence[SymbolStructure]) -> SymbolStructure:
    """
    Combine structures extracted from several carriers of one object.

    Positions are matched by path. UNDEFINED yields to a defined occurrence, alternatives
    are intersected, and an empty intersection or a missing position leaves UNDEFINED.
    """
    if not structures:
        raise ValueError("reconcile needs at least one structure")
    format_ids = {s.format_id for s in structures if s.format_id}
    if len(format_ids) > 1:
        left, right = sorted(format_ids)[:2]
        raise FormatMismatch(left, right)

    result = structures[0].copy()
    others = structures[1:]
    for _, path, node in list(result.walk()):
        if not isinstance(node, SymbolOccurrence):
            continue
        candidates = [node]
        missing = False
        for other in others:
            try:
                counterpart = other.node_at(path)
            except (IndexError, AttributeError):
                counterpart = None
            if not isinstance(counterpart, SymbolOccurrence):
                missing = True
                break
            candidates.append(counterpart)

        defined = [c for c in candidates if not c.undefined]
        replacement = SymbolOccurrence.unknown()
        flag = None
        if missing:
            flag = 'shape-mismatch'
        elif defined:
            common = frozenset.intersection(*(c.alternatives for c in defined))
            if common:
                replacement = SymbolOccurrence(common, dict(defined[0].style_attrs))
            else:
                flag = 'conflict'
        if flag:
            result.provenance.append({'level': 'reconcile', 'path': path, 'flag': flag})
            logger.warning(f"Position {path} left undefined: {flag}")
        _replace(result, path, replacement)

    result.refresh_status()
    result.provenance.append({'level': 'reconcile', 'sources': len(structures)})
    return result


def _replace(structure: SymbolStructure, path: str, occurrence: SymbolOccurrence):
    parent_path, _, index = path.rpartition('.')
    parent = structure.node_at(parent_path)
    parent.children[int(index)] = occurrence
