"""
Word lists and bigram part-of-speech rules used to narrow ambiguous words.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Optional, Set, Tuple, Union

from .errors import LexiconError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Lexicon:
    id: str
    words: FrozenSet[str]

    def __post_init__(self):
        object.__setattr__(self, 'words', frozenset(self.words))
        if not self.words:
            raise ValueError(f"Lexicon {self.id} is empty")
        object.__setattr__(self, '_folded', frozenset(word.casefold() for word in self.words))

    def contains(self, token: str, case_sensitive: bool = False) -> bool:
        if case_sensitive:
            return token in self.words
        return token.casefold() in self._folded

    def candidates(self, length: int) -> Iterable[str]:
        """Words of a given length, in sorted order."""
        return sorted(word for word in self.words if len(word) == length)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Lexicon":
        """One token per line; blank lines and '#' comments are skipped."""
        path = Path(path)
        words = []
        for number, line in enumerate(path.read_text(encoding='utf-8').split('\n'), start=1):
            token = line.strip()
            if not token or token.startswith('#'):
                continue
            if ' ' in token or '\t' in token:
                raise LexiconError(str(path), number, f"token contains whitespace: {token!r}")
            words.append(token)
        if not words:
            raise LexiconError(str(path), 0, "lexicon has no tokens")
        lexicon = cls(path.stem, frozenset(words))
        logger.info(f"Loaded lexicon {lexicon.id}: {len(lexicon.words)} words")
        return lexicon


@dataclass
class GrammarRules:
    """Bigram constraints over part-of-speech tags."""

    id: str
    allowed: Set[Tuple[str, str]] = field(default_factory=set)
    pos: Dict[str, FrozenSet[str]] = field(default_factory=dict)

    def tags(self, token: str) -> Optional[FrozenSet[str]]:
        """Tags of a token (case-folded lookup), or None for tokens the grammar does not know."""
        return self.pos.get(token.casefold())

    def allows(self, left: Optional[FrozenSet[str]], right: Optional[FrozenSet[str]]) -> bool:
        """True if some tag pair is allowed; unknown tokens constrain nothing."""
        if left is None or right is None:
            return True
        return any((a, b) in self.allowed for a in left for b in right)

    def check_against(self, lexicon: Lexicon):
        missing = sorted(token for token in self.pos if not lexicon.contains(token))
        if missing:
            raise ValueError(f"Grammar {self.id} tags tokens missing from lexicon {lexicon.id}: {missing}")

    @classmethod
    def load(cls, path: Union[str, Path], lexicon: Optional[Lexicon] = None) -> "GrammarRules":
        """
        Parse `pos <token> <tag>[,<tag>...]` and `allow <tagA> <tagB>` lines.

        Raises:
            LexiconError: malformed line
        """
        path = Path(path)
        grammar = cls(path.stem)
        for number, line in enumerate(path.read_text(encoding='utf-8').split('\n'), start=1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            parts = line.split()
            if parts[0] == 'pos' and len(parts) == 3:
                tags = frozenset(tag for tag in parts[2].split(',') if tag)
                if not tags:
                    raise LexiconError(str(path), number, "pos line without tags")
                grammar.pos[parts[1].casefold()] = grammar.pos.get(parts[1].casefold(), frozenset()) | tags
            elif parts[0] == 'allow' and len(parts) == 3:
                grammar.allowed.add((parts[1], parts[2]))
            else:
                raise LexiconError(str(path), number, f"expected 'pos' or 'allow' line, got {line!r}")
        if lexicon is not None:
            grammar.check_against(lexicon)
        logger.info(f"Loaded grammar {grammar.id}: {len(grammar.pos)} tokens, {len(grammar.allowed)} bigrams")
        return grammar
