"""
Disambiguation Module
Handles word- and grammar-level resolution of ambiguous and undefined occurrences.
"""

from .errors import LexiconError, MissingWordStructure
from .lexicon import GrammarRules, Lexicon
from .resolver import Resolver, reconcile

__all__ = ['Resolver', 'reconcile', 'Lexicon', 'GrammarRules', 'MissingWordStructure', 'LexiconError']
