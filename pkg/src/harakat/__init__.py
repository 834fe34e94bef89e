"""Vowel-tolerant Arabic dictionary lookup over TB++ transliteration."""

from .alphabet import from_translit, normalize_token, strip_diacritics, to_translit
from .compiler import CompiledDictionary, TagMode, build, deserialize, serialize
from .lexicon import DictEntry, load_flat, parse_entry, parse_flat
from .lookup import Analysis, Analyzer, annotate_text, count_partial_forms, match_token, spellcheck
from .morphgraph import generate_dictionary, load_grammar, parse_grammar
from .rules import TypoRuleSet, load_rules, parse_rules

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "Analyzer",
    "CompiledDictionary",
    "DictEntry",
    "TagMode",
    "TypoRuleSet",
    "annotate_text",
    "build",
    "count_partial_forms",
    "deserialize",
    "from_translit",
    "generate_dictionary",
    "load_flat",
    "load_grammar",
    "load_rules",
    "match_token",
    "normalize_token",
    "parse_entry",
    "parse_flat",
    "parse_grammar",
    "parse_rules",
    "serialize",
    "spellcheck",
    "strip_diacritics",
    "to_translit",
]
