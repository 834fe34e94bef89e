"""Arabic script in TB++ transliteration.

TB++ is a one-character-per-grapheme Latin encoding derived from Buckwalter.
Everything inside the package works on TB++ strings; Arabic Unicode is only
converted at the edges (file input, CLI output).
"""

from __future__ import annotations

import enum
import re
from typing import NamedTuple

# (Arabic codepoint, TB++ character).  The last three rows are extensions:
# superscript alef and wasla alef are used by the rule file, and tatweel is
# carried through as '_' so that TB++ text can express it before it is
# stripped by normalize_token.
TRANSLIT_PAIRS: tuple[tuple[str, str], ...] = (
    ("ء", "c"),  # hamza
    ("آ", "C"),  # alef madda
    ("أ", "O"),  # alef with hamza above
    ("ؤ", "W"),  # waw with hamza
    ("إ", "I"),  # alef with hamza below
    ("ئ", "e"),  # yeh with hamza
    ("ا", "A"),  # alef
    ("ب", "b"),
    ("ة", "p"),  # teh marbuta
    ("ت", "t"),
    ("ث", "v"),
    ("ج", "j"),
    ("ح", "H"),
    ("خ", "x"),
    ("د", "d"),
    ("ذ", "J"),
    ("ر", "r"),
    ("ز", "z"),
    ("س", "s"),
    ("ش", "M"),
    ("ص", "S"),
    ("ض", "D"),
    ("ط", "T"),
    ("ظ", "Z"),
    ("ع", "E"),
    ("غ", "g"),
    ("ف", "f"),
    ("ق", "q"),
    ("ك", "k"),
    ("ل", "l"),
    ("م", "m"),
    ("ن", "n"),
    ("ه", "h"),
    ("و", "w"),
    ("ى", "Y"),  # alef maqsura
    ("ي", "y"),
    ("ً", "F"),  # fathatan
    ("ٌ", "N"),  # dammatan
    ("ٍ", "K"),  # kasratan
    ("َ", "a"),  # fatha
    ("ُ", "u"),  # damma
    ("ِ", "i"),  # kasra
    ("ّ", "G"),  # shadda
    ("ْ", "o"),  # sukun
    ("ٰ", "R"),  # superscript alef
    ("ٱ", "L"),  # alef wasla
    ("ـ", "_"),  # tatweel
)

TO_TBPP: dict[str, str] = {ar: tb for ar, tb in TRANSLIT_PAIRS}
TO_ARABIC: dict[str, str] = {tb: ar for ar, tb in TRANSLIT_PAIRS}

TATWEEL = "_"
SHORT_VOWELS = frozenset("aui")
NUNATIONS = frozenset("FNK")
DIACRITICS = frozenset("auioFNKGR")
LETTERS = frozenset(tb for _, tb in TRANSLIT_PAIRS) - DIACRITICS - {TATWEEL}
TBPP_CHARS = frozenset(TO_ARABIC)

CORONAL = frozenset("tvjdJrzsMSDTZln")
LUNAR = LETTERS - CORONAL


class CharClass(enum.Enum):
    BARE_LETTER = "bare-letter"
    SHORT_VOWEL = "short-vowel"
    ZERO_VOWEL = "zero-vowel"
    NUNATION = "nunation"
    SHADDA = "shadda"
    SUPERSCRIPT_ALEF = "superscript-alef"
    HAMZA_ABOVE_ALEF = "hamza-above-alef"
    HAMZA_BELOW_ALEF = "hamza-below-alef"
    BARE_ALEF = "bare-alef"
    WASLA_ALEF = "wasla-alef"
    OTHER = "other"


_SPECIAL_CLASSES = {
    "o": CharClass.ZERO_VOWEL,
    "G": CharClass.SHADDA,
    "R": CharClass.SUPERSCRIPT_ALEF,
    "O": CharClass.HAMZA_ABOVE_ALEF,
    "I": CharClass.HAMZA_BELOW_ALEF,
    "A": CharClass.BARE_ALEF,
    "L": CharClass.WASLA_ALEF,
}


def classify(c: str) -> CharClass:
    """Class of a single TB++ character; anything outside the table is OTHER."""
    special = _SPECIAL_CLASSES.get(c)
    if special is not None:
        return special
    if c in SHORT_VOWELS:
        return CharClass.SHORT_VOWEL
    if c in NUNATIONS:
        return CharClass.NUNATION
    if c in LETTERS:
        return CharClass.BARE_LETTER
    return CharClass.OTHER


def is_diacritic(c: str) -> bool:
    return c in DIACRITICS


def _convert(text: str, table: dict[str, str], unknown: set[str] | None) -> str:
    out = []
    for ch in text:
        mapped = table.get(ch)
        if mapped is None:
            if unknown is not None and not ch.isspace():
                unknown.add(ch)
            out.append(ch)
        else:
            out.append(mapped)
    return "".join(out)


def to_translit(text: str, unknown: set[str] | None = None) -> str:
    """Arabic Unicode to TB++.

    Characters outside the table are copied unchanged.  Pass a set as
    ``unknown`` to collect them.
    """
    return _convert(text, TO_TBPP, unknown)


def from_translit(text: str, unknown: set[str] | None = None) -> str:
    """TB++ to Arabic Unicode; the inverse of to_translit on covered characters."""
    return _convert(text, TO_ARABIC, unknown)


class Mark(NamedTuple):
    char: str
    offset: int

    def __repr__(self) -> str:
        return f"{self.char}@{self.offset}"


def strip_diacritics(form: str) -> tuple[str, list[Mark]]:
    """Split a form into its bare skeleton and the removed marks.

    Offsets refer to positions in the original form, so
    ``insert_diacritics(*strip_diacritics(f)) == f``.
    """
    skeleton = []
    marks = []
    for i, ch in enumerate(form):
        if ch in DIACRITICS:
            marks.append(Mark(ch, i))
        else:
            skeleton.append(ch)
    return "".join(skeleton), marks


def insert_diacritics(skeleton: str, marks: list[Mark]) -> str:
    chars = list(skeleton)
    for mark in sorted(marks, key=lambda m: m.offset):
        chars.insert(mark.offset, mark.char)
    return "".join(chars)


_TATWEELS = re.compile("[_ـ]")
_SPACES = re.compile(r"\s+")


def normalize_token(token: str) -> str:
    """Drop tatweel and collapse runs of whitespace to a single space."""
    return _SPACES.sub(" ", _TATWEELS.sub("", token)).strip()
