"""Compact tags: rebuild the lemma of an entry from its surface form.

Two styles are supported.

Suffix style (concatenative morphology) stores how many characters to cut
from the end of the surface and what to append: ``looks`` with lemma
``look`` gives ``1``.

Semitic style lists the lemma left to right as a mix of literal characters
and positions copied from the surface: ``takotubu`` with lemma ``ktb`` gives
``246``, and ``xawanapN`` with lemma ``xaAoein`` gives ``01Aoei4``.
Positions 0-9 are single digits, larger ones are written ``(12)``.  Literal
digits and the characters ``(``, ``.`` and ``\\`` are escaped with a
backslash.  The tag copies as many characters as possible; among equally
good tags it picks the smallest sequence of positions.

A full tag is the body followed by the annotation, e.g. ``246.V:aI3fsN``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache


class TagMode(enum.Enum):
    SUFFIX = "concat"
    SEMITIC = "semitic"


class IndexOutOfRange(ValueError):
    pass


_SPECIAL = frozenset("0123456789(.\\")


def _escape(text: str) -> str:
    return "".join("\\" + c if c in _SPECIAL else c for c in text)


@dataclass(frozen=True)
class CompactTag:
    mode: TagMode
    items: tuple  # Semitic: ints (copy) and strs (literals); Suffix: (remove_count, literal)
    annotation: str = ""

    def render(self) -> str:
        if self.mode is TagMode.SUFFIX:
            remove, literal = self.items
            body = str(remove) + _escape(literal)
        else:
            parts = []
            for item in self.items:
                if isinstance(item, int):
                    parts.append(str(item) if item < 10 else f"({item})")
                else:
                    parts.append(_escape(item))
            body = "".join(parts)
        return body + self.annotation

    @property
    def copied(self) -> int:
        if self.mode is TagMode.SUFFIX:
            return -1
        return sum(1 for it in self.items if isinstance(it, int))


def _lcs_table(a: str, b: str) -> list[list[int]]:
    n, m = len(a), len(b)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        row, nxt = table[i], table[i + 1]
        ai = a[i]
        for j in range(m - 1, -1, -1):
            if ai == b[j]:
                row[j] = nxt[j + 1] + 1
            else:
                row[j] = row[j + 1] if row[j + 1] >= nxt[j] else nxt[j]
    return table


def semitic_alignment(surface: str, lemma: str) -> list[tuple[int, int]]:
    """Pairs (surface position, lemma position) of the copied characters.

    The alignment is a longest common subsequence; among those, the one with
    the lexicographically smallest list of surface positions, and for those
    the earliest lemma positions.
    """
    table = _lcs_table(surface, lemma)
    pairs = []
    i = j = 0
    need = table[0][0]
    while need:
        found = False
        for si in range(i, len(surface)):
            ch = surface[si]
            for lj in range(j, len(lemma)):
                if lemma[lj] == ch and table[si + 1][lj + 1] == need - 1:
                    pairs.append((si, lj))
                    i, j, need = si + 1, lj + 1, need - 1
                    found = True
                    break
            if found:
                break
    return pairs


def compute_compact_tag(surface: str, lemma: str, annotation: str, mode: TagMode) -> CompactTag:
    if mode is TagMode.SUFFIX:
        p = 0
        limit = min(len(surface), len(lemma))
        while p < limit and surface[p] == lemma[p]:
            p += 1
        return CompactTag(mode, (len(surface) - p, lemma[p:]), annotation)
    items: list = []
    j = 0
    for si, lj in semitic_alignment(surface, lemma):
        if lj > j:
            items.append(lemma[j:lj])
        items.append(si)
        j = lj + 1
    if j < len(lemma):
        items.append(lemma[j:])
    return CompactTag(mode, tuple(items), annotation)


def _read_literal(text: str, k: int) -> tuple[str, int]:
    if text[k] == "\\":
        if k + 1 >= len(text):
            raise IndexOutOfRange(f"dangling escape in {text!r}")
        return text[k + 1], k + 2
    return text[k], k + 1


def parse_compact_tag(text: str, mode: TagMode) -> CompactTag:
    """Inverse of CompactTag.render."""
    k = 0
    n = len(text)
    if mode is TagMode.SUFFIX:
        while k < n and text[k].isdigit():
            k += 1
        if k == 0:
            raise IndexOutOfRange(f"missing remove count in {text!r}")
        remove = int(text[:k])
        literal = []
        while k < n and text[k] != ".":
            ch, k = _read_literal(text, k)
            literal.append(ch)
        return CompactTag(mode, (remove, "".join(literal)), text[k:])
    items: list = []
    while k < n and text[k] != ".":
        ch = text[k]
        if ch.isdigit():
            items.append(int(ch))
            k += 1
        elif ch == "(":
            close = text.find(")", k)
            if close < 0 or not text[k + 1:close].isdigit():
                raise IndexOutOfRange(f"bad position in {text!r}")
            items.append(int(text[k + 1:close]))
            k = close + 1
        else:
            ch, k = _read_literal(text, k)
            if items and isinstance(items[-1], str):
                items[-1] += ch
            else:
                items.append(ch)
    return CompactTag(mode, tuple(items), text[k:])


def apply_compact_tag(surface: str, tag: CompactTag) -> str:
    """Lemma (without annotation) rebuilt from the surface."""
    if tag.mode is TagMode.SUFFIX:
        remove, literal = tag.items
        if remove > len(surface):
            raise IndexOutOfRange(f"cannot remove {remove} characters from {surface!r}")
        return surface[: len(surface) - remove] + literal
    out = []
    for item in tag.items:
        if isinstance(item, int):
            if item >= len(surface):
                raise IndexOutOfRange(f"position {item} outside {surface!r}")
            out.append(surface[item])
        else:
            out.append(item)
    return "".join(out)


@lru_cache(maxsize=65536)
def parsed_tag(text: str, mode: TagMode) -> CompactTag:
    return parse_compact_tag(text, mode)


def expand_compact_tag(surface: str, tag: str | CompactTag, mode: TagMode | None = None) -> str:
    """``lemma + annotation`` for a surface and its tag."""
    if isinstance(tag, str):
        if mode is None:
            raise TypeError("mode is required for a textual tag")
        tag = parsed_tag(tag, mode)
    return apply_compact_tag(surface, tag) + tag.annotation
