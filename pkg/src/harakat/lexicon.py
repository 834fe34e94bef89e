"""Flat full-form dictionaries, the tagset, and lexical masks.

Dictionary lines look like::

    takotubu,ktb.V:aI3fsN
    kitaAbFA,kitaAb.N:msiA      / trailing comment
    haA,haA.PRO+Ppers+Acc:3fs

``surface,lemma.POS[+feat]*[:code]*``.  An empty lemma means "same as the
surface".  Several ``:code`` groups on one line are alternative codes for the
same surface.  Masks use the same shape inside angle brackets, for example
``<N:G>`` or ``<raOaY.V+pro:aI>``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .alphabet import DIACRITICS, normalize_token

_NOMINAL = frozenset("mfsdpqDaiNAGI")  # 'I' is accepted as a spelling of 'i'
_VERBAL = frozenset("abPIYFMNSJE123mfsdpqDiAG")

FEATURES: dict[str, frozenset[str]] = {
    "V": _VERBAL,
    "N": _NOMINAL,
    "NPr": _NOMINAL,
    "A": _NOMINAL,
    "EL": _NOMINAL,
    "ADV": frozenset("iA"),
    "PRO": frozenset("mfsdp123"),
    "PREP": frozenset(),
    "CONJC": frozenset(),
    "CONJS": frozenset(),
    "INTJ": frozenset(),
    "DET": frozenset(),
    "INNA": frozenset(),
    "PRTCL": frozenset(),
}
POS_TAGS = frozenset(FEATURES)

_SEM = re.compile(r"([+-])([^+\-:]+)")


class LexiconError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)


class MalformedEntry(LexiconError):
    pass


class UnknownPos(LexiconError):
    pass


class UnknownFeatureChar(LexiconError):
    pass


class MalformedMask(LexiconError):
    pass


@dataclass(frozen=True)
class Annotation:
    pos: str
    sem: tuple[str, ...] = ()
    codes: tuple[str, ...] = ()

    def render(self) -> str:
        return "." + self.pos + "".join(_render_sem(s) for s in self.sem) + "".join(
            ":" + c for c in self.codes
        )


@dataclass(frozen=True)
class DictEntry:
    surface: str
    lemma: str
    pos: str
    sem: tuple[str, ...] = ()
    codes: tuple[str, ...] = ()

    @property
    def annotation(self) -> str:
        """The ``.POS+sem:codes`` part of the rendered line."""
        return Annotation(self.pos, self.sem, self.codes).render()

    def render(self) -> str:
        return f"{self.surface},{self.lemma}{self.annotation}"

    def __str__(self) -> str:
        return self.render()


def _render_sem(feature: str) -> str:
    return feature if feature.startswith("-") else "+" + feature


def strip_comment(line: str) -> str:
    cut = line.find("/")
    if cut >= 0:
        line = line[:cut]
    return line.strip()


def parse_annotation(text: str, lineno: int | None = None, cls=MalformedEntry) -> Annotation:
    """Parse ``POS[+feat]*[:code]*`` (without the leading dot)."""
    head, *codes = text.split(":")
    match = re.match(r"[A-Za-z_]+", head)
    if match is None:
        raise cls(f"missing part of speech in {text!r}", lineno)
    pos = match.group(0)
    rest = head[match.end():]
    sem = []
    pos_end = 0
    for m in _SEM.finditer(rest):
        if m.start() != pos_end:
            break
        sem.append(m.group(2) if m.group(1) == "+" else "-" + m.group(2))
        pos_end = m.end()
    if pos_end != len(rest):
        raise cls(f"bad feature list {rest!r}", lineno)
    if pos not in FEATURES:
        raise UnknownPos(f"unknown part of speech {pos!r}", lineno)
    if "pro" in sem and "nopro" in sem:
        raise cls("+pro and +nopro on the same entry", lineno)
    allowed = FEATURES[pos]
    for code in codes:
        if not code:
            raise cls(f"empty feature code in {text!r}", lineno)
        for ch in code:
            if ch not in allowed:
                raise UnknownFeatureChar(f"feature {ch!r} is not defined for {pos}", lineno)
    return Annotation(pos, tuple(sem), tuple(codes))


def parse_entry(line: str, lineno: int | None = None) -> DictEntry | None:
    """Parse one dictionary line.  Returns None for blank and comment lines."""
    body = strip_comment(line)
    if not body:
        return None
    comma = body.find(",")
    if comma <= 0:
        raise MalformedEntry(f"missing comma in {body!r}", lineno)
    surface = normalize_token(body[:comma])
    rest = body[comma + 1:]
    dot = rest.find(".")
    if dot < 0:
        raise MalformedEntry(f"missing dot in {body!r}", lineno)
    lemma = rest[:dot].strip() or surface
    ann = parse_annotation(rest[dot + 1:].strip(), lineno)
    if not surface or surface[0] in DIACRITICS:
        raise MalformedEntry(f"surface {surface!r} must start with a letter", lineno)
    return DictEntry(surface, lemma, ann.pos, ann.sem, ann.codes)


def entry_from_annotation(surface: str, lemma: str, annotation: str) -> DictEntry:
    ann = parse_annotation(annotation.lstrip("."))
    return DictEntry(surface, lemma, ann.pos, ann.sem, ann.codes)


@dataclass
class FlatDictionary:
    entries: list[DictEntry] = field(default_factory=list)
    linenos: list[int] = field(default_factory=list)
    diagnostics: list[LexiconError] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[DictEntry]:
        return iter(self.entries)

    def render(self) -> str:
        return "".join(e.render() + "\n" for e in self.entries)


def parse_flat(lines: Iterable[str]) -> FlatDictionary:
    """Parse dictionary lines, collecting errors instead of stopping at them.

    Identical entries are kept once; entries that only share surface and
    lemma are all kept.
    """
    flat = FlatDictionary()
    seen: set[DictEntry] = set()
    for lineno, line in enumerate(lines, 1):
        try:
            entry = parse_entry(line, lineno)
        except LexiconError as exc:
            flat.diagnostics.append(exc)
            continue
        if entry is None or entry in seen:
            continue
        seen.add(entry)
        flat.entries.append(entry)
        flat.linenos.append(lineno)
    return flat


def load_flat(path: str | Path) -> FlatDictionary:
    with open(path, encoding="utf-8") as fh:
        return parse_flat(fh)


@dataclass(frozen=True)
class LexicalMask:
    pos: str
    lemma: str | None = None
    sem: frozenset[str] = frozenset()
    groups: tuple[frozenset[str], ...] = ()

    def render(self) -> str:
        lemma = f"{self.lemma}." if self.lemma is not None else ""
        sem = "".join(_render_sem(s) for s in sorted(self.sem))
        groups = "".join(":" + "".join(sorted(g)) for g in self.groups)
        return f"<{lemma}{self.pos}{sem}{groups}>"


def parse_mask(text: str) -> LexicalMask:
    """Parse ``<[lemma.]POS[+feat]*[:group]*>``."""
    text = text.strip()
    if len(text) < 3 or text[0] != "<" or text[-1] != ">":
        raise MalformedMask(f"mask must be written <...>: {text!r}")
    inner = text[1:-1]
    lemma = None
    head = inner.split(":", 1)[0]
    dot = head.rfind(".")
    if dot >= 0:
        lemma = inner[:dot]
        inner = inner[dot + 1:]
        if not lemma:
            raise MalformedMask(f"empty lemma in {text!r}")
    try:
        ann = parse_annotation(inner, cls=MalformedMask)
    except UnknownPos as exc:
        raise MalformedMask(str(exc)) from None
    except UnknownFeatureChar as exc:
        raise MalformedMask(str(exc)) from None
    groups = tuple(frozenset(g) for g in ann.codes)
    return LexicalMask(ann.pos, lemma, frozenset(ann.sem), groups)


_NOMINAL_POS = frozenset({"N", "NPr", "A", "EL"})


def code_satisfies(group: frozenset[str], code: str, pos: str = "") -> bool:
    if pos in _NOMINAL_POS:
        group = {"i" if c == "I" else c for c in group}
        code = code.replace("I", "i")
    return all(c in code for c in group)


def mask_matches(mask: LexicalMask, entry: DictEntry) -> bool:
    if mask.pos != entry.pos:
        return False
    if mask.lemma is not None and mask.lemma != entry.lemma:
        return False
    if mask.sem and not mask.sem <= set(entry.sem):
        return False
    if not mask.groups:
        return True
    return any(code_satisfies(g, c, entry.pos) for g in mask.groups for c in entry.codes)


def matching_codes(mask: LexicalMask, entry: DictEntry) -> tuple[str, ...]:
    """The entry codes that satisfy at least one mask group (all codes if the mask has none)."""
    if not mask.groups:
        return entry.codes
    return tuple(c for c in entry.codes if any(code_satisfies(g, c, entry.pos) for g in mask.groups))
