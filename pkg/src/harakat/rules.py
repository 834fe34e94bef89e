"""Typographical tolerance rules.

A rule file has one ``name=YES`` or ``name=NO`` line per rule; ``/`` starts
a comment.  Rules missing from the file are off.  The rule set decides, for
each piece of a fully vowelized dictionary form, which spellings are
acceptable in running text.

A dictionary form is cut into units, each with a context:

* a letter (``START`` of word, ``BEFORE_L`` when the next letter is ``l``,
  ``AFTER_DET`` when the word follows the determiner);
* a vowel ``a u i o`` or superscript alef ``R``;
* a nunation ``F N K`` (``END`` when word-final);
* a shadda cluster ``Gv``, ``Gn``, ``GR`` or a lone ``G``;
* the word-final combinations ``FA``/``FY``, ``GFA``/``GFY`` and
  ``AF``/``YF`` that take part in the fathatan inversion rules.

``realizations`` lists the text spellings of one unit.  The spelling set of
a whole form is the product over its units.
"""

from __future__ import annotations

import enum
import hashlib
import itertools
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable

from .alphabet import CORONAL, DIACRITICS, NUNATIONS

RULE_NAMES: tuple[str, ...] = (
    "fatha omission",
    "damma omission",
    "kasra omission",
    "sukun omission",
    "superscript alef omission",
    "fathatan omission at end",
    "dammatan omission at end",
    "kasratan omission at end",
    "shadda fatha omission at end",
    "shadda damma omission at end",
    "shadda kasra omission at end",
    "shadda fathatan omission at end",
    "shadda dammatan omission at end",
    "shadda kasratan omission at end",
    "shadda fatha omission",
    "shadda damma omission",
    "shadda kasra omission",
    "shadda superscript alef omission",
    "solar assimilation",
    "lunar assimilation",
    "Al with wasla",
    "alef hamza above O",
    "alef hamza below I to A",
    "alef hamza below I to L",
    "fathatan alef equiv alef fathatan",
    "fathatan alef maqsura equiv alef maqsura fathatan",
)

# Spellings found in the wild for two of the names.
ALIASES = {
    "alef hamza above O to A": "alef hamza above O",
    "shadda dammatar omission at end": "shadda dammatan omission at end",
}

_LOOKUP = {n.casefold(): n for n in RULE_NAMES}
_LOOKUP.update({a.casefold(): n for a, n in ALIASES.items()})

VOWEL_NAMES = {"a": "fatha", "u": "damma", "i": "kasra", "o": "sukun"}
NUNATION_NAMES = {"F": "fathatan", "N": "dammatan", "K": "kasratan"}
_VOWELS = frozenset(VOWEL_NAMES)

SUBSTITUTION_RULES = frozenset(
    {
        "solar assimilation",
        "lunar assimilation",
        "Al with wasla",
        "alef hamza above O",
        "alef hamza below I to A",
        "alef hamza below I to L",
        "fathatan alef equiv alef fathatan",
        "fathatan alef maqsura equiv alef maqsura fathatan",
    }
)
OMISSION_RULES = frozenset(RULE_NAMES) - SUBSTITUTION_RULES


class RuleError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)


class UnknownRuleName(RuleError):
    pass


class MalformedLine(RuleError):
    pass


def canonical_name(name: str) -> str | None:
    return _LOOKUP.get(" ".join(name.split()).casefold())


@dataclass(frozen=True)
class TypoRuleSet:
    enabled: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        unknown = set(self.enabled) - set(RULE_NAMES)
        if unknown:
            raise UnknownRuleName(f"unknown rule(s): {sorted(unknown)}")

    def __getitem__(self, name: str) -> bool:
        return name in self.enabled

    def with_rules(self, **changes: bool) -> "TypoRuleSet":
        """Copy with rules switched; keyword names use '_' for spaces."""
        enabled = set(self.enabled)
        for key, value in changes.items():
            name = canonical_name(key.replace("_", " "))
            if name is None:
                raise UnknownRuleName(f"unknown rule {key!r}")
            (enabled.add if value else enabled.discard)(name)
        return TypoRuleSet(frozenset(enabled))

    def restricted_to(self, names: Iterable[str]) -> "TypoRuleSet":
        return TypoRuleSet(self.enabled & frozenset(names))

    @classmethod
    def none(cls) -> "TypoRuleSet":
        return cls(frozenset())

    @classmethod
    def all(cls) -> "TypoRuleSet":
        return cls(frozenset(RULE_NAMES))

    @classmethod
    def default(cls) -> "TypoRuleSet":
        return load_rules(DEFAULT_RULES_PATH)

    def render(self) -> str:
        return "".join(f"{n}={'YES' if n in self.enabled else 'NO'}\n" for n in RULE_NAMES)

    def fingerprint(self) -> str:
        return hashlib.sha256(self.render().encode()).hexdigest()[:16]


DEFAULT_RULES_PATH = Path(__file__).with_name("data") / "typo-rules.txt"


def parse_rules(text: str | Iterable[str]) -> TypoRuleSet:
    lines = text.splitlines() if isinstance(text, str) else text
    enabled = set()
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("/", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise MalformedLine(f"expected name=YES|NO, got {raw.strip()!r}", lineno)
        key, value = line.rsplit("=", 1)
        name = canonical_name(key)
        if name is None:
            raise UnknownRuleName(f"unknown rule {key.strip()!r}", lineno)
        value = value.strip().upper()
        if value == "YES":
            enabled.add(name)
        elif value == "NO":
            enabled.discard(name)
        else:
            raise MalformedLine(f"value must be YES or NO, got {value!r}", lineno)
    return TypoRuleSet(frozenset(enabled))


def load_rules(path: str | Path) -> TypoRuleSet:
    with open(path, encoding="utf-8") as fh:
        return parse_rules(fh)


class Context(enum.IntFlag):
    NONE = 0
    START = 1
    END = 2
    AFTER_DET = 4
    BEFORE_L = 8


def assimilation_rule(letter: str) -> str:
    return "solar assimilation" if letter in CORONAL else "lunar assimilation"


def equiv_rule(letter: str) -> str:
    if letter == "A":
        return "fathatan alef equiv alef fathatan"
    return "fathatan alef maqsura equiv alef maqsura fathatan"


def _letter(rs: TypoRuleSet, c: str, ctx: Context) -> set[str]:
    out = {c}
    if ctx & Context.START:
        if c == "O" and rs["alef hamza above O"]:
            out.add("A")
        elif c == "I":
            if rs["alef hamza below I to A"]:
                out.add("A")
            if rs["alef hamza below I to L"]:
                out.add("L")
        elif c == "A" and ctx & Context.BEFORE_L and rs["Al with wasla"]:
            out.add("L")
        if ctx & Context.AFTER_DET and rs[assimilation_rule(c)]:
            out |= {x + "G" for x in out}
    return out


def realizations(rs: TypoRuleSet, unit: str, ctx: Context = Context.NONE) -> frozenset[str]:
    """Text spellings accepted for one dictionary unit in context."""
    return _realizations(rs, unit, Context(ctx))


@lru_cache(maxsize=4096)
def _realizations(rs: TypoRuleSet, unit: str, ctx: Context) -> frozenset[str]:
    end = bool(ctx & Context.END)
    out = {unit}
    if len(unit) == 1:
        c = unit
        if c in _VOWELS:
            if rs[VOWEL_NAMES[c] + " omission"]:
                out.add("")
        elif c == "R":
            if rs["superscript alef omission"]:
                out.add("")
        elif c in NUNATIONS:
            if end and rs[NUNATION_NAMES[c] + " omission at end"]:
                out.add("")
        elif c != "G":
            out = _letter(rs, c, ctx)
        return frozenset(out)
    first, second = unit[0], unit[1]
    if first == "G":
        if len(unit) == 3:  # GFA / GFY, word-final
            x = unit[2]
            if rs["fathatan omission at end"]:
                out.add("G" + x)
            if rs["shadda fathatan omission at end"]:
                out.add(x)
            if rs[equiv_rule(x)]:
                out.add("G" + x + "F")
        elif second in _VOWELS:
            if rs[VOWEL_NAMES[second] + " omission"]:
                out.add("G")
            if second != "o":
                name = "shadda " + VOWEL_NAMES[second] + " omission"
                if rs[name + " at end" if end else name]:
                    out.add("")
        elif second == "R":
            if rs["superscript alef omission"]:
                out.add("G")
            if rs["shadda superscript alef omission"]:
                out.add("")
        elif second in NUNATIONS and end:
            name = NUNATION_NAMES[second]
            if rs[name + " omission at end"]:
                out.add("G")
            if rs["shadda " + name + " omission at end"]:
                out.add("")
    elif first == "F":  # FA / FY, word-final
        if rs["fathatan omission at end"]:
            out.add(second)
        if rs[equiv_rule(second)]:
            out.add(second + "F")
    elif second == "F":  # AF / YF, word-final
        if rs["fathatan omission at end"]:
            out.add(first)
        if rs[equiv_rule(first)]:
            out.add("F" + first)
    return frozenset(out)


def units(surface: str, after_det: bool = False) -> list[tuple[str, Context]]:
    """Cut a dictionary form into realization units with their contexts."""
    out: list[tuple[str, Context]] = []
    n = len(surface)
    i = 0
    while i < n:
        c = surface[i]
        rest = surface[i + 1:]
        if c not in DIACRITICS:
            if c in "AY" and i > 0 and rest == "F":
                out.append((c + "F", Context.END))
                i += 2
                continue
            ctx = Context.NONE
            if i == 0:
                ctx |= Context.START
                if rest[:1] == "l":
                    ctx |= Context.BEFORE_L
                if after_det and rest[:1] != "G":
                    ctx |= Context.AFTER_DET
            out.append((c, ctx))
            i += 1
        elif c == "G":
            nxt = rest[:1]
            if nxt == "F" and len(rest) == 2 and rest[1] in "AY":
                out.append(("GF" + rest[1], Context.END))
                i += 3
            elif nxt and (nxt in _VOWELS or nxt == "R" or nxt in NUNATIONS):
                out.append(("G" + nxt, Context.END if i + 2 == n else Context.NONE))
                i += 2
            else:
                out.append(("G", Context.NONE))
                i += 1
        elif c == "F" and rest in ("A", "Y"):
            out.append(("F" + rest, Context.END))
            i += 2
        else:
            out.append((c, Context.END if i + 1 == n else Context.NONE))
            i += 1
    return out


@lru_cache(maxsize=8192)
def spellings(rs: TypoRuleSet, surface: str, after_det: bool = False) -> frozenset[str]:
    """Every accepted text spelling of a (short) dictionary form."""
    choices = [realizations(rs, u, ctx) for u, ctx in units(surface, after_det)]
    return frozenset("".join(p) for p in itertools.product(*choices))


def spelling_count(rs: TypoRuleSet, surface: str, after_det: bool = False) -> int:
    total = 1
    for u, ctx in units(surface, after_det):
        total *= len(realizations(rs, u, ctx))
    return total
