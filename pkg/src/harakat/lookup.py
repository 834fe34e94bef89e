"""Tolerant dictionary lookup, clitic segmentation, and text annotation.

The matcher walks the token and the dictionary automaton together.  At each
dictionary transition it asks the rule set which text spellings are allowed
(see ``rules``), so a token with some or all diacritics missing still finds
the fully vowelized forms it could stand for, while a token with a wrong
diacritic does not.

Agglutinated tokens (proclitics + word + enclitics) are handled by walking
an agglutination grammar: literal transitions match clitics, mask
transitions match dictionary words.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

from .alphabet import (
    LETTERS,
    TO_TBPP,
    TBPP_CHARS,
    from_translit,
    normalize_token,
    strip_diacritics,
    to_translit,
)
from .compiler import CompiledDictionary, digest
from .lexicon import DictEntry, mask_matches, matching_codes
from .morphgraph import EPS, GrammarSet, MorphGraph, Transition, build_agglutination, clitic_segment
from .rules import (
    NUNATION_NAMES,
    OMISSION_RULES,
    VOWEL_NAMES,
    TypoRuleSet,
    assimilation_rule,
    equiv_rule,
    spellings,
    spelling_count,
)

# ------------------------------------------------------------------ matching


class _Rules(NamedTuple):
    vowel: dict
    sh_vowel: dict
    sh_vowel_end: dict
    nun_end: dict
    sh_nun_end: dict
    r_omit: bool
    sh_r: bool
    equiv: dict
    rs: TypoRuleSet


@lru_cache(maxsize=64)
def _view(rs: TypoRuleSet) -> _Rules:
    return _Rules(
        vowel={v: rs[n + " omission"] for v, n in VOWEL_NAMES.items()},
        sh_vowel={v: rs[f"shadda {VOWEL_NAMES[v]} omission"] for v in "aui"},
        sh_vowel_end={v: rs[f"shadda {VOWEL_NAMES[v]} omission at end"] for v in "aui"},
        nun_end={n: rs[f"{name} omission at end"] for n, name in NUNATION_NAMES.items()},
        sh_nun_end={n: rs[f"shadda {name} omission at end"] for n, name in NUNATION_NAMES.items()},
        r_omit=rs["superscript alef omission"],
        sh_r=rs["shadda superscript alef omission"],
        equiv={x: rs[equiv_rule(x)] for x in "AY"},
        rs=rs,
    )


_NOEND, _NEED_L, _NO_G = 1, 2, 4


@lru_cache(maxsize=4096)
def _start_options(rs: TypoRuleSet, c: str, before_l: bool, after_det: bool) -> tuple:
    """Text spellings of a word-initial letter, with follow-up constraints."""
    opts = [(c, 0)]
    if c == "O" and rs["alef hamza above O"]:
        opts.append(("A", 0))
    elif c == "I":
        if rs["alef hamza below I to A"]:
            opts.append(("A", 0))
        if rs["alef hamza below I to L"]:
            opts.append(("L", 0))
    elif c == "A" and before_l and rs["Al with wasla"]:
        opts.append(("L", _NEED_L))
    if after_det and rs[assimilation_rule(c)]:
        opts += [(text + "G", flags | _NO_G) for text, flags in opts]
    return tuple(opts)


_LETTER = frozenset(LETTERS)


def match_prefixes(
    cd: CompiledDictionary,
    rs: TypoRuleSet,
    token: str,
    start: int = 0,
    after_det: bool = False,
    prefix: bool = True,
) -> set[tuple[int, str]]:
    """Dictionary surfaces that the text ``token[start:end]`` can spell.

    Returns (end, surface) pairs.  With ``prefix=False`` only matches that
    use the whole rest of the token are returned.
    """
    trans = cd.madfa.trans
    finals = cd.madfa.finals
    R = _view(rs)
    vowel, sh_vowel, sh_vowel_end = R.vowel, R.sh_vowel, R.sh_vowel_end
    nun_end, sh_nun_end, equiv = R.nun_end, R.sh_nun_end, R.equiv
    n = len(token)
    out: set[tuple[int, str]] = set()

    def record(p: int, surface: str) -> None:
        if prefix or p == n:
            out.add((p, surface))

    def rec(s: int, p: int, d: str, flags: int) -> None:
        if finals[s] is not None and not flags & (_NOEND | _NEED_L) and (prefix or p == n):
            out.add((p, d))
        edges = trans[s]
        if not edges:
            return
        tc = token[p] if p < n else ""
        if flags & _NEED_L:
            t = edges.get("l")
            if t is not None and tc == "l":
                rec(t, p + 1, d + "l", 0)
            return
        for c, t in edges.items():
            if c in _LETTER:
                if not d:
                    opts = _start_options(rs, c, "l" in trans[t], after_det)
                    for text, fl in opts:
                        if token.startswith(text, p):
                            rec(t, p + len(text), c, fl)
                    continue
                if tc == c:
                    rec(t, p + 1, d + c, 0)
                if c in "AY" and equiv[c]:
                    u = trans[t].get("F")
                    if u is not None and finals[u] is not None and token.startswith("F" + c, p):
                        record(p + 2, d + c + "F")
            elif c in "auio":
                if tc == c:
                    rec(t, p + 1, d + c, 0)
                if vowel[c]:
                    rec(t, p, d + c, 0)
            elif c == "G":
                if flags & _NO_G:
                    continue
                if tc == "G":
                    rec(t, p + 1, d + "G", 0)
                for x, u in trans[t].items():
                    if x in "aui":
                        if sh_vowel[x]:
                            rec(u, p, d + "G" + x, _NOEND)
                        if sh_vowel_end[x] and finals[u] is not None:
                            record(p, d + "G" + x)
                    elif x == "R":
                        if R.sh_r:
                            rec(u, p, d + "GR", 0)
                    elif x in "FNK" and sh_nun_end[x]:
                        if finals[u] is not None:
                            record(p, d + "G" + x)
                        if x == "F":
                            for X in "AY":
                                w = trans[u].get(X)
                                if w is not None and finals[w] is not None and tc == X:
                                    record(p + 1, d + "GF" + X)
            elif c in "FNK":
                if tc == c:
                    rec(t, p + 1, d + c, 0)
                if nun_end[c]:
                    if finals[t] is not None:
                        record(p, d + c)
                    if c == "F":
                        for X in "AY":
                            w = trans[t].get(X)
                            if w is not None and finals[w] is not None and tc == X:
                                record(p + 1, d + "F" + X)
                if c == "F":
                    for X in "AY":
                        if equiv[X]:
                            w = trans[t].get(X)
                            if w is not None and finals[w] is not None and token.startswith(X + "F", p):
                                record(p + 2, d + "F" + X)
            elif c == "R":
                if tc == "R":
                    rec(t, p + 1, d + "R", 0)
                if R.r_omit:
                    rec(t, p, d + "R", 0)
            elif tc == c:
                rec(t, p + 1, d + c, 0)

    rec(0, start, "", 0)
    return out


def match_token(
    cd: CompiledDictionary | Sequence[CompiledDictionary],
    rs: TypoRuleSet,
    token: str,
    after_det: bool = False,
) -> set[tuple[str, DictEntry]]:
    """All (dictionary surface, entry) pairs the whole token can stand for."""
    dictionaries = [cd] if isinstance(cd, CompiledDictionary) else list(cd)
    token = normalize_token(token)
    result = set()
    for d in dictionaries:
        for _, surface in match_prefixes(d, rs, token, 0, after_det, prefix=False):
            for entry in d.entries_for(surface):
                result.add((surface, entry))
    return result


# ------------------------------------------------------------------ analyses


@dataclass(frozen=True)
class Segment:
    written: str
    restored: str
    lemma: str
    pos: str
    sem: tuple[str, ...] = ()
    codes: tuple[str, ...] = ()
    clitic: bool = False

    @property
    def tag(self) -> str:
        sem = "".join(s if s.startswith("-") else "+" + s for s in self.sem)
        return self.pos + sem + "".join(":" + c for c in self.codes)

    def render(self) -> str:
        return f"{self.written}.{self.restored}.{self.lemma}.{self.tag}"

    def as_dict(self) -> dict:
        return {
            "written": self.written,
            "restored": self.restored,
            "lemma": self.lemma,
            "pos": self.pos,
            "sem": list(self.sem),
            "codes": list(self.codes),
            "clitic": self.clitic,
        }


@dataclass(frozen=True)
class Analysis:
    token: str
    segments: tuple[Segment, ...]

    @property
    def restored(self) -> str:
        return "".join(s.restored for s in self.segments)

    def render(self) -> str:
        return "".join("{" + s.render() + "}" for s in self.segments)

    def as_dict(self) -> dict:
        return {
            "restored": self.restored,
            "segments": [s.as_dict() for s in self.segments],
        }


def _core_segment(written: str, surface: str, entry: DictEntry, codes=None) -> Segment:
    restored = surface
    # An assimilation shadda written after the determiner is shown in the
    # restored form even though the dictionary form does not carry it.
    if len(written) > 1 and written[1] == "G" and surface[1:2] != "G":
        restored = surface[0] + "G" + surface[1:]
    return Segment(
        written,
        restored,
        entry.lemma,
        entry.pos,
        entry.sem,
        entry.codes if codes is None else codes,
    )


def _pronoun_constraints_hold(segments: Sequence[Segment]) -> bool:
    for i, seg in enumerate(segments):
        nxt = segments[i + 1] if i + 1 < len(segments) else None
        followed_by_pronoun = nxt is not None and nxt.pos == "PRO"
        if "nopro" in seg.sem and followed_by_pronoun:
            return False
        if "pro" in seg.sem and not followed_by_pronoun:
            return False
    return True


class _FlatNav:
    """Walk a flattened agglutination automaton."""

    def __init__(self, fst: MorphGraph):
        self.fst = fst

    def start(self):
        return self.fst.initial

    def is_final(self, config) -> bool:
        return config in self.fst.finals

    def edges(self, config) -> Iterator[tuple[Transition, object]]:
        for t in self.fst.out(config):
            yield t, t.dst


_RETURN = Transition(-1, -1, EPS, "")


class _RtnNav:
    """Walk an agglutination grammar without flattening it (calls on a stack)."""

    def __init__(self, graphs: GrammarSet, root: str):
        self.graphs = graphs
        self.root = root
        for g in graphs.values():
            for t in g.transitions:
                if t.label.kind == "lit":
                    clitic_segment(t)

    def start(self):
        return (self.root, self.graphs[self.root].initial, ())

    def is_final(self, config) -> bool:
        name, q, stack = config
        return not stack and q in self.graphs[name].finals

    def edges(self, config):
        name, q, stack = config
        g = self.graphs[name]
        if q in g.finals and stack:
            (rname, rstate), rest = stack[-1], stack[:-1]
            yield _RETURN, (rname, rstate, rest)
        for t in g.out(q):
            if t.label.kind == "call":
                sub = self.graphs[str(t.label.value)]
                if len(stack) < 64:
                    yield _RETURN, (sub.name, sub.initial, stack + ((name, t.dst),))
            else:
                yield t, (name, t.dst, stack)


@dataclass
class TokenCache:
    """Token -> analyses, valid for one (dictionaries, rules, grammar) setup."""

    fingerprint: str = ""
    table: dict = field(default_factory=dict)
    hits: int = 0
    misses: int = 0

    def bind(self, fingerprint: str) -> None:
        if fingerprint != self.fingerprint:
            self.table.clear()
            self.fingerprint = fingerprint

    def __len__(self) -> int:
        return len(self.table)


class Analyzer:
    """Analyze tokens against compiled dictionaries under a rule set.

    ``grammar`` is either None (whole tokens are looked up), a flattened
    agglutination automaton, or a ``(GrammarSet, root)`` pair.  With
    ``flatten=False`` a grammar set is interpreted directly instead of being
    flattened first.
    """

    def __init__(
        self,
        dictionaries: CompiledDictionary | Sequence[CompiledDictionary],
        rules: TypoRuleSet,
        grammar: MorphGraph | tuple[GrammarSet, str] | None = None,
        cache: bool = True,
        flatten: bool = True,
    ):
        self._fingerprint: str | None = None
        self.dictionaries = dictionaries
        self.rules = rules
        self.grammar_text = ""
        if isinstance(grammar, tuple):
            graphs, root = grammar
            self.grammar_text = graphs.render() + "\nroot " + root
            if flatten:
                self.nav = _FlatNav(build_agglutination(graphs, root))
            else:
                self.nav = _RtnNav(graphs, root)
        elif grammar is not None:
            self.grammar_text = grammar.render()
            self.nav = _FlatNav(grammar)
        else:
            self.nav = None
        self.cache = TokenCache() if cache else None
        self.traversals = 0

    # Changing the dictionaries or the rules changes the fingerprint, which
    # empties the token cache on its next use.
    @property
    def dictionaries(self) -> list[CompiledDictionary]:
        return self._dictionaries

    @dictionaries.setter
    def dictionaries(self, value) -> None:
        self._dictionaries = [value] if isinstance(value, CompiledDictionary) else list(value)
        self._fingerprint = None

    @property
    def rules(self) -> TypoRuleSet:
        return self._rules

    @rules.setter
    def rules(self, value: TypoRuleSet) -> None:
        self._rules = value
        self._clitics: dict = {}
        self._fingerprint = None

    @property
    def fingerprint(self) -> str:
        if self._fingerprint is None:
            h = hashlib.sha256()
            for d in self.dictionaries:
                h.update(digest(d).encode())
            h.update(self.rules.fingerprint().encode())
            h.update(self.grammar_text.encode())
            self._fingerprint = h.hexdigest()
        return self._fingerprint

    def analyze(self, token: str) -> list[Analysis]:
        """Sorted list of analyses (empty for an unknown token)."""
        token = normalize_token(token)
        cache = self.cache
        if cache is None:
            return self._compute(token)
        cache.bind(self.fingerprint)
        found = cache.table.get(token)
        if found is not None:
            cache.hits += 1
            return found
        cache.misses += 1
        result = self._compute(token)
        cache.table[token] = result
        return result

    def _compute(self, token: str) -> list[Analysis]:
        self.traversals += 1
        if not token:
            return []
        if self.nav is None:
            analyses = {
                Analysis(token, (_core_segment(token, surface, entry),))
                for surface, entry in match_token(self.dictionaries, self.rules, token)
            }
        else:
            analyses = self._segment(token)
        return sorted(analyses, key=lambda a: a.render())

    def _words_at(self, token: str, p: int, after_det: bool, memo: dict) -> list:
        key = (p, after_det)
        found = memo.get(key)
        if found is None:
            found = []
            for d in self.dictionaries:
                for end, surface in match_prefixes(d, self.rules, token, p, after_det):
                    if end > p:
                        found.append((end, surface, d.entries_for(surface)))
            memo[key] = found
        return found

    def _clitic(self, t: Transition) -> tuple[DictEntry, frozenset[str]]:
        found = self._clitics.get(t)
        if found is None:
            entry = clitic_segment(t)
            found = (entry, spellings(self.rules, str(t.label.value)))
            self._clitics[t] = found
        return found

    def _segment(self, token: str) -> set[Analysis]:
        nav = self.nav
        n = len(token)
        memo: dict = {}
        results: set[Analysis] = set()
        seen = set()
        stack = [(nav.start(), 0, False, ())]
        while stack:
            config, p, after_det, segs = stack.pop()
            key = (config, p, after_det, segs)
            if key in seen:
                continue
            seen.add(key)
            if p == n and segs and nav.is_final(config) and _pronoun_constraints_hold(segs):
                results.add(Analysis(token, segs))
            for t, nxt in nav.edges(config):
                kind = t.label.kind
                if kind == "eps":
                    stack.append((nxt, p, after_det, segs))
                elif kind == "lit":
                    entry, texts = self._clitic(t)
                    for text in texts:
                        if text and token.startswith(text, p):
                            seg = Segment(
                                text, entry.surface, entry.lemma, entry.pos, entry.sem, entry.codes, True
                            )
                            stack.append((nxt, p + len(text), entry.pos == "DET", segs + (seg,)))
                elif kind == "mask":
                    mask = t.label.value
                    for end, surface, entries in self._words_at(token, p, after_det, memo):
                        written = token[p:end]
                        for entry in entries:
                            if mask_matches(mask, entry):
                                seg = _core_segment(written, surface, entry, matching_codes(mask, entry))
                                stack.append((nxt, end, False, segs + (seg,)))
        return results


def analyze_token(
    cd: CompiledDictionary | Sequence[CompiledDictionary],
    rs: TypoRuleSet,
    agg: MorphGraph | tuple[GrammarSet, str] | None,
    token: str,
) -> list[Analysis]:
    return Analyzer(cd, rs, agg, cache=False).analyze(token)


def analyze_cached(analyzer: Analyzer, token: str) -> list[Analysis]:
    if analyzer.cache is None:
        analyzer.cache = TokenCache()
    return analyzer.analyze(token)


# ---------------------------------------------------------------- text level

_ARABIC_RUN = re.compile("[" + "".join(re.escape(c) for c in TO_TBPP) + "]+")
_TBPP_RUN = re.compile("[" + "".join(re.escape(c) for c in sorted(TBPP_CHARS)) + "]+")


def tokenize(text: str, encoding: str = "tbpp") -> Iterator[tuple[str, str]]:
    """Yield (token as written, TB++ form) for each word of the text."""
    if encoding == "arabic":
        for m in _ARABIC_RUN.finditer(text):
            written = m.group(0)
            tb = normalize_token(to_translit(written))
            if tb:
                yield written, tb
    else:
        for m in _TBPP_RUN.finditer(text):
            written = m.group(0)
            tb = normalize_token(written)
            if tb:
                yield written, tb


def annotate_text(
    analyzer: Analyzer, text: str | Iterable[str], encoding: str = "tbpp"
) -> Iterator[tuple[str, list[Analysis]]]:
    """(written token, analyses) for every token, in order."""
    lines = [text] if isinstance(text, str) else text
    for line in lines:
        for written, tb in tokenize(line, encoding):
            yield written, analyzer.analyze(tb)


def to_arabic_analysis(a: Analysis) -> Analysis:
    segs = tuple(
        Segment(
            from_translit(s.written),
            from_translit(s.restored),
            from_translit(s.lemma),
            s.pos,
            s.sem,
            s.codes,
            s.clitic,
        )
        for s in a.segments
    )
    return Analysis(from_translit(a.token), segs)


class Flag(NamedTuple):
    index: int
    token: str
    kind: str  # INVALID_DIACRITIC or UNKNOWN_WORD


def spellcheck(
    analyzer: Analyzer, text: str | Iterable[str], encoding: str = "tbpp"
) -> list[Flag]:
    """Flag unknown tokens; a token whose bare skeleton is known gets INVALID_DIACRITIC."""
    lenient = Analyzer(
        analyzer.dictionaries,
        TypoRuleSet(analyzer.rules.enabled | OMISSION_RULES),
        None,
        cache=True,
    )
    lenient.nav = analyzer.nav
    lenient.grammar_text = analyzer.grammar_text
    flags = []
    lines = [text] if isinstance(text, str) else text
    index = 0
    for line in lines:
        for written, tb in tokenize(line, encoding):
            if not analyzer.analyze(tb):
                skeleton, _ = strip_diacritics(tb)
                kind = "INVALID_DIACRITIC" if lenient.analyze(skeleton) else "UNKNOWN_WORD"
                flags.append(Flag(index, written, kind))
            index += 1
    return flags


def count_partial_forms(cd: CompiledDictionary, rs: TypoRuleSet | None = None) -> int:
    """Number of distinct text spellings summed over all dictionary forms.

    By default the shipped rules are used with only the omission rules
    switched on, so each form with d plain omissible marks counts 2**d.
    """
    if rs is None:
        rs = TypoRuleSet.default().restricted_to(OMISSION_RULES)
    return sum(spelling_count(rs, s) for s in cd.surfaces())


