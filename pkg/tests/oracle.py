"""Slow, simple reference implementations used to check the library.

Nothing here is shared with the matcher or the automaton builder except the
per-unit realization table in ``harakat.rules``.  The oracle cuts surfaces
into units with its own regular expression, spells every surface as one big
regular expression, and minimizes automata by partition refinement over a
trie.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from dataclasses import dataclass

from harakat.alphabet import DIACRITICS
from harakat.rules import Context, TypoRuleSet, realizations

_UNIT = re.compile(
    r"""
      G F [AY] $          # shadda + fathatan + alef/alef maqsura, word-final
    | F [AY] $            # fathatan + alef/alef maqsura, word-final
    | (?<=.) [AY] F $     # alef/alef maqsura + fathatan, word-final
    | G [auioRFNK]        # shadda cluster
    | .                   # anything else on its own
    """,
    re.VERBOSE,
)

SHORT = "auio"


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class EnumBudget:
    max_forms: int = 200_000
    max_diacritics: int = 20


def segment(surface: str, after_det: bool = False) -> list[tuple[str, Context]]:
    pieces = [m.group(0) for m in _UNIT.finditer(surface)]
    assert "".join(pieces) == surface
    out = []
    pos = 0
    for k, piece in enumerate(pieces):
        ctx = Context.NONE
        end = pos + len(piece) == len(surface)
        if k == 0 and piece not in DIACRITICS and len(piece) == 1:
            ctx |= Context.START
            if surface[1:2] == "l":
                ctx |= Context.BEFORE_L
            if after_det and surface[1:2] != "G":
                ctx |= Context.AFTER_DET
        elif end and (piece[0] in DIACRITICS or len(piece) > 1):
            ctx |= Context.END
        out.append((piece, ctx))
        pos += len(piece)
    return out


def unit_choices(surface: str, rs: TypoRuleSet, after_det: bool = False) -> list[list[str]]:
    return [sorted(realizations(rs, u, ctx)) for u, ctx in segment(surface, after_det)]


def enumerate_partial(
    surface: str,
    rs: TypoRuleSet,
    after_det: bool = False,
    budget: EnumBudget = EnumBudget(),
) -> set[str]:
    """Every text spelling of ``surface``, by brute-force product."""
    if sum(c in DIACRITICS for c in surface) > budget.max_diacritics:
        raise BudgetExceeded(f"{surface!r} has too many diacritics")
    choices = unit_choices(surface, rs, after_det)
    size = 1
    for c in choices:
        size *= len(c)
    if size > budget.max_forms:
        raise BudgetExceeded(f"{surface!r} has {size} spellings")
    return {"".join(p) for p in itertools.product(*choices)}


def spelling_regex(surface: str, rs: TypoRuleSet, after_det: bool = False) -> re.Pattern:
    parts = []
    for options in unit_choices(surface, rs, after_det):
        alts = sorted(options, key=lambda o: (-len(o), o))
        parts.append("(?:" + "|".join(re.escape(o) for o in alts) + ")")
    return re.compile("".join(parts))


def coarse_key(text: str) -> str:
    """Letters only, with every alef spelling folded to A.

    Every spelling of a surface has the same key as the surface itself (the
    rules only touch diacritics and alef variants), so comparing against the
    surfaces that share a token's key is the same as scanning them all.
    """
    return "".join("A" if c in "OIL" else c for c in text if c not in DIACRITICS)


class NaiveLookup:
    """Reference tolerant lookup over a list of entries."""

    def __init__(self, entries, rs: TypoRuleSet):
        self.rs = rs
        self.by_key: dict[str, dict[str, list]] = {}
        for e in entries:
            self.by_key.setdefault(coarse_key(e.surface), {}).setdefault(e.surface, []).append(e)
        self._regex: dict = {}

    def _pattern(self, surface: str, after_det: bool) -> re.Pattern:
        key = (surface, after_det)
        pat = self._regex.get(key)
        if pat is None:
            pat = self._regex[key] = spelling_regex(surface, self.rs, after_det)
        return pat

    def lookup(self, token: str, after_det: bool = False) -> set:
        found = set()
        for surface, entries in self.by_key.get(coarse_key(token), {}).items():
            if self._pattern(surface, after_det).fullmatch(token):
                found.update((surface, e) for e in entries)
        return found

    def scan(self, token: str, after_det: bool = False) -> set:
        """Unindexed version of lookup, for checking the index."""
        found = set()
        for group in self.by_key.values():
            for surface, entries in group.items():
                if self._pattern(surface, after_det).fullmatch(token):
                    found.update((surface, e) for e in entries)
        return found


def naive_lookup(entries, rs: TypoRuleSet, token: str, after_det: bool = False) -> set:
    return NaiveLookup(entries, rs).lookup(token, after_det)


def reference_minimize(strings, outputs: dict | None = None) -> int:
    """State count of the minimal DFA for a finite language.

    Builds a trie and refines the partition {final by output, non-final}
    until transitions respect it (Moore's algorithm).
    """
    children: list[dict[str, int]] = [{}]
    final: list[object] = [None]
    for s in strings:
        q = 0
        for ch in s:
            nxt = children[q].get(ch)
            if nxt is None:
                nxt = len(children)
                children[q][ch] = nxt
                children.append({})
                final.append(None)
            q = nxt
        final[q] = outputs[s] if outputs is not None else True
    block = {}
    cls = [block.setdefault(("F", f) if f is not None else ("N",), len(block)) for f in final]
    count = len(set(cls))
    while True:
        sigs: dict = {}
        new = []
        for q in range(len(children)):
            sig = (cls[q], tuple(sorted((c, cls[t]) for c, t in children[q].items())))
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == count:
            return count
        cls, count = new, len(sigs)


def mutate(surface: str, max_slots: int = 6) -> set[str]:
    """Spellings with a wrong diacritic somewhere.

    * every present diacritic replaced by each other diacritic;
    * every diacritic inserted after a letter that has no mark;
    * for up to ``max_slots`` short-vowel slots, every combination of wrong
      short vowels (at least one slot wrong).
    """
    out = set()
    for i, c in enumerate(surface):
        if c in DIACRITICS:
            for d in sorted(DIACRITICS - {c}):
                out.add(surface[:i] + d + surface[i + 1:])
    for i, c in enumerate(surface):
        nxt = surface[i + 1:i + 2]
        if c not in DIACRITICS and nxt not in DIACRITICS or (c not in DIACRITICS and not nxt):
            for d in sorted(DIACRITICS):
                out.add(surface[:i + 1] + d + surface[i + 1:])
    slots = [i for i, c in enumerate(surface) if c in SHORT]
    if 0 < len(slots) <= max_slots:
        options = [[surface[i]] + [v for v in SHORT if v != surface[i]] for i in slots]
        for combo in itertools.product(*options):
            chars = list(surface)
            for i, v in zip(slots, combo):
                chars[i] = v
            out.add("".join(chars))
    out.discard(surface)
    return out


def lcs_length(a: str, b: str) -> int:
    """Length of a longest common subsequence, by memoized recursion."""

    @lru_cache(maxsize=None)
    def go(i: int, j: int) -> int:
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + go(i + 1, j + 1)
        return max(go(i + 1, j), go(i, j + 1))

    return go(0, 0)


def rtn_sequences(graphs, root: str, max_len: int = 8, depth: int = 24) -> set[tuple[str, ...]]:
    """Label sequences of a grammar set, by plain recursion over calls.

    Each step renders as the grammar label plus ``/output``; ε steps only
    contribute their output.  Sequences longer than ``max_len`` are dropped.
    """

    def step(t) -> tuple[str, ...]:
        if t.label.kind == "eps":
            return (t.output,) if t.output else ()
        return (t.label.render() + ("/" + t.output if t.output else ""),)

    @lru_cache(maxsize=None)
    def from_state(name: str, q: int, budget: int) -> frozenset:
        g = graphs[name]
        found = {()} if q in g.finals else set()
        if budget == 0:
            return frozenset(found)
        for t in g.out(q):
            if t.label.kind == "call":
                sub = graphs[str(t.label.value)]
                heads = {
                    ((t.output,) if t.output else ()) + s
                    for s in from_state(sub.name, sub.initial, budget - 1)
                }
            else:
                heads = {step(t)}
            for head in heads:
                if len(head) > max_len:
                    continue
                for tail in from_state(name, t.dst, budget - 1):
                    if len(head) + len(tail) <= max_len:
                        found.add(head + tail)
        return frozenset(found)

    return set(from_state(root, graphs[root].initial, depth))
