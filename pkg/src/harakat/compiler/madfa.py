"""Minimal acyclic DFA over dictionary surfaces.

Construction is the incremental algorithm for sorted input (Daciuk, Mihov,
Watson and Watson 2000): words arrive in order, and once a branch can no
longer change it is merged with an equivalent registered state.  Two states
are equivalent when they carry the same output set and the same
transitions to already-merged children, so the result is minimal without a
separate minimization pass.

Final states carry a sorted tuple of indices into the INF table (the list of
distinct compact tags).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from ..lexicon import DictEntry, entry_from_annotation
from .compact import TagMode, apply_compact_tag, compute_compact_tag, parsed_tag

Output = tuple[int, ...]


class _Node:
    __slots__ = ("edges", "out", "num")

    def __init__(self) -> None:
        self.edges: dict[str, _Node] = {}
        self.out: Output | None = None
        self.num = -1

    def key(self) -> tuple:
        return (self.out, tuple((c, n.num) for c, n in self.edges.items()))


@dataclass
class Madfa:
    """States are numbered so that every transition goes to a larger number."""

    trans: list[dict[str, int]]
    finals: list[Output | None]

    @property
    def n_states(self) -> int:
        return len(self.trans)

    @property
    def n_transitions(self) -> int:
        return sum(len(t) for t in self.trans)

    def walk(self, word: str, state: int = 0) -> int | None:
        trans = self.trans
        for ch in word:
            state = trans[state].get(ch)
            if state is None:
                return None
        return state

    def lookup(self, word: str) -> Output | None:
        state = self.walk(word)
        return None if state is None else self.finals[state]

    def __contains__(self, word: str) -> bool:
        return self.lookup(word) is not None

    def items(self) -> Iterator[tuple[str, Output]]:
        """All (word, output) pairs in sorted order."""
        stack = [(0, "")]
        while stack:
            state, prefix = stack.pop()
            out = self.finals[state]
            if out is not None:
                yield prefix, out
            for ch, nxt in sorted(self.trans[state].items(), reverse=True):
                stack.append((nxt, prefix + ch))


def build_madfa(pairs: Iterable[tuple[str, Output]]) -> Madfa:
    """Build from (word, output) pairs sorted by word with no duplicates."""
    register: dict[tuple, _Node] = {}
    counter = 0

    def merge(parent: _Node, ch: str) -> None:
        nonlocal counter
        child = parent.edges[ch]
        k = child.key()
        existing = register.get(k)
        if existing is not None:
            parent.edges[ch] = existing
        else:
            child.num = counter
            counter += 1
            register[k] = child

    root = _Node()
    path = [root]
    prev = ""
    for word, out in pairs:
        if word <= prev and prev:
            raise ValueError(f"input not sorted or duplicated at {word!r}")
        common = 0
        limit = min(len(prev), len(word))
        while common < limit and prev[common] == word[common]:
            common += 1
        for depth in range(len(prev), common, -1):
            merge(path[depth - 1], prev[depth - 1])
        del path[common + 1:]
        node = path[common]
        for ch in word[common:]:
            nxt = _Node()
            node.edges[ch] = nxt
            path.append(nxt)
            node = nxt
        node.out = out
        prev = word
    for depth in range(len(prev), 0, -1):
        merge(path[depth - 1], prev[depth - 1])
    return _freeze(root)


def _freeze(root: _Node) -> Madfa:
    # Reverse postorder gives a topological numbering with the root at 0.
    order: list[_Node] = []
    seen: set[int] = set()
    stack: list[tuple[_Node, Iterator[_Node]]] = [(root, iter(root.edges.values()))]
    seen.add(id(root))
    while stack:
        node, children = stack[-1]
        for child in children:
            if id(child) not in seen:
                seen.add(id(child))
                stack.append((child, iter(child.edges.values())))
                break
        else:
            stack.pop()
            order.append(node)
    order.reverse()
    number = {id(n): i for i, n in enumerate(order)}
    trans = [{c: number[id(n)] for c, n in node.edges.items()} for node in order]
    finals = [node.out for node in order]
    return Madfa(trans, finals)


@dataclass
class CompiledDictionary:
    madfa: Madfa
    inf: list[str]
    mode: TagMode
    entry_count: int
    _expanded: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n_states(self) -> int:
        return self.madfa.n_states

    @property
    def n_transitions(self) -> int:
        return self.madfa.n_transitions

    def entries_for(self, surface: str, out: Output | None = None) -> list[DictEntry]:
        """Every dictionary entry whose surface is ``surface``."""
        if out is None:
            out = self.madfa.lookup(surface)
            if out is None:
                return []
        cache = self._expanded
        result = []
        for idx in out:
            key = (surface, idx)
            entry = cache.get(key)
            if entry is None:
                tag = parsed_tag(self.inf[idx], self.mode)
                lemma = apply_compact_tag(surface, tag)
                entry = entry_from_annotation(surface, lemma, tag.annotation)
                if len(cache) < 200_000:
                    cache[key] = entry
            result.append(entry)
        return result

    def entries(self) -> Iterator[DictEntry]:
        for surface, out in self.madfa.items():
            yield from self.entries_for(surface, out)

    def surfaces(self) -> Iterator[str]:
        for surface, _ in self.madfa.items():
            yield surface

    def inf_listing(self) -> str:
        """Human-readable INF table; Semitic tags carry a ``__`` marker."""
        marker = "__" if self.mode is TagMode.SEMITIC else ""
        return "".join(f"{marker}{tag}\n" for tag in self.inf)


def build(entries: Iterable[DictEntry], mode: TagMode) -> CompiledDictionary:
    """Compile entries into a minimal automaton plus INF table."""
    by_surface: dict[str, set[str]] = {}
    count = 0
    seen: set[DictEntry] = set()
    for entry in entries:
        if entry in seen:
            continue
        seen.add(entry)
        count += 1
        tag = compute_compact_tag(entry.surface, entry.lemma, entry.annotation, mode).render()
        by_surface.setdefault(entry.surface, set()).add(tag)
    inf = sorted({t for tags in by_surface.values() for t in tags})
    index = {t: i for i, t in enumerate(inf)}
    pairs = (
        (s, tuple(sorted(index[t] for t in by_surface[s]))) for s in sorted(by_surface)
    )
    return CompiledDictionary(build_madfa(pairs), inf, mode, count)
