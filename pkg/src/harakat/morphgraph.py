"""Graph grammars: a small text format, flattening, and inflection.

A grammar file holds one or more graphs::

    # comments start with '#'
    graph N0_i_0ap-f-At
    initial 0
    final 2
    0 -> 1 : <LEMMA>
    0 -> 1 : 1 "i" <3.LEMMA>
    1 -> 2 : L L "Aat" :N-Sfx-uiiNKK / N:fp

A transition line is ``SRC -> DST : ITEMS [/ OUTPUT]``.  States are any
names without spaces; ``initial`` defaults to ``0``.  Items are applied
left to right:

``"text"``
    literal text (written letters, or a clitic in agglutination grammars)
``L`` / ``R``
    move the cursor one letter left / right
``<LEMMA>``, ``<k.LEMMA>``
    copy the whole lemma, or the lemma from its k-th letter (1-based)
``3`` or ``{12}``
    copy letter k of the lemma (1-based)
``:NAME``
    call graph NAME
``<E>``
    empty step
``<N:G>`` and other masks
    a dictionary slot (agglutination grammars only)

Any other bare character is a one-letter literal, so ``1u3a5`` reads as
slot 1, ``u``, slot 3, ``a``, slot 5.  The output, if any, belongs to the
first item of the line.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

from .lexicon import (
    DictEntry,
    FlatDictionary,
    LexicalMask,
    LexiconError,
    MalformedMask,
    parse_entry,
    parse_mask,
)


class GrammarError(ValueError):
    pass


class UnresolvedSubgraph(GrammarError):
    pass


class MalformedLabel(GrammarError):
    pass


class NoFinalState(GrammarError):
    pass


class RecursiveGrammar(GrammarError):
    pass


class UnknownClass(GrammarError):
    pass


class InflectionError(ValueError):
    pass


class CursorUnderflow(InflectionError):
    pass


class CursorOverflow(InflectionError):
    pass


class SlotOutOfRange(InflectionError):
    pass


class Label(NamedTuple):
    kind: str  # lit, L, R, lemma, lemma_from, slot, call, mask, eps
    value: object = None

    def render(self) -> str:
        k, v = self.kind, self.value
        if k == "lit":
            return '"' + str(v).replace("\\", "\\\\").replace('"', '\\"') + '"'
        if k in ("L", "R"):
            return k
        if k == "lemma":
            return "<LEMMA>"
        if k == "lemma_from":
            return f"<{v}.LEMMA>"
        if k == "slot":
            return str(v) if int(v) < 10 else "{%d}" % v
        if k == "call":
            return ":" + str(v)
        if k == "mask":
            return v.render()
        return "<E>"


EPS = Label("eps")


class Transition(NamedTuple):
    src: int
    dst: int
    label: Label
    output: str = ""


@dataclass
class MorphGraph:
    name: str
    n_states: int
    initial: int
    finals: frozenset[int]
    transitions: list[Transition]
    state_names: list[str] = field(default_factory=list)
    _out: list[list[Transition]] | None = field(default=None, repr=False, compare=False)

    def out(self, state: int) -> list[Transition]:
        if self._out is None:
            table: list[list[Transition]] = [[] for _ in range(self.n_states)]
            for t in self.transitions:
                table[t.src].append(t)
            self._out = table
        return self._out[state]

    def calls(self) -> set[str]:
        return {str(t.label.value) for t in self.transitions if t.label.kind == "call"}

    def render(self) -> str:
        names = self.state_names or [str(i) for i in range(self.n_states)]
        lines = [f"graph {self.name}", f"initial {names[self.initial]}"]
        lines.append("final " + " ".join(names[q] for q in sorted(self.finals)))
        for t in self.transitions:
            out = f" / {t.output}" if t.output else ""
            lines.append(f"{names[t.src]} -> {names[t.dst]} : {t.label.render()}{out}")
        return "\n".join(lines) + "\n"


class FlattenedFst(MorphGraph):
    """A graph with every subgraph call inlined."""


class GrammarSet(dict):
    """Graphs by name, in file order."""

    def check(self) -> None:
        for graph in self.values():
            for name in graph.calls():
                if name not in self:
                    raise UnresolvedSubgraph(f"graph {graph.name} calls unknown graph {name!r}")

    def render(self) -> str:
        return "\n".join(g.render() for g in self.values())


_ITEM = re.compile(
    r'\s*(?:"((?:[^"\\]|\\.)*)"|(<[^>]*>)|:(\S+)|\{(\d+)\}|(\d)|(\S))'
)
_LEMMA_FROM = re.compile(r"<(\d+)\.LEMMA>")


def parse_items(text: str, lineno: int | None = None) -> list[Label]:
    items: list[Label] = []
    pos = 0
    text = text.rstrip()
    where = f"line {lineno}: " if lineno else ""
    while pos < len(text):
        m = _ITEM.match(text, pos)
        if m is None:
            raise MalformedLabel(f"{where}cannot read label {text[pos:]!r}")
        pos = m.end()
        lit, angle, call, big, digit, char = m.groups()
        if lit is not None:
            if not lit:
                raise MalformedLabel(f"{where}empty literal")
            items.append(Label("lit", re.sub(r"\\(.)", r"\1", lit)))
        elif angle is not None:
            if angle == "<E>":
                items.append(EPS)
            elif angle == "<LEMMA>":
                items.append(Label("lemma"))
            elif _LEMMA_FROM.fullmatch(angle):
                k = int(_LEMMA_FROM.fullmatch(angle).group(1))
                if k < 1:
                    raise MalformedLabel(f"{where}lemma positions start at 1")
                items.append(Label("lemma_from", k))
            else:
                try:
                    items.append(Label("mask", parse_mask(angle)))
                except MalformedMask as exc:
                    raise MalformedLabel(f"{where}{exc}") from None
        elif call is not None:
            items.append(Label("call", call))
        elif big is not None or digit is not None:
            k = int(big if big is not None else digit)
            if k < 1:
                raise MalformedLabel(f"{where}slot numbers start at 1")
            items.append(Label("slot", k))
        elif char in ("L", "R"):
            items.append(Label(char))
        else:
            if char in '"<>{}':
                raise MalformedLabel(f"{where}stray {char!r}")
            items.append(Label("lit", char))
    return items


def _split_output(text: str) -> tuple[str, str]:
    """Split ``items / output`` on the first '/' outside quotes and brackets."""
    depth = 0
    quoted = False
    k = 0
    while k < len(text):
        ch = text[k]
        if quoted:
            if ch == "\\":
                k += 1
            elif ch == '"':
                quoted = False
        elif ch == '"':
            quoted = True
        elif ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
        elif ch == "/" and depth == 0:
            return text[:k], text[k + 1:].strip()
        k += 1
    return text, ""


_TRANS = re.compile(r"^(\S+)\s*->\s*(\S+)\s*:(.*)$")


class _Builder:
    def __init__(self, name: str):
        self.name = name
        self.ids: dict[str, int] = {}
        self.names: list[str] = []
        self.initial: str | None = None
        self.finals: list[str] = []
        self.transitions: list[Transition] = []

    def state(self, name: str) -> int:
        if name not in self.ids:
            self.ids[name] = len(self.names)
            self.names.append(name)
        return self.ids[name]

    def fresh(self) -> int:
        k = 1
        while f"{len(self.names)}~{k}" in self.ids:
            k += 1
        return self.state(f"{len(self.names)}~{k}")

    def add(self, src: str, dst: str, items: list[Label], output: str) -> None:
        a = self.state(src)
        b = self.state(dst)
        if not items:
            items = [EPS]
        for i, label in enumerate(items):
            nxt = b if i == len(items) - 1 else self.fresh()
            self.transitions.append(Transition(a, nxt, label, output if i == 0 else ""))
            a = nxt

    def finish(self) -> MorphGraph:
        if not self.finals:
            raise NoFinalState(f"graph {self.name} has no final state")
        initial = self.state(self.initial if self.initial is not None else "0")
        finals = frozenset(self.state(f) for f in self.finals)
        return MorphGraph(
            self.name, len(self.names), initial, finals, self.transitions, list(self.names)
        )


def parse_grammar(text: str, into: GrammarSet | None = None, check: bool = True) -> GrammarSet:
    graphs = into if into is not None else GrammarSet()
    current: _Builder | None = None

    def close() -> None:
        if current is not None:
            graphs[current.name] = current.finish()

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if word == "graph":
            close()
            if not rest:
                raise MalformedLabel(f"line {lineno}: graph needs a name")
            if rest in graphs:
                raise GrammarError(f"line {lineno}: graph {rest!r} defined twice")
            current = _Builder(rest)
            continue
        if word == "end":
            close()
            current = None
            continue
        if current is None:
            raise MalformedLabel(f"line {lineno}: statement outside a graph")
        if word == "initial":
            current.initial = rest
            current.state(rest)
        elif word == "final":
            current.finals.extend(rest.split())
            for f in rest.split():
                current.state(f)
        else:
            m = _TRANS.match(line)
            if m is None:
                raise MalformedLabel(f"line {lineno}: cannot read {line!r}")
            items_text, output = _split_output(m.group(3))
            current.add(m.group(1), m.group(2), parse_items(items_text, lineno), output)
    close()
    if check:
        graphs.check()
    return graphs


def load_grammar(paths: str | Path | Iterable[str | Path]) -> GrammarSet:
    """Load a grammar file, a directory of ``*.grm`` files, or a list of those."""
    if isinstance(paths, (str, Path)):
        paths = [paths]
    graphs = GrammarSet()
    for p in paths:
        p = Path(p)
        files = sorted(p.glob("*.grm")) if p.is_dir() else [p]
        for f in files:
            parse_grammar(f.read_text(encoding="utf-8"), graphs, check=False)
    graphs.check()
    return graphs


# ---------------------------------------------------------------- flattening


def _trim(name: str, n: int, initial: int, finals: set[int], trans: list[Transition]) -> FlattenedFst:
    """Keep useful states only and renumber them breadth-first."""
    fwd: list[list[Transition]] = [[] for _ in range(n)]
    back: list[list[int]] = [[] for _ in range(n)]
    for t in trans:
        fwd[t.src].append(t)
        back[t.dst].append(t.src)
    reach = {initial}
    queue = deque([initial])
    order = []
    while queue:
        q = queue.popleft()
        order.append(q)
        for t in fwd[q]:
            if t.dst not in reach:
                reach.add(t.dst)
                queue.append(t.dst)
    live = set(finals)
    stack = list(finals)
    while stack:
        q = stack.pop()
        for p in back[q]:
            if p not in live:
                live.add(p)
                stack.append(p)
    keep = [q for q in order if q in live]
    if initial not in live:
        keep = [initial]
    number = {q: i for i, q in enumerate(keep)}
    new_trans = [
        Transition(number[t.src], number[t.dst], t.label, t.output)
        for q in keep
        for t in fwd[q]
        if t.dst in number
    ]
    new_finals = frozenset(number[q] for q in keep if q in finals)
    return FlattenedFst(name, len(keep), 0, new_finals, new_trans)


def _remove_free_epsilons(name: str, g: MorphGraph) -> FlattenedFst:
    """Drop ε steps without output by forwarding transitions over ε-closures."""
    free = [[] for _ in range(g.n_states)]
    for t in g.transitions:
        if t.label.kind == "eps" and not t.output:
            free[t.src].append(t.dst)
    closure = []
    for q in range(g.n_states):
        seen = {q}
        stack = [q]
        while stack:
            p = stack.pop()
            for r in free[p]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        closure.append(seen)
    trans = []
    finals = set()
    seen_t = set()
    for q in range(g.n_states):
        for p in sorted(closure[q]):
            if p in g.finals:
                finals.add(q)
            for t in g.out(p):
                if t.label.kind == "eps" and not t.output:
                    continue
                nt = Transition(q, t.dst, t.label, t.output)
                if nt not in seen_t:
                    seen_t.add(nt)
                    trans.append(nt)
    return _trim(name, g.n_states, g.initial, finals, trans)


def flatten(graphs: GrammarSet, root: str) -> FlattenedFst:
    """Inline every subgraph call reachable from ``root``."""
    if root not in graphs:
        raise UnresolvedSubgraph(f"no graph named {root!r}")
    done: dict[str, FlattenedFst] = {}
    active: list[str] = []

    def visit(name: str) -> FlattenedFst:
        if name in done:
            return done[name]
        if name in active:
            cycle = " -> ".join(active[active.index(name):] + [name])
            raise RecursiveGrammar(f"recursive calls: {cycle}")
        if name not in graphs:
            raise UnresolvedSubgraph(f"unknown graph {name!r}")
        active.append(name)
        g = graphs[name]
        n = g.n_states
        trans: list[Transition] = []
        for t in g.transitions:
            if t.label.kind != "call":
                trans.append(t)
                continue
            sub = visit(str(t.label.value))
            offset = n
            n += sub.n_states
            trans.append(Transition(t.src, offset + sub.initial, EPS, t.output))
            for st in sub.transitions:
                trans.append(Transition(st.src + offset, st.dst + offset, st.label, st.output))
            for f in sub.finals:
                trans.append(Transition(offset + f, t.dst, EPS, ""))
        raw = MorphGraph(name, n, g.initial, g.finals, trans)
        result = _remove_free_epsilons(name, raw)
        active.pop()
        done[name] = result
        return result

    return visit(root)


def build_agglutination(graphs: GrammarSet, root: str) -> FlattenedFst:
    """Flatten an agglutination grammar and check its labels."""
    fst = flatten(graphs, root)
    for t in fst.transitions:
        kind = t.label.kind
        if kind == "lit":
            clitic_segment(t)
        elif kind not in ("mask", "eps"):
            raise MalformedLabel(f"{t.label.render()} is not allowed in an agglutination grammar")
    return fst


def clitic_segment(t: Transition) -> DictEntry:
    """The dictionary-like entry a clitic literal stands for.

    The output is ``[lemma.]POS[+feat]*[:code]``; the lemma defaults to the
    literal itself.
    """
    lit = str(t.label.value)
    if not t.output:
        raise MalformedLabel(f"clitic {lit!r} needs an output such as {lit}.CONJC")
    out = t.output
    line = f"{lit},{out}" if "." in out.split(":")[0].split("+")[0] else f"{lit},{lit}.{out}"
    try:
        entry = parse_entry(line)
    except LexiconError as exc:
        raise MalformedLabel(f"bad clitic output {out!r}: {exc}") from None
    assert entry is not None
    return entry


def language(fst: MorphGraph, max_len: int = 12) -> set[tuple[str, ...]]:
    """Accepted label sequences (ε steps skipped) of length up to max_len."""
    result: set[tuple[str, ...]] = set()
    stack: list[tuple[int, tuple[str, ...], int]] = [(fst.initial, (), 0)]
    seen = set()
    while stack:
        q, seq, steps = stack.pop()
        key = (q, seq)
        if key in seen or steps > 4 * max_len + 8:
            continue
        seen.add(key)
        if q in fst.finals:
            result.add(seq)
        for t in fst.out(q):
            if t.label.kind == "eps":
                nseq = seq + ((t.output,) if t.output else ())
            else:
                nseq = seq + (t.label.render() + ("/" + t.output if t.output else ""),)
            if len(nseq) <= max_len:
                stack.append((t.dst, nseq, steps + 1))
    return result


def rtn_language(graphs: GrammarSet, root: str, max_len: int = 12) -> set[tuple[str, ...]]:
    """Same as ``language(flatten(...))`` but by interpreting calls directly."""
    result: set[tuple[str, ...]] = set()
    start = (root, graphs[root].initial, ())
    stack = [(start, (), 0)]
    seen = set()
    while stack:
        (name, q, calls), seq, steps = stack.pop()
        key = (name, q, calls, seq)
        if key in seen or steps > 8 * max_len + 16 or len(calls) > 32:
            continue
        seen.add(key)
        g = graphs[name]
        if q in g.finals:
            if not calls:
                result.add(seq)
            else:
                (rname, rstate), rest = calls[-1], calls[:-1]
                stack.append(((rname, rstate, rest), seq, steps + 1))
        for t in g.out(q):
            if t.label.kind == "call":
                sub = graphs[str(t.label.value)]
                nseq = seq + ((t.output,) if t.output else ())
                if len(nseq) <= max_len:
                    stack.append(((sub.name, sub.initial, calls + ((name, t.dst),)), nseq, steps + 1))
                continue
            if t.label.kind == "eps":
                nseq = seq + ((t.output,) if t.output else ())
            else:
                nseq = seq + (t.label.render() + ("/" + t.output if t.output else ""),)
            if len(nseq) <= max_len:
                stack.append(((name, t.dst, calls), nseq, steps + 1))
    return result


# ----------------------------------------------------------------- inflection


@dataclass
class InflectionBuffer:
    """Letters left of the cursor (produced) and right of it (pending)."""

    produced: str = ""
    pending: str = ""

    def surface(self) -> str:
        return self.produced + self.pending


def apply_label(buf: InflectionBuffer, label: Label, lemma: str) -> InflectionBuffer:
    kind = label.kind
    produced, pending = buf.produced, buf.pending
    if kind == "lit":
        for ch in str(label.value):
            if pending:
                pending = pending[1:]
            produced += ch
    elif kind == "L":
        if not produced:
            raise CursorUnderflow(f"L with no letter left of the cursor in {lemma!r}")
        produced, pending = produced[:-1], produced[-1] + pending
    elif kind == "R":
        if not pending:
            raise CursorOverflow(f"R with no letter right of the cursor in {lemma!r}")
        produced, pending = produced + pending[0], pending[1:]
    elif kind == "lemma":
        produced += lemma
    elif kind == "lemma_from":
        k = int(label.value)
        if k > len(lemma):
            raise SlotOutOfRange(f"<{k}.LEMMA> past the end of {lemma!r}")
        produced += lemma[k - 1:]
    elif kind == "slot":
        k = int(label.value)
        if k > len(lemma):
            raise SlotOutOfRange(f"slot {k} past the end of {lemma!r}")
        produced += lemma[k - 1]
    elif kind == "eps":
        pass
    else:
        raise MalformedLabel(f"{label.render()} cannot be used for inflection")
    return InflectionBuffer(produced, pending)


def inflect(
    lemma: str, transducer: MorphGraph, semitic: bool = False, max_steps: int = 512
) -> set[tuple[str, str]]:
    """All (surface, code) pairs produced by the accepting paths."""
    if transducer.calls():
        raise UnresolvedSubgraph(f"graph {transducer.name} still has calls; flatten it first")
    start = InflectionBuffer("", "") if semitic else InflectionBuffer(lemma, "")
    results: set[tuple[str, str]] = set()
    stack: list[tuple[int, InflectionBuffer, str, int]] = [(transducer.initial, start, "", 0)]
    while stack:
        q, buf, code, steps = stack.pop()
        if steps > max_steps:
            raise InflectionError(f"path longer than {max_steps} steps in {transducer.name}")
        if q in transducer.finals:
            results.add((buf.surface(), code))
        for t in transducer.out(q):
            stack.append((t.dst, apply_label(buf, t.label, lemma), code + t.output, steps + 1))
    return results


def parse_lemma_line(line: str, lineno: int | None = None) -> tuple[str, str] | None:
    body = line.split("/", 1)[0].strip()
    if not body:
        return None
    lemma, sep, cls = body.partition(",")
    if not sep or not lemma.strip() or not cls.strip():
        raise GrammarError(f"line {lineno}: expected lemma,CLASS")
    return lemma.strip(), cls.strip()


def generate_dictionary(lines: Iterable[str], graphs: GrammarSet) -> FlatDictionary:
    """Inflect every lemma of a ``lemma,CLASS`` lexicon; output is sorted."""
    cache: dict[str, FlattenedFst] = {}
    entries: set[DictEntry] = set()
    for lineno, line in enumerate(lines, 1):
        parsed = parse_lemma_line(line, lineno)
        if parsed is None:
            continue
        lemma, cls = parsed
        semitic = cls.startswith("$")
        name = cls[1:] if semitic else cls
        if name not in graphs:
            name = cls if cls in graphs else None
        if name is None:
            raise UnknownClass(f"line {lineno}: no graph for class {cls!r}")
        if name not in cache:
            cache[name] = flatten(graphs, name)
        for surface, code in inflect(lemma, cache[name], semitic):
            try:
                entry = parse_entry(f"{surface},{lemma}.{code}", lineno)
            except LexiconError as exc:
                raise GrammarError(f"class {cls}: generated a bad entry: {exc}") from None
            if entry is not None:
                entries.add(entry)
    flat = FlatDictionary()
    flat.entries = sorted(entries, key=lambda e: (e.surface, e.lemma, e.annotation))
    return flat


def iter_paths(fst: MorphGraph, limit: int = 100_000) -> Iterator[list[Transition]]:
    """Accepting paths of an acyclic graph (bounded)."""
    stack: list[tuple[int, list[Transition]]] = [(fst.initial, [])]
    count = 0
    while stack:
        q, path = stack.pop()
        if q in fst.finals:
            yield path
            count += 1
            if count >= limit:
                return
        for t in fst.out(q):
            if len(path) < 256:
                stack.append((t.dst, path + [t]))
