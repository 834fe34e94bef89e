"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 bad input data, 3 internal error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, TextIO

from .alphabet import from_translit, to_translit
from .compiler import (
    BinaryFormatError,
    CompiledDictionary,
    TagMode,
    build,
    deserialize,
    serialize,
    stats,
)
from .compiler.binfmt import MAGIC
from .lexicon import LexiconError, load_flat
from .lookup import Analyzer, annotate_text, count_partial_forms, spellcheck, to_arabic_analysis, tokenize
from .morphgraph import (
    GrammarError,
    InflectionError,
    build_agglutination,
    flatten,
    generate_dictionary,
    load_grammar,
)
from .rules import RuleError, TypoRuleSet, load_rules

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3

PACKAGE_DATA = Path(__file__).with_name("data")


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def data_dir() -> Path:
    """Directory holding default rules and grammars (HARAKAT_DATA overrides)."""
    env = os.environ.get("HARAKAT_DATA")
    return Path(env) if env else PACKAGE_DATA


def resolve_data(name: str | Path) -> Path:
    p = Path(name)
    if p.exists():
        return p
    candidate = data_dir() / p
    if candidate.exists():
        return candidate
    if data_dir() != PACKAGE_DATA and (PACKAGE_DATA / p).exists():
        return PACKAGE_DATA / p
    raise DataError(f"no such file: {name}")


@dataclass
class Config:
    dicts: list[str] = field(default_factory=list)
    rules: str | None = None
    grammar: list[str] = field(default_factory=list)
    root: str = "Word"
    mode: str = "semitic"
    encoding: str = "tbpp"
    format: str = "lines"
    cache: bool = True
    flatten: bool = True

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "Config":
        return cls(
            dicts=list(getattr(args, "dict", None) or []),
            rules=getattr(args, "rules", None),
            grammar=list(getattr(args, "grammar", None) or []),
            root=getattr(args, "root", "Word"),
            mode=getattr(args, "mode", "semitic"),
            encoding=getattr(args, "encoding", "tbpp"),
            format=getattr(args, "format", "lines"),
            cache=not getattr(args, "no_cache", False),
            flatten=not getattr(args, "no_flatten", False),
        )

    def load_rules(self) -> TypoRuleSet:
        return load_rules(resolve_data(self.rules or "typo-rules.txt"))

    def load_dictionaries(self) -> list[CompiledDictionary]:
        if not self.dicts:
            raise DataError("at least one --dict is required")
        return [load_dictionary(p, self.mode) for p in self.dicts]

    def grammar_spec(self):
        if not self.grammar:
            return None
        paths = [resolve_data("clitics.grm") if g == "default" else resolve_data(g) for g in self.grammar]
        return load_grammar(paths), self.root

    def analyzer(self) -> Analyzer:
        return Analyzer(
            self.load_dictionaries(), self.load_rules(), self.grammar_spec(), cache=self.cache, flatten=self.flatten
        )


def load_dictionary(path: str | Path, mode: str = "semitic") -> CompiledDictionary:
    """A compiled binary, or a flat text dictionary compiled on the fly."""
    path = resolve_data(path)
    with open(path, "rb") as fh:
        head = fh.read(len(MAGIC))
    if head == MAGIC:
        return deserialize(path)
    flat = load_flat(path)
    if flat.diagnostics:
        raise DataError(_diagnostic_summary(path, flat.diagnostics))
    return build(flat.entries, TagMode(mode))


def _diagnostic_summary(path, diagnostics) -> str:
    shown = "\n".join(f"  {d}" for d in diagnostics[:5])
    more = f"\n  ... and {len(diagnostics) - 5} more" if len(diagnostics) > 5 else ""
    return f"{path}: {len(diagnostics)} malformed line(s)\n{shown}{more}"


def _open_in(name: str | None) -> TextIO:
    if name is None or name == "-":
        return sys.stdin
    return open(name, encoding="utf-8")


def _open_out(name: str | None):
    if name is None or name == "-":
        return contextlib.nullcontext(sys.stdout)
    return open(name, "w", encoding="utf-8")


def _input_lines(names: list[str]) -> Iterator[str]:
    for name in names or ["-"]:
        fh = _open_in(name)
        try:
            yield from fh
        finally:
            if fh is not sys.stdin:
                fh.close()


# ------------------------------------------------------------ parallel pool

_WORKER: Analyzer | None = None


def _init_worker(cfg: Config) -> None:
    global _WORKER
    _WORKER = cfg.analyzer()


def _analyze_chunk(tokens: list[str]):
    assert _WORKER is not None
    return [_WORKER.analyze(t) for t in tokens]


def _chunks(items: Iterable, size: int) -> Iterator[list]:
    chunk = []
    for item in items:
        chunk.append(item)
        if len(chunk) == size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def analyzed_tokens(cfg: Config, lines: Iterable[str], jobs: int = 1):
    """(written, analyses) pairs in input order, optionally from a worker pool."""
    if jobs <= 1:
        yield from annotate_text(cfg.analyzer(), lines, cfg.encoding)
        return
    pairs = ((w, tb) for line in lines for w, tb in tokenize(line, cfg.encoding))
    with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(cfg,)) as pool:
        for chunk in _chunks(pairs, 2000):
            results = pool.map(_analyze_chunk, [[tb for _, tb in part] for part in _chunks(chunk, 250)])
            flat = [a for part in results for a in part]
            yield from zip((w for w, _ in chunk), flat)


def format_token(written: str, analyses, fmt: str, arabic: bool) -> str:
    if arabic:
        analyses = [to_arabic_analysis(a) for a in analyses]
    if fmt == "json":
        return json.dumps(
            {"token": written, "known": bool(analyses), "analyses": [a.as_dict() for a in analyses]},
            ensure_ascii=False,
        )
    if not analyses:
        return f"{written}\t?"
    return written + "\t" + "\t".join(a.render() for a in analyses)


# ------------------------------------------------------------------ commands


def cmd_compile(args) -> int:
    flat = load_flat(resolve_data(args.input))
    if flat.diagnostics:
        print(_diagnostic_summary(args.input, flat.diagnostics), file=sys.stderr)
        return EXIT_DATA
    t0 = time.perf_counter()
    cd = build(flat.entries, TagMode(args.mode))
    size = serialize(cd, args.output)
    elapsed = time.perf_counter() - t0
    s = stats(cd)
    flat_bytes = Path(resolve_data(args.input)).stat().st_size
    rows = [
        ("Entries", s["entries"]),
        ("INF codes", s["inf"]),
        ("States", s["states"]),
        ("Transitions", s["transitions"]),
        ("Flat file (bytes)", flat_bytes),
        ("Compiled (bytes)", size),
    ]
    for name, value in rows:
        print(f"{name:<20}{value:>14,}")
    ratio = size / flat_bytes if flat_bytes else 0.0
    print(f"{'Ratio':<20}{ratio:>14.2%}")
    print(f"{'Time (s)':<20}{elapsed:>14.2f}")
    return EXIT_OK


def cmd_generate(args) -> int:
    graphs = load_grammar([resolve_data(g) for g in args.grammar])
    lines = list(_input_lines([args.input]))
    t0 = time.perf_counter()
    flat = generate_dictionary(lines, graphs)
    with _open_out(args.output) as out:
        for e in flat.entries:
            out.write(e.render() + "\n")
    lemmas = len({e.lemma for e in flat.entries})
    print(f"{len(flat.entries)} forms from {lemmas} lemmas in {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return EXIT_OK


def cmd_flatten(args) -> int:
    graphs = load_grammar([resolve_data(g) for g in args.grammar])
    fst = build_agglutination(graphs, args.root) if args.agglutination else flatten(graphs, args.root)
    n_states = sum(g.n_states for g in graphs.values())
    n_trans = sum(len(g.transitions) for g in graphs.values())
    with _open_out(args.output) as out:
        out.write(fst.render() + "\n")
    print(
        f"{len(graphs)} graphs, {n_states} states, {n_trans} transitions -> "
        f"1 graph, {fst.n_states} states, {len(fst.transitions)} transitions",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_analyze(args) -> int:
    cfg = Config.from_args(args)
    arabic = cfg.encoding == "arabic"
    with _open_out(args.output) as out:
        for written, analyses in analyzed_tokens(cfg, _input_lines(args.input), args.jobs):
            out.write(format_token(written, analyses, cfg.format, arabic) + "\n")
    return EXIT_OK


def cmd_restore(args) -> int:
    """One output line per input line, each token replaced by its readings."""
    cfg = Config.from_args(args)
    analyzer = cfg.analyzer()
    arabic = cfg.encoding == "arabic"
    with _open_out(args.output) as out:
        for line in _input_lines(args.input):
            words = []
            for written, analyses in annotate_text(analyzer, line, cfg.encoding):
                readings = sorted({a.restored for a in analyses})
                if arabic:
                    readings = [from_translit(r) for r in readings]
                if not readings:
                    words.append(written)
                elif len(readings) == 1:
                    words.append(readings[0])
                else:
                    words.append("{" + "|".join(readings) + "}")
            out.write(" ".join(words) + "\n")
    return EXIT_OK


def cmd_spellcheck(args) -> int:
    cfg = Config.from_args(args)
    analyzer = cfg.analyzer()
    with _open_out(args.output) as out:
        for flag in spellcheck(analyzer, _input_lines(args.input), cfg.encoding):
            if cfg.format == "json":
                out.write(json.dumps(flag._asdict(), ensure_ascii=False) + "\n")
            else:
                out.write(f"{flag.index}\t{flag.token}\t{flag.kind}\n")
    return EXIT_OK


def cmd_count(args) -> int:
    cfg = Config.from_args(args)
    total = 0
    for cd in cfg.load_dictionaries():
        total += count_partial_forms(cd)
    print(total)
    return EXIT_OK


def cmd_translit(args) -> int:
    convert = to_translit if args.to == "tbpp" else from_translit
    unknown: set[str] = set()
    with _open_out(args.output) as out:
        for line in _input_lines(args.input):
            out.write(convert(line, unknown))
    if unknown:
        print("unmapped characters: " + " ".join(sorted(unknown)), file=sys.stderr)
    return EXIT_OK


def _rate(analyzer: Analyzer, tokens: list[str]) -> tuple[float, float]:
    t0 = time.perf_counter()
    for t in tokens:
        analyzer.analyze(t)
    elapsed = time.perf_counter() - t0
    return elapsed, (len(tokens) / elapsed if elapsed > 0 else 0.0)


def bench(cfg: Config, tokens: list[str]) -> dict:
    """Throughput figures for a token list; safe on an empty list."""
    dicts, rules, agg = cfg.load_dictionaries(), cfg.load_rules(), cfg.grammar_spec()
    report: dict = {"tokens": len(tokens), "distinct": len(set(tokens))}
    _, report["uncached_tps"] = _rate(Analyzer(dicts, rules, agg, cache=False), tokens)
    cached = Analyzer(dicts, rules, agg, cache=True)
    _rate(cached, tokens)
    _, report["cached_tps"] = _rate(cached, tokens)
    report["cache_speedup"] = report["cached_tps"] / report["uncached_tps"] if report["uncached_tps"] else 0.0
    if agg is not None:
        _, flat_tps = _rate(Analyzer(dicts, rules, agg, cache=False, flatten=True), tokens)
        _, rtn_tps = _rate(Analyzer(dicts, rules, agg, cache=False, flatten=False), tokens)
        report["flat_tps"], report["rtn_tps"] = flat_tps, rtn_tps
        report["flatten_speedup"] = flat_tps / rtn_tps if rtn_tps else 0.0
    return report


def cmd_bench(args) -> int:
    cfg = Config.from_args(args)
    tokens = [tb for line in _input_lines([args.corpus]) for _, tb in tokenize(line, cfg.encoding)]
    report = bench(cfg, tokens)
    if cfg.format == "json":
        print(json.dumps(report))
    else:
        for key, value in report.items():
            print(f"{key:<16}{value:>14,.1f}" if isinstance(value, float) else f"{key:<16}{value:>14,}")
    return EXIT_OK


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="harakat", description="Vowel-tolerant Arabic dictionary lookup.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def lookup_options(p, need_dict=True):
        p.add_argument("--dict", action="append", required=need_dict, metavar="PATH",
                       help="compiled or flat dictionary (repeatable)")
        p.add_argument("--rules", metavar="PATH", help="rule file (default: shipped rules)")
        p.add_argument("--grammar", action="append", metavar="PATH",
                       help="agglutination grammar file or directory; 'default' for the shipped one")
        p.add_argument("--root", default="Word", help="root graph of the grammar")
        p.add_argument("--mode", choices=["semitic", "concat"], default="semitic",
                       help="tag style when compiling a flat dictionary")
        p.add_argument("--encoding", choices=["arabic", "tbpp"], default="tbpp")
        p.add_argument("--format", choices=["lines", "json"], default="lines")
        p.add_argument("--no-cache", action="store_true")
        p.add_argument("--no-flatten", action="store_true")
        p.add_argument("-o", "--output", metavar="PATH")

    p = sub.add_parser("compile", help="compile a flat dictionary to binary")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--mode", choices=["semitic", "concat"], default="semitic")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("generate", help="inflect a lemma lexicon")
    p.add_argument("input", help="lines 'lemma,CLASS'")
    p.add_argument("--grammar", action="append", required=True, metavar="PATH")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("flatten", help="inline the subgraph calls of a grammar")
    p.add_argument("--grammar", action="append", required=True, metavar="PATH")
    p.add_argument("--root", default="Word")
    p.add_argument("--agglutination", action="store_true", help="also check clitic labels")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_flatten)

    for name, func, help_ in (
        ("analyze", cmd_analyze, "all analyses of every token"),
        ("restore", cmd_restore, "text with restored vowels"),
        ("spellcheck", cmd_spellcheck, "flag unknown tokens and misplaced diacritics"),
    ):
        p = sub.add_parser(name, help=help_)
        lookup_options(p)
        p.add_argument("input", nargs="*", help="text files (default: stdin)")
        if name == "analyze":
            p.add_argument("--jobs", type=int, default=1)
        p.set_defaults(func=func)

    p = sub.add_parser("count", help="number of partially vowelized spellings")
    lookup_options(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("translit", help="convert between Arabic script and TB++")
    p.add_argument("--to", choices=["tbpp", "arabic"], required=True)
    p.add_argument("input", nargs="*")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_translit)

    p = sub.add_parser("bench", help="throughput with and without cache and flattening")
    lookup_options(p)
    p.add_argument("corpus")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DataError, LexiconError, BinaryFormatError, GrammarError, InflectionError, RuleError,
            UnicodeDecodeError, OSError) as exc:
        print(f"harakat: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (AssertionError, RecursionError) as exc:
        print(f"harakat: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
