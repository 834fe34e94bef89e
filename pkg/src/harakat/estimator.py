"""A scikit-learn style wrapper around dictionary compilation and analysis."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .compiler import TagMode, build
from .lexicon import DictEntry, parse_flat
from .lookup import Analysis, Analyzer
from .morphgraph import load_grammar
from .rules import TypoRuleSet, load_rules


def check_tokens(X) -> list[str]:
    """Accept a string (split on whitespace) or an iterable of strings."""
    if isinstance(X, str):
        return X.split()
    try:
        tokens = list(X)
    except TypeError:
        raise TypeError(f"expected an iterable of tokens, got {type(X).__name__}") from None
    for k, t in enumerate(tokens):
        if not isinstance(t, str):
            raise TypeError(f"token {k} is {type(t).__name__}, not str")
    return tokens


def check_entries(X) -> list[DictEntry]:
    """Dictionary entries from DictEntry objects and/or flat dictionary lines."""
    if isinstance(X, (str, Path)):
        X = Path(X).read_text(encoding="utf-8").splitlines()
    items = list(X)
    if not items:
        raise ValueError("cannot fit on an empty dictionary")
    lines = [x for x in items if isinstance(x, str)]
    entries = [x for x in items if isinstance(x, DictEntry)]
    if len(lines) + len(entries) != len(items):
        raise TypeError("dictionary items must be DictEntry objects or 'surface,lemma.POS:code' lines")
    if lines:
        flat = parse_flat(lines)
        if flat.diagnostics:
            raise ValueError(f"{len(flat.diagnostics)} malformed line(s); first: {flat.diagnostics[0]}")
        entries.extend(flat.entries)
    return entries


class VowelRestorer(BaseEstimator, TransformerMixin):
    """Tolerant dictionary lookup as an estimator.

    ``fit`` compiles a dictionary; ``transform`` returns the analyses of
    each token; ``predict`` returns the restored (fully vowelized) readings.

    Parameters
    ----------
    mode : {"semitic", "concat"}
        Compact tag style used when compiling.
    rules : TypoRuleSet, path or None
        Tolerance rules; None means the shipped defaults.
    grammar : path, list of paths or None
        Agglutination grammar files; None analyzes whole tokens.
    root : str
        Root graph of the agglutination grammar.
    cache : bool
    flatten : bool
    """

    def __init__(self, mode="semitic", rules=None, grammar=None, root="Word", cache=True, flatten=True):
        self.mode = mode
        self.rules = rules
        self.grammar = grammar
        self.root = root
        self.cache = cache
        self.flatten = flatten

    def _rules(self) -> TypoRuleSet:
        if self.rules is None:
            return TypoRuleSet.default()
        if isinstance(self.rules, TypoRuleSet):
            return self.rules
        return load_rules(self.rules)

    def fit(self, X, y=None):
        entries = check_entries(X)
        self.dictionary_ = build(entries, TagMode(self.mode))
        agg = None
        if self.grammar is not None:
            agg = (load_grammar(self.grammar), self.root)
        self.analyzer_ = Analyzer(self.dictionary_, self._rules(), agg, cache=self.cache, flatten=self.flatten)
        self.n_entries_ = self.dictionary_.entry_count
        return self

    def transform(self, X) -> list[list[Analysis]]:
        check_is_fitted(self, "analyzer_")
        return [self.analyzer_.analyze(t) for t in check_tokens(X)]

    def predict(self, X) -> list[list[str]]:
        """Distinct restored readings per token, sorted; empty when unknown."""
        return [sorted({a.restored for a in found}) for found in self.transform(X)]

    def score(self, X, y) -> float:
        """Share of tokens whose reference reading is among the predictions."""
        preds = self.predict(X)
        gold = list(y)
        if len(gold) != len(preds):
            raise ValueError(f"{len(preds)} tokens but {len(gold)} references")
        if not preds:
            return 0.0
        return sum(g in p for g, p in zip(gold, preds)) / len(preds)


def fit_restorer(lines: Iterable[str], **params) -> VowelRestorer:
    return VowelRestorer(**params).fit(list(lines))
