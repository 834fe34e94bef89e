import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harakat.alphabet import DIACRITICS
from harakat.rules import OMISSION_RULES, TypoRuleSet

from oracle import (
    BudgetExceeded,
    EnumBudget,
    NaiveLookup,
    enumerate_partial,
    lcs_length,
    mutate,
    reference_minimize,
    segment,
)
from synthetic import random_surface

OMIT_ONLY = TypoRuleSet.default().restricted_to(OMISSION_RULES)


def test_kataba_has_eight_spellings():
    assert enumerate_partial("kataba", OMIT_ONLY) == {
        "kataba", "katab", "katba", "katb", "ktaba", "ktab", "ktba", "ktb"}


def test_bare_surface_has_one_spelling():
    assert enumerate_partial("ktb", TypoRuleSet.all()) == {"ktb"}


def test_inversion_spelling_included():
    assert "kitAbAF" in enumerate_partial("kitaAbFA", TypoRuleSet.default())


@settings(max_examples=300)
@given(st.integers(0, 2**32 - 1))
def test_plain_vowels_double_the_count(seed):
    rng = random.Random(seed)
    letters = [rng.choice("ktbqrsl") for _ in range(rng.randint(1, 6))]
    surface = "".join(c + (rng.choice("auio") if rng.random() < 0.6 else "") for c in letters)
    d = sum(c in DIACRITICS for c in surface)
    assert len(enumerate_partial(surface, OMIT_ONLY)) == 2**d


def test_units_cover_the_surface():
    rng = random.Random(4)
    for _ in range(500):
        s = random_surface(rng)
        assert "".join(u for u, _ in segment(s)) == s


def test_budget_aborts_cleanly():
    with pytest.raises(BudgetExceeded):
        enumerate_partial("kataba", OMIT_ONLY, budget=EnumBudget(max_forms=4))
    with pytest.raises(BudgetExceeded):
        enumerate_partial("ka" * 21, OMIT_ONLY)


def test_mutants():
    assert len({m for m in mutate("katabatu") if len(m) == 8}) >= 81
    bare = mutate("ktb")
    assert bare and all(len(m) == 4 and sum(c in DIACRITICS for c in m) == 1 for m in bare)
    assert "kataba" not in mutate("kataba")


def test_naive_lookup_index_equals_scan():
    rng = random.Random(9)
    surfaces = sorted({random_surface(rng) for _ in range(300)})
    from harakat.lexicon import DictEntry

    entries = [DictEntry(s, s, "N", (), ("msDN",)) for s in surfaces]
    naive = NaiveLookup(entries, TypoRuleSet.default())
    for s in surfaces[:80]:
        for t in list(enumerate_partial(s, TypoRuleSet.default()))[:5]:
            assert naive.lookup(t) == naive.scan(t)
            assert (s, entries[surfaces.index(s)]) in naive.lookup(t)


def test_reference_minimize_small_cases():
    assert reference_minimize(["a"]) == 2
    assert reference_minimize(["ab", "cb"]) == 3
    assert reference_minimize(["ab", "cb"], {"ab": 1, "cb": 2}) == 5


def test_lcs():
    assert lcs_length("abcdefgh", "hbc") == 2
    assert lcs_length("", "abc") == 0
