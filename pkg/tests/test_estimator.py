import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from harakat.estimator import VowelRestorer, check_entries, check_tokens, fit_restorer
from harakat.rules import TypoRuleSet

from conftest import FIXTURES

LINES = ["kataba,ktb.V:aP3ms", "kutiba,ktb.V:bP3ms", "qamaru,qamar.N:msDN"]


def test_fit_predict():
    est = VowelRestorer().fit(LINES)
    assert est.n_entries_ == 3
    assert est.predict("ktb qmru xyz") == [["kataba", "kutiba"], ["qamaru"], []]
    assert est.score(["katb", "qmru"], ["kataba", "qamaru"]) == 1.0


def test_params_round_trip_through_clone():
    est = VowelRestorer(rules=TypoRuleSet.none(), cache=False)
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    twin.fit(LINES)
    assert twin.predict(["ktb", "kataba"]) == [[], ["kataba"]]


def test_grammar_and_files():
    est = VowelRestorer(grammar=FIXTURES / "det.grm").fit(FIXTURES / "golden.dic")
    assert est.predict(["Alqmru"]) == [["Alqamaru"]]
    assert [a.render() for a in est.transform(["OErAbN"])[0]] == []


def test_input_checks():
    with pytest.raises(NotFittedError):
        VowelRestorer().predict(["ktb"])
    with pytest.raises(ValueError):
        check_entries([])
    with pytest.raises(ValueError):
        check_entries(["kataba"])
    with pytest.raises(TypeError):
        check_entries([3])
    with pytest.raises(TypeError):
        check_tokens([b"ktb"])
    with pytest.raises(ValueError):
        fit_restorer(LINES).score(["ktb"], [])
