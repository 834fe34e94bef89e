from __future__ import annotations

import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
sys.path.insert(0, str(HERE))

from harakat.compiler import TagMode, build  # noqa: E402
from harakat.lexicon import load_flat  # noqa: E402
from harakat.lookup import Analyzer  # noqa: E402
from harakat.morphgraph import load_grammar  # noqa: E402
from harakat.rules import TypoRuleSet  # noqa: E402


@pytest.fixture(scope="session")
def default_rules() -> TypoRuleSet:
    return TypoRuleSet.default()


@pytest.fixture(scope="session")
def golden_dict():
    return build(load_flat(FIXTURES / "golden.dic").entries, TagMode.SEMITIC)


@pytest.fixture(scope="session")
def det_grammar():
    return load_grammar(FIXTURES / "det.grm")


@pytest.fixture(scope="session")
def golden_analyzer(golden_dict, default_rules, det_grammar):
    return Analyzer(golden_dict, default_rules, (det_grammar, "Word"))


@pytest.fixture(scope="session")
def verbs_dict():
    return build(load_flat(FIXTURES / "verbs.dic").entries, TagMode.SEMITIC)


@pytest.fixture(scope="session")
def clitic_grammar():
    return load_grammar(FIXTURES / "clitics.grm")


@pytest.fixture(scope="session")
def clitic_analyzer(verbs_dict, default_rules, clitic_grammar):
    return Analyzer(verbs_dict, default_rules, (clitic_grammar, "Word"))
