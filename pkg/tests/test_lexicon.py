import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harakat.lexicon import (
    FEATURES,
    DictEntry,
    MalformedEntry,
    MalformedMask,
    UnknownFeatureChar,
    UnknownPos,
    load_flat,
    mask_matches,
    parse_entry,
    parse_flat,
    parse_mask,
)


def test_parse_example_entry():
    e = parse_entry("takotubu,ktb.V:aI3fsN")
    assert (e.surface, e.lemma, e.pos, e.codes) == ("takotubu", "ktb", "V", ("aI3fsN",))


def test_comment_and_blank_lines():
    assert parse_entry("/ a comment line") is None
    assert parse_entry("   ") is None


def test_trailing_comment_is_dropped():
    e = parse_entry("kataba,ktb.V:aP3ms / he wrote")
    assert e.codes == ("aP3ms",)


def test_plural_noun_entry():
    e = parse_entry("nufaAyAatu,nufaAyap.N:fpDN")
    assert e.pos == "N" and e.codes == ("fpDN",) and e.lemma == "nufaAyap"


def test_empty_lemma_means_surface():
    assert parse_entry("fiy,.PREP").lemma == "fiy"


def test_semantic_features_and_multiple_codes():
    e = parse_entry("kaAna,kwn.V+nopro+z1:aP3ms:aP3fs")
    assert e.sem == ("nopro", "z1")
    assert e.codes == ("aP3ms", "aP3fs")
    assert e.render() == "kaAna,kwn.V+nopro+z1:aP3ms:aP3fs"


@pytest.mark.parametrize(
    "line, error",
    [
        ("kataba ktb.V:aP3ms", MalformedEntry),
        ("kataba,ktb V:aP3ms", MalformedEntry),
        ("kataba,ktb.XYZ:aP3ms", UnknownPos),
        ("kataba,ktb.V:aP3mx", UnknownFeatureChar),
        ("kataba,ktb.N:P", UnknownFeatureChar),
        ("kataba,ktb.V+pro+nopro:aP3ms", MalformedEntry),
    ],
)
def test_errors_carry_line_numbers(line, error):
    with pytest.raises(error) as info:
        parse_entry(line, 7)
    assert info.value.lineno == 7
    assert "line 7" in str(info.value)


def test_parse_flat_collects_diagnostics_and_keeps_going():
    flat = parse_flat(["kataba,ktb.V:aP3ms", "bad line", "kataba,ktb.V:aP3ms", "kataba,ktb.N:msDN", ""])
    assert [e.render() for e in flat.entries] == ["kataba,ktb.V:aP3ms", "kataba,ktb.N:msDN"]
    assert len(flat.diagnostics) == 1 and flat.diagnostics[0].lineno == 2


def test_load_flat(tmp_path):
    p = tmp_path / "d.dic"
    p.write_text("kataba,ktb.V:aP3ms\n/ comment\nkutiba,ktb.V:bP3ms\n", encoding="utf-8")
    flat = load_flat(p)
    assert len(flat.entries) == 2 and flat.linenos == [1, 3]


def test_mask_examples():
    m = parse_mask("<V:aI3mp>")
    assert m.pos == "V" and m.groups == (frozenset("aI3mp"),)
    m = parse_mask("<N>")
    assert m.pos == "N" and m.groups == () and m.lemma is None
    m = parse_mask("<PRO+Ppers+Acc:3fs>")
    assert m.pos == "PRO" and m.sem == frozenset({"Ppers", "Acc"}) and m.groups == (frozenset("3fs"),)
    m = parse_mask("<ktb.V>")
    assert m.lemma == "ktb"


@pytest.mark.parametrize("text", ["V:aI", "<>", "<V:>", "<XX>", "<V:aQ>"])
def test_malformed_masks(text):
    with pytest.raises(MalformedMask):
        parse_mask(text)


def test_mask_matching_examples():
    assert mask_matches(parse_mask("<N:G>"), parse_entry("x,y.N:fpDG"))
    assert mask_matches(parse_mask("<V:aP3ms>"), parse_entry("kataba,ktb.V:aP3ms"))
    assert not mask_matches(parse_mask("<V+nopro>"), parse_entry("kataba,ktb.V+pro:aP3ms"))
    assert not mask_matches(parse_mask("<N>"), parse_entry("kataba,ktb.V:aP3ms"))
    assert not mask_matches(parse_mask("<qtl.V>"), parse_entry("kataba,ktb.V:aP3ms"))
    assert mask_matches(parse_mask("<V:aI:aP>"), parse_entry("kataba,ktb.V:aP3ms"))


def test_indefinite_alias_only_for_nominals():
    assert mask_matches(parse_mask("<N:i>"), parse_entry("x,y.N:fpIN"))
    assert not mask_matches(parse_mask("<V:i>"), parse_entry("x,y.V:aI3ms"))


_CODES = {pos: sorted(chars) for pos, chars in FEATURES.items() if chars}


@st.composite
def entries_and_masks(draw):
    pos = draw(st.sampled_from(sorted(_CODES)))
    code = "".join(draw(st.lists(st.sampled_from(_CODES[pos]), min_size=1, max_size=5)))
    group = draw(st.lists(st.sampled_from(_CODES[pos]), min_size=1, max_size=4))
    return DictEntry("kataba", "ktb", pos, (), (code,)), pos, group


@settings(max_examples=500)
@given(entries_and_masks(), st.data())
def test_dropping_a_mask_character_never_shrinks_matches(case, data):
    entry, pos, group = case
    full = parse_mask(f"<{pos}:{''.join(group)}>")
    k = data.draw(st.integers(0, len(group) - 1))
    rest = group[:k] + group[k + 1:]
    smaller = parse_mask(f"<{pos}:{''.join(rest)}>" if rest else f"<{pos}>")
    if mask_matches(full, entry):
        assert mask_matches(smaller, entry)


@settings(max_examples=300)
@given(st.sampled_from(sorted(_CODES)), st.data())
def test_render_round_trip(pos, data):
    codes = tuple(
        "".join(data.draw(st.lists(st.sampled_from(_CODES[pos]), min_size=1, max_size=6)))
        for _ in range(data.draw(st.integers(1, 3)))
    )
    sem = tuple(data.draw(st.lists(st.sampled_from(["Hum", "Loc", "z1", "-Hum"]), max_size=2, unique=True)))
    entry = DictEntry("kataba", "ktb", pos, sem, codes)
    assert parse_entry(entry.render()) == entry
